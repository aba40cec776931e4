use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};

use crate::error::{Error, Result};

/// Exponent vector of a monomial.
pub type Exponents = Vec<u32>;

/// A polynomial with integer coefficients in `k` variables `z1..zk`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    nvars: usize,
    terms: BTreeMap<Exponents, BigInt>,
}

impl IntPolynomial {
    pub fn zero(nvars: usize) -> Self {
        IntPolynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: impl Into<BigInt>) -> Self {
        Self::monomial(nvars, vec![0; nvars], c.into())
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, 1)
    }

    /// The variable `z_{i+1}` (0-based index `i`).
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(nvars, e, BigInt::one())
    }

    pub fn monomial(nvars: usize, exponents: Exponents, c: BigInt) -> Self {
        assert_eq!(exponents.len(), nvars, "exponent vector length");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exponents, c);
        }
        IntPolynomial { nvars, terms }
    }

    /// Builds a polynomial from terms; repeated exponents are combined.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Exponents, BigInt)>) -> Result<Self> {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::InvalidArgument(format!(
                    "exponent vector {e:?} has length {} in a {nvars}-variable polynomial",
                    e.len()
                )));
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    /// Univariate polynomial from coefficients, lowest degree first.
    pub fn univariate(coeffs: &[BigInt]) -> Self {
        let mut p = Self::zero(1);
        for (a, c) in coeffs.iter().enumerate() {
            p.add_term(vec![a as u32], c.clone());
        }
        p
    }

    fn add_term(&mut self, e: Exponents, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &BigInt)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, e: &[u32]) -> BigInt {
        self.terms.get(e).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn check_vars(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::InvalidArgument(format!(
                "variable count mismatch: {} vs {}",
                self.nvars, other.nvars
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&BigInt::from(-1))
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        IntPolynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        let mut acc: HashMap<Exponents, BigInt> = HashMap::with_capacity(self.terms.len().max(other.terms.len()));
        let mut e = vec![0u32; self.nvars];
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                for ((x, a), b) in e.iter_mut().zip(e1).zip(e2) {
                    *x = a + b;
                }
                let prod = c1 * c2;
                match acc.get_mut(&e) {
                    Some(v) => *v += prod,
                    None => {
                        acc.insert(e.clone(), prod);
                    }
                }
            }
        }
        Ok(IntPolynomial {
            nvars: self.nvars,
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        })
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut result = Self::one(self.nvars);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = result.mul(&base).expect("same variables");
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base).expect("same variables");
            }
        }
        result
    }

    /// Total degree; the zero polynomial has degree 0.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    /// Largest exponent of variable `i`.
    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|e| e[i]).max().unwrap_or(0)
    }

    /// Largest exponent of any single variable.
    pub fn max_var_degree(&self) -> u32 {
        (0..self.nvars).map(|i| self.degree_in(i)).max().unwrap_or(0)
    }

    /// Absolute value of the largest coefficient.
    pub fn lc(&self) -> BigInt {
        self.terms.values().map(|c| c.abs()).max().unwrap_or_default()
    }

    /// Sum of absolute values of the coefficients.
    pub fn abs_sum(&self) -> BigInt {
        self.terms.values().map(|c| c.abs()).sum()
    }

    pub fn evaluate(&self, z: &[BigInt]) -> Result<BigInt> {
        if z.len() != self.nvars {
            return Err(Error::InvalidArgument(format!(
                "{} values for a {}-variable polynomial",
                z.len(),
                self.nvars
            )));
        }
        let mut powers: Vec<Vec<BigInt>> = z.iter().map(|v| vec![BigInt::one(), v.clone()]).collect();
        let mut total = BigInt::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &a) in e.iter().enumerate() {
                let table = &mut powers[i];
                while table.len() <= a as usize {
                    let next = table.last().expect("nonempty") * &z[i];
                    table.push(next);
                }
                t *= &table[a as usize];
            }
            total += t;
        }
        Ok(total)
    }

    pub fn evaluate_i64(&self, z: &[i64]) -> Result<BigInt> {
        let z: Vec<BigInt> = z.iter().map(|&v| BigInt::from(v)).collect();
        self.evaluate(&z)
    }

    pub fn evaluate_rational(&self, z: &[BigRational]) -> Result<BigRational> {
        if z.len() != self.nvars {
            return Err(Error::InvalidArgument(format!(
                "{} values for a {}-variable polynomial",
                z.len(),
                self.nvars
            )));
        }
        let mut total = BigRational::zero();
        for (e, c) in &self.terms {
            let mut t = BigRational::from_integer(c.clone());
            for (v, &a) in z.iter().zip(e) {
                t *= Pow::pow(v, a);
            }
            total += t;
        }
        Ok(total)
    }

    /// `p(-z_1, ..., -z_k)`.
    pub fn negate_variables(&self) -> Self {
        IntPolynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let odd = e.iter().sum::<u32>() % 2 == 1;
                    (e.clone(), if odd { -c } else { c.clone() })
                })
                .collect(),
        }
    }

    /// A univariate polynomial viewed as a polynomial in variable `i` of `nvars`.
    pub fn embed(&self, nvars: usize, i: usize) -> Result<Self> {
        if self.nvars != 1 || i >= nvars {
            return Err(Error::InvalidArgument(format!(
                "cannot embed a {}-variable polynomial as variable {i} of {nvars}",
                self.nvars
            )));
        }
        Ok(IntPolynomial {
            nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut x = vec![0; nvars];
                    x[i] = e[0];
                    (x, c.clone())
                })
                .collect(),
        })
    }
}

impl fmt::Display for IntPolynomial {
    /// Terms in decreasing exponent order, e.g. `z1^3-5*z1^2+8*z1-4`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (e, c)) in self.terms.iter().rev().enumerate() {
            if c.is_negative() {
                write!(f, "-")?;
            } else if n > 0 {
                write!(f, "+")?;
            }
            let a = c.abs();
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &p)| p > 0)
                .map(|(i, &p)| if p == 1 { format!("z{}", i + 1) } else { format!("z{}^{p}", i + 1) })
                .collect();
            if vars.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{a}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}
