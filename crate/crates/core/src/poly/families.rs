//! The polynomials `P_m`, `S^(k)_m` and `T^(k)_m` used for majority.

use num_bigint::BigInt;
use num_traits::{One, Pow};

use super::polynomial::IntPolynomial;
use super::rational::RationalFunction;
use crate::error::{Error, Result};

pub const MAX_FAMILY_K: usize = 5;
pub const MAX_FAMILY_M: usize = 6;

/// Largest term count an expanded `T` may reach.
pub const MAX_EXPANDED_TERMS: u128 = 1 << 18;

/// Least odd `h` with `h >= log2(2k + 1)`, i.e. `2^h >= 2k + 1`.
pub fn h(k: usize) -> u32 {
    assert!(k >= 1, "h(k) needs k >= 1");
    let mut h = 1u32;
    while (1u128 << h) < 2 * k as u128 + 1 {
        h += 2;
    }
    h
}

/// `P_m(z) = (z - 1) prod_{i=1..m} (z - 2^i)^2`.
pub fn build_p(m: usize) -> IntPolynomial {
    let z = IntPolynomial::var(1, 0);
    let mut p = z.sub(&IntPolynomial::one(1)).expect("univariate");
    for i in 1..=m {
        let root = IntPolynomial::constant(1, BigInt::one() << i);
        let f = z.sub(&root).expect("univariate");
        p = p.mul(&f.mul(&f).expect("univariate")).expect("univariate");
    }
    p
}

/// Numerator and denominator of `S^(k)_m`:
/// `P(-z)^h - P(z)^h` and `P(-z)^h + P(z)^h` with `h = h(k)`.
pub fn s_parts(k: usize, m: usize) -> (IntPolynomial, IntPolynomial) {
    let hk = h(k);
    let p = build_p(m).pow(hk);
    let q = p.negate_variables();
    (q.sub(&p).expect("univariate"), q.add(&p).expect("univariate"))
}

fn check_family(k: usize, m: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    if k > MAX_FAMILY_K || m > MAX_FAMILY_M {
        return Err(Error::Guard(format!(
            "polynomial families are limited to k <= {MAX_FAMILY_K}, m <= {MAX_FAMILY_M}; got k={k}, m={m}"
        )));
    }
    Ok(())
}

pub fn build_s(k: usize, m: usize) -> Result<RationalFunction> {
    check_family(k, m)?;
    let (n, d) = s_parts(k, m);
    RationalFunction::new(n, d)
}

/// `sum_i 2 S^(2k)_m(z_i) + 1` over the common denominator `prod_i D(z_i)`.
///
/// Numerator: `sum_i 2 N(z_i) prod_{j != i} D(z_j) + prod_j D(z_j)`.
pub fn build_t(k: usize, m: usize) -> Result<RationalFunction> {
    check_family(k, m)?;
    let (n, d) = s_parts(2 * k, m);
    let estimate = (d.term_count().max(n.term_count()) as u128)
        .checked_pow(k as u32)
        .and_then(|t| t.checked_mul(k as u128 + 1));
    if estimate.is_none_or(|t| t > MAX_EXPANDED_TERMS) {
        return Err(Error::Guard(format!(
            "expanded T^({k})_{m} would have about {} terms, limit is {MAX_EXPANDED_TERMS}",
            estimate.map_or("overflowing".to_string(), |t| t.to_string())
        )));
    }
    let ns: Vec<IntPolynomial> = (0..k).map(|i| n.embed(k, i).expect("univariate")).collect();
    let ds: Vec<IntPolynomial> = (0..k).map(|i| d.embed(k, i).expect("univariate")).collect();
    let product = |skip: Option<usize>| {
        ds.iter()
            .enumerate()
            .filter(|(j, _)| Some(*j) != skip)
            .fold(IntPolynomial::one(k), |acc, (_, dj)| acc.mul(dj).expect("same variables"))
    };
    let den = product(None);
    let mut num = den.clone();
    for (i, ni) in ns.iter().enumerate() {
        let term = ni.scale(&BigInt::from(2)).mul(&product(Some(i)))?;
        num = num.add(&term)?;
    }
    RationalFunction::new(num, den)
}

/// Degrees and largest coefficient of the expanded `T^(k)_m`, obtained from
/// its univariate factors without expanding.
///
/// The numerator's summands have pairwise different parity patterns in the
/// exponents (`N` is odd, `D` even), so no two of them share a monomial, and a
/// product of polynomials in distinct variables has as coefficients exactly
/// the products of factor coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TStructure {
    pub k: usize,
    pub m: usize,
    pub h2k: u32,
    pub degree: u32,
    pub max_var_degree: u32,
    pub num_lc: BigInt,
    pub den_lc: BigInt,
    pub lc: BigInt,
}

pub fn t_structure(k: usize, m: usize) -> Result<TStructure> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let (n, d) = s_parts(2 * k, m);
    let (dn, dd) = (n.degree(), d.degree());
    let kk = k as u32;
    let den_degree = kk * dd;
    let num_degree = (dn + (kk - 1) * dd).max(den_degree);
    let den_lc = Pow::pow(d.lc(), kk);
    let sum_lc = BigInt::from(2) * n.lc() * Pow::pow(d.lc(), kk - 1);
    let num_lc = sum_lc.max(den_lc.clone());
    Ok(TStructure {
        k,
        m,
        h2k: h(2 * k),
        degree: num_degree.max(den_degree),
        max_var_degree: dn.max(dd),
        lc: num_lc.clone().max(den_lc.clone()),
        num_lc,
        den_lc,
    })
}
