//! Compilation of polynomials and rational functions of gap values into
//! guess protocols, and majority of guess protocols.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{Pow, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::families::{s_parts, t_structure, TStructure};
use super::polynomial::IntPolynomial;
use super::rational::RationalFunction;
use crate::error::{Error, Result};
use crate::protocols::{ceil_log2, Domain, GuessProtocol};

/// Default cap on the guess count of a compiled protocol.
pub const MAX_COMPILED_GUESSES: u64 = 1 << 20;

/// Largest `m` (the gap bound is `2^m`) accepted by the majority compiler.
pub const MAX_MAJORITY_M: usize = 12;
pub const MAX_MAJORITY_K: usize = 9;

/// Largest `ceil(log l)` of a majority protocol.
pub const MAX_MAJORITY_LOG_GUESSES: u64 = 1 << 16;

/// Upper bounds on guess count and PP cost.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CostBound {
    #[serde(serialize_with = "crate::util::ser_display")]
    pub guesses: BigUint,
    pub cost: u64,
}

impl CostBound {
    pub fn holds(&self, g: &GuessProtocol) -> bool {
        g.guess_count() <= &self.guesses && g.pp_cost() <= self.cost
    }
}

fn shared_domain(protocols: &[GuessProtocol]) -> Result<Domain> {
    let first = protocols
        .first()
        .ok_or_else(|| Error::InvalidArgument("at least one protocol is required".into()))?;
    if let Some(p) = protocols.iter().find(|p| p.domain() != first.domain()) {
        return Err(Error::DomainMismatch(format!("{} vs {}", first.domain(), p.domain())));
    }
    Ok(first.domain())
}

fn check_arity(protocols: &[GuessProtocol], nvars: usize) -> Result<Domain> {
    let domain = shared_domain(protocols)?;
    if protocols.len() != nvars {
        return Err(Error::InvalidArgument(format!(
            "{} protocols for a polynomial in {nvars} variables",
            protocols.len()
        )));
    }
    Ok(domain)
}

/// Largest guess count and largest member cost.
fn l_and_c(protocols: &[GuessProtocol]) -> (BigUint, usize) {
    let l = protocols.iter().map(|p| p.guess_count().clone()).max().unwrap_or_default();
    let c = protocols.iter().map(|p| p.max_member_cost()).max().unwrap_or(0);
    (l, c)
}

/// Exact guess count `lemma1_compile` produces: `sum |c_a| prod l_i^a_i`.
pub fn lemma1_guess_count(protocols: &[GuessProtocol], p: &IntPolynomial) -> Result<BigUint> {
    check_arity(protocols, p.nvars())?;
    let mut total = BigUint::zero();
    for (e, c) in p.terms() {
        let mut t = c.magnitude().clone();
        for (g, &a) in protocols.iter().zip(e) {
            t *= Pow::pow(g.guess_count(), a);
        }
        total += t;
    }
    Ok(total.max(BigUint::from(2u32) * u32::from(p.is_zero())))
}

/// `M l^d (d+k)^(k+1)` guesses and `ceil(log M + d log l + (k+1) log(d+k)) + c d` bits,
/// with `l`, `c` the largest guess count and member cost of the inputs.
/// `None` for the zero polynomial, where `M = 0`.
pub fn lemma1_bound(protocols: &[GuessProtocol], p: &IntPolynomial) -> Result<Option<CostBound>> {
    check_arity(protocols, p.nvars())?;
    if p.is_zero() {
        return Ok(None);
    }
    let (l, c) = l_and_c(protocols);
    let d = p.degree();
    let k = p.nvars() as u32;
    let guesses = p.lc().magnitude() * Pow::pow(&l, d) * Pow::pow(BigUint::from(d + k), k + 1);
    let cost = ceil_log2(&guesses) + c as u64 * d as u64;
    Ok(Some(CostBound { guesses, cost }))
}

/// `(M l^d (2d+k)^(k+1))^2` guesses and `2 (ceil(log M + d log l + (k+1) log(2d+k)) + c d)` bits.
pub fn lemma2_bound_from(m: &BigInt, d: u32, k: u32, l: &BigUint, c: usize) -> CostBound {
    let base = m.magnitude() * Pow::pow(l, d) * Pow::pow(BigUint::from(2 * d + k), k + 1);
    let cost = 2 * (ceil_log2(&base) + c as u64 * d as u64);
    CostBound {
        guesses: &base * &base,
        cost,
    }
}

pub fn lemma2_bound(protocols: &[GuessProtocol], r: &RationalFunction) -> Result<Option<CostBound>> {
    check_arity(protocols, r.nvars())?;
    if r.numerator().is_zero() {
        return Ok(None);
    }
    let (l, c) = l_and_c(protocols);
    Ok(Some(lemma2_bound_from(&r.lc(), r.degree(), r.nvars() as u32, &l, c)))
}

/// Powers `g^a` built as product chains, shared between monomials.
struct Powers<'a> {
    base: &'a [GuessProtocol],
    cache: HashMap<(usize, u32), GuessProtocol>,
}

impl<'a> Powers<'a> {
    fn new(base: &'a [GuessProtocol]) -> Self {
        Powers {
            base,
            cache: HashMap::new(),
        }
    }

    fn get(&mut self, i: usize, a: u32) -> Result<GuessProtocol> {
        debug_assert!(a >= 1);
        if let Some(g) = self.cache.get(&(i, a)) {
            return Ok(g.clone());
        }
        let g = if a == 1 {
            self.base[i].clone()
        } else {
            self.get(i, a - 1)?.product(&self.base[i])?
        };
        self.cache.insert((i, a), g.clone());
        Ok(g)
    }
}

/// `lemma1_compile` with an explicit guess-count cap (`None` for no cap).
///
/// Each monomial `c z^a` becomes the product of `a_i` copies of protocol `i`
/// (in variable order), complemented when `c < 0` and replicated `|c|`
/// times; the monomial protocols are concatenated in increasing exponent
/// order. A constant monomial uses the one-guess always-accepting protocol.
/// The zero polynomial compiles to `(1, 0)`.
pub fn lemma1_compile_capped(protocols: &[GuessProtocol], p: &IntPolynomial, cap: Option<&BigUint>) -> Result<GuessProtocol> {
    let domain = check_arity(protocols, p.nvars())?;
    if let Some(cap) = cap {
        let count = lemma1_guess_count(protocols, p)?;
        if &count > cap {
            return Err(Error::Guard(format!("compiled protocol would have {count} guesses, limit is {cap}")));
        }
    }
    if p.is_zero() {
        return GuessProtocol::constants(domain, &[true, false]);
    }
    let mut powers = Powers::new(protocols);
    let mut parts = Vec::with_capacity(p.term_count());
    for (e, c) in p.terms() {
        let mut mono: Option<GuessProtocol> = None;
        for (i, &a) in e.iter().enumerate() {
            if a == 0 {
                continue;
            }
            let f = powers.get(i, a)?;
            mono = Some(match mono {
                None => f,
                Some(m) => m.product(&f)?,
            });
        }
        let mut mono = match mono {
            Some(m) => m,
            None => GuessProtocol::constants(domain, &[true])?,
        };
        if c.is_negative() {
            mono = mono.complement();
        }
        parts.push(mono.replicate(c.magnitude())?);
    }
    GuessProtocol::sum_all(&parts)
}

/// A guess protocol whose gap is `p(gap_1, ..., gap_k)` at every input.
pub fn lemma1_compile(protocols: &[GuessProtocol], p: &IntPolynomial) -> Result<GuessProtocol> {
    lemma1_compile_capped(protocols, p, Some(&BigUint::from(MAX_COMPILED_GUESSES)))
}

/// `lemma1_compile` applied to `p q` for `r = p / q`. The gap has the sign of
/// `r(gaps)` wherever `q(gaps) != 0`.
pub fn lemma2_compile_capped(protocols: &[GuessProtocol], r: &RationalFunction, cap: Option<&BigUint>) -> Result<GuessProtocol> {
    let pq = r.numerator().mul(r.denominator())?;
    lemma1_compile_capped(protocols, &pq, cap)
}

pub fn lemma2_compile(protocols: &[GuessProtocol], r: &RationalFunction) -> Result<GuessProtocol> {
    lemma2_compile_capped(protocols, r, Some(&BigUint::from(MAX_COMPILED_GUESSES)))
}

/// The two univariate factors a member contributes to the majority protocol:
/// `2 N(z) D(z)` and `D(z)^2`, compiled over that member.
#[derive(Clone, Debug)]
pub struct MajorityFactors {
    pub odd: GuessProtocol,
    pub even: GuessProtocol,
}

/// Compiles `p q` for `T^(k)_m = p / q` without expanding it.
///
/// `p q = sum_i 2 N(z_i) D(z_i) prod_{j != i} D(z_j)^2 + prod_j D(z_j)^2`,
/// a sum of products of univariate polynomials in distinct variables whose
/// monomial supports are pairwise disjoint, so the protocol built from
/// univariate `lemma1_compile` outputs has exactly the gap and guess count of
/// `lemma1_compile` applied to the expanded `p q`.
#[derive(Clone, Debug)]
pub struct MajorityCompiler {
    k: usize,
    m: usize,
    odd: IntPolynomial,
    even: IntPolynomial,
    structure: TStructure,
}

impl MajorityCompiler {
    pub fn new(k: usize, m: usize) -> Result<Self> {
        if k == 0 || k.is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!("majority needs an odd number of protocols, got {k}")));
        }
        if k > MAX_MAJORITY_K || m > MAX_MAJORITY_M {
            return Err(Error::Guard(format!(
                "majority supports k <= {MAX_MAJORITY_K} and gap bound 2^m with m <= {MAX_MAJORITY_M}; got k={k}, m={m}"
            )));
        }
        let (n, d) = s_parts(2 * k, m);
        let odd = n.mul(&d)?.scale(&BigInt::from(2));
        let even = d.mul(&d)?;
        Ok(MajorityCompiler {
            k,
            m,
            odd,
            even,
            structure: t_structure(k, m)?,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn structure(&self) -> &TStructure {
        &self.structure
    }

    /// Factors for one member, which must already satisfy `1 <= |gap| <= 2^m`.
    pub fn factors(&self, member: &GuessProtocol) -> Result<MajorityFactors> {
        let one = std::slice::from_ref(member);
        Ok(MajorityFactors {
            odd: lemma1_compile_capped(one, &self.odd, None)?,
            even: lemma1_compile_capped(one, &self.even, None)?,
        })
    }

    pub fn combine(&self, factors: &[&MajorityFactors]) -> Result<GuessProtocol> {
        if factors.len() != self.k {
            return Err(Error::InvalidArgument(format!("{} members for majority of {}", factors.len(), self.k)));
        }
        let product = |odd_at: Option<usize>| -> Result<GuessProtocol> {
            let mut acc: Option<GuessProtocol> = None;
            for (j, f) in factors.iter().enumerate() {
                let g = if Some(j) == odd_at { &f.odd } else { &f.even };
                acc = Some(match acc {
                    None => g.clone(),
                    Some(a) => a.product(g)?,
                });
            }
            Ok(acc.expect("k >= 1"))
        };
        let mut parts = Vec::with_capacity(self.k + 1);
        for i in 0..self.k {
            parts.push(product(Some(i))?);
        }
        parts.push(product(None)?);
        let g = GuessProtocol::sum_all(&parts)?;
        if ceil_log2(g.guess_count()) > MAX_MAJORITY_LOG_GUESSES {
            return Err(Error::Guard(format!(
                "majority protocol needs more than 2^{MAX_MAJORITY_LOG_GUESSES} guesses"
            )));
        }
        Ok(g)
    }

    /// The `lemma2_bound` for `T^(k)_m` with its actual degree and largest
    /// coefficient, for members with at most `l` guesses and member cost `c`.
    pub fn bound(&self, l: &BigUint, c: usize) -> CostBound {
        let s = &self.structure;
        lemma2_bound_from(&s.lc, s.degree, self.k as u32, l, c)
    }
}

/// Normalized members and the parameter `m` (largest PP cost) for majority.
pub fn majority_prepare(protocols: &[GuessProtocol]) -> Result<(Vec<GuessProtocol>, usize)> {
    shared_domain(protocols)?;
    let normalized: Vec<GuessProtocol> = protocols.iter().map(|g| g.normalize_nonzero()).collect();
    let m = normalized.iter().map(|g| g.pp_cost()).max().unwrap_or(0);
    let m = usize::try_from(m).map_err(|_| Error::Guard("member cost too large".into()))?;
    Ok((normalized, m))
}

/// A guess protocol accepting in PP mode exactly where a majority of the
/// inputs accept. Members are normalized first so `1 <= |gap_i| <= 2^c`
/// with `c` the largest normalized PP cost, then `T^(k)_c` is compiled.
pub fn majority_compile(protocols: &[GuessProtocol]) -> Result<GuessProtocol> {
    let (normalized, m) = majority_prepare(protocols)?;
    let compiler = MajorityCompiler::new(normalized.len(), m)?;
    let factors = normalized.iter().map(|g| compiler.factors(g)).collect::<Result<Vec<_>>>()?;
    compiler.combine(&factors.iter().collect::<Vec<_>>())
}

/// The `lemma2_bound` `majority_compile` is checked against.
pub fn majority_bound(protocols: &[GuessProtocol]) -> Result<CostBound> {
    let (normalized, m) = majority_prepare(protocols)?;
    let compiler = MajorityCompiler::new(normalized.len(), m)?;
    let (l, c) = l_and_c(&normalized);
    Ok(compiler.bound(&l, c))
}

/// `log2` of a positive big integer, for reporting.
pub fn log2_big(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 52 {
        return n.to_f64().unwrap_or(0.0).log2();
    }
    let shift = bits - 52;
    (n >> shift).to_f64().unwrap_or(0.0).log2() + shift as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::families::build_t;
    use crate::poly::parse::{parse_polynomial, parse_rational_function};
    use crate::protocols::DeterministicProtocol;

    fn d12() -> Domain {
        Domain::new(1, 2)
    }

    /// Gap grid [[3, -1]] on a 1x2 domain.
    fn gap_3_minus_1() -> GuessProtocol {
        let d = d12();
        let bob = DeterministicProtocol::bob_bit(d, vec![true, false]).unwrap();
        let one = DeterministicProtocol::constant(d, true);
        GuessProtocol::new(vec![one, bob.clone(), bob]).unwrap()
    }

    fn gaps(g: &GuessProtocol) -> Vec<i64> {
        g.gap_grid().iter().map(|v| v.to_i64().unwrap()).collect()
    }

    #[test]
    fn identity_polynomial() {
        let g = gap_3_minus_1();
        assert_eq!(gaps(&g), vec![3, -1]);
        let out = lemma1_compile(std::slice::from_ref(&g), &parse_polynomial("z1", None).unwrap()).unwrap();
        assert_eq!(gaps(&out), vec![3, -1]);
    }

    #[test]
    fn square() {
        let g = gap_3_minus_1();
        let out = lemma1_compile(std::slice::from_ref(&g), &parse_polynomial("z1^2", None).unwrap()).unwrap();
        assert_eq!(gaps(&out), vec![9, 1]);
        assert_eq!(out.count_profile(1 << 10).unwrap().gap, out.gap_profile().gap);
    }

    #[test]
    fn constants_and_zero() {
        let g = gap_3_minus_1();
        let one = std::slice::from_ref(&g);
        let out = lemma1_compile(one, &parse_polynomial("-3", Some(1)).unwrap()).unwrap();
        assert_eq!(gaps(&out), vec![-3, -3]);
        assert_eq!(out.guess_count(), &BigUint::from(3u32));
        let out = lemma1_compile(one, &IntPolynomial::zero(1)).unwrap();
        assert_eq!(gaps(&out), vec![0, 0]);
        assert_eq!(lemma1_bound(one, &IntPolynomial::zero(1)).unwrap(), None);
    }

    #[test]
    fn arity_and_domain_errors() {
        let g = gap_3_minus_1();
        let p = parse_polynomial("z1*z2", None).unwrap();
        assert!(lemma1_compile(std::slice::from_ref(&g), &p).is_err());
        let other = GuessProtocol::constants(Domain::new(2, 2), &[true]).unwrap();
        assert!(matches!(lemma1_compile(&[g, other], &p), Err(Error::DomainMismatch(_))));
    }

    #[test]
    fn guard_on_guess_count() {
        let g = gap_3_minus_1();
        let p = parse_polynomial("z1^13", None).unwrap();
        assert!(matches!(lemma1_compile(std::slice::from_ref(&g), &p), Err(Error::Guard(_))));
        assert!(lemma1_compile_capped(std::slice::from_ref(&g), &p, None).is_ok());
    }

    #[test]
    fn lemma2_examples() {
        let g = gap_3_minus_1();
        let one = std::slice::from_ref(&g);
        let r = parse_rational_function("1 / z1", None).unwrap();
        let out = lemma2_compile(one, &r).unwrap();
        assert_eq!(gaps(&out), vec![3, -1]);
        let r = parse_rational_function("z1 - 2 / z1 + 4", None).unwrap();
        let out = lemma2_compile(one, &r).unwrap();
        // (3-2)(3+4) = 7 and (-1-2)(-1+4) = -9
        assert_eq!(gaps(&out), vec![7, -9]);
        let b = lemma2_bound(one, &r).unwrap().unwrap();
        assert!(b.holds(&out));
    }

    #[test]
    fn lemma1_bound_values() {
        let g = gap_3_minus_1();
        let p = parse_polynomial("2*z1^2 - 5", None).unwrap();
        let b = lemma1_bound(std::slice::from_ref(&g), &p).unwrap().unwrap();
        // M l^d (d+k)^(k+1) = 5 * 9 * 9
        assert_eq!(b.guesses, BigUint::from(405u32));
        assert_eq!(b.cost, 9 + 2);
        let out = lemma1_compile(std::slice::from_ref(&g), &p).unwrap();
        assert_eq!(out.guess_count(), &BigUint::from(2u32 * 9 + 5));
        assert!(b.holds(&out));
    }

    fn const_member(d: Domain, accept: bool) -> GuessProtocol {
        GuessProtocol::constants(d, &[accept]).unwrap()
    }

    #[test]
    fn majority_of_one_and_constants() {
        let g = gap_3_minus_1();
        let out = majority_compile(std::slice::from_ref(&g)).unwrap();
        assert_eq!(out.accepted(), g.accepted());
        let d = Domain::new(2, 2);
        let out = majority_compile(&[const_member(d, true), const_member(d, true), const_member(d, false)]).unwrap();
        assert_eq!(out.accepted().count_ones(), 4);
        let out = majority_compile(&[const_member(d, false), const_member(d, true), const_member(d, false)]).unwrap();
        assert_eq!(out.accepted().count_ones(), 0);
        assert!(majority_compile(&[const_member(d, true), const_member(d, true)]).is_err());
    }

    /// The factored majority protocol agrees with `lemma2_compile` applied to the
    /// expanded `T` in gap, guess count and cost.
    #[test]
    fn factored_majority_matches_expanded_lemma2() {
        let d = Domain::new(2, 2);
        let a = GuessProtocol::new(vec![DeterministicProtocol::alice_bit(d, vec![true, false]).unwrap()]).unwrap();
        let b = GuessProtocol::new(vec![DeterministicProtocol::bob_bit(d, vec![false, true]).unwrap()]).unwrap();
        // Constant members keep m = 2, where the expanded product stays small.
        let t = const_member(d, true);
        let f = const_member(d, false);
        for members in [vec![a.clone()], vec![b.clone()], vec![t.clone(), f.clone(), f.clone()], vec![f, t.clone(), t]] {
            let (normalized, m) = majority_prepare(&members).unwrap();
            let k = members.len();
            let expanded = build_t(k, m).unwrap();
            let flat = lemma2_compile_capped(&normalized, &expanded, None).unwrap();
            let factored = majority_compile(&members).unwrap();
            assert_eq!(flat.gap_grid(), factored.gap_grid(), "k={k}");
            assert_eq!(flat.guess_count(), factored.guess_count());
            assert_eq!(flat.pp_cost(), factored.pp_cost());
            let bound = majority_bound(&members).unwrap();
            assert_eq!(bound, lemma2_bound(&normalized, &expanded).unwrap().unwrap());
            assert!(bound.holds(&factored));
        }
    }

    #[test]
    fn log2_of_big_values() {
        assert!((log2_big(&BigUint::from(1024u32)) - 10.0).abs() < 1e-12);
        let big = BigUint::from(3u32) << 300u32;
        assert!((log2_big(&big) - (300.0 + 3f64.log2())).abs() < 1e-9);
    }
}
