//! Randomized PP protocols: exact error, majority amplification, Newman
//! sparsification and the minimax check over finite protocol families.

use std::collections::BTreeMap;

use num_bigint::{BigInt, RandBigInt};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::lp::{max_min_rows, min_max_columns};
use crate::matrix::{parse_rational, BooleanMatrix};
use crate::poly::compile::{majority_prepare, CostBound, MajorityCompiler};
use crate::protocols::serialize::{guess_from_json, guess_to_json};
use crate::protocols::{Domain, GuessProtocol};
use crate::util::ser_display;

/// Largest support an amplified protocol may have.
pub const MAX_AMPLIFY_TUPLES: u64 = 100_000;
pub const DEFAULT_NEWMAN_RETRIES: u32 = 32;

/// Tolerance for comparing the two minimax game values.
pub const YAO_TOLERANCE: f64 = 1e-9;

pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// A probability distribution over guess protocols, evaluated in PP mode.
#[derive(Clone, Debug)]
pub struct RandomizedPPProtocol {
    domain: Domain,
    support: Vec<(GuessProtocol, BigRational)>,
}

impl RandomizedPPProtocol {
    pub fn new(support: Vec<(GuessProtocol, BigRational)>) -> Result<Self> {
        let Some((first, _)) = support.first() else {
            return Err(Error::InvalidArgument("randomized protocol needs a nonempty support".into()));
        };
        let domain = first.domain();
        if let Some((g, _)) = support.iter().find(|(g, _)| g.domain() != domain) {
            return Err(Error::DomainMismatch(format!("{domain} vs {}", g.domain())));
        }
        if let Some((_, p)) = support.iter().find(|(_, p)| p.is_negative()) {
            return Err(Error::InvalidArgument(format!("negative probability {p}")));
        }
        let total: BigRational = support.iter().map(|(_, p)| p).sum();
        if !total.is_one() {
            return Err(Error::InvalidArgument(format!("probabilities sum to {total}, not 1")));
        }
        Ok(RandomizedPPProtocol { domain, support })
    }

    pub fn deterministic(g: GuessProtocol) -> Self {
        RandomizedPPProtocol {
            domain: g.domain(),
            support: vec![(g, BigRational::one())],
        }
    }

    /// Uniform distribution over the list, repetitions counted with multiplicity.
    pub fn uniform(members: Vec<GuessProtocol>) -> Result<Self> {
        let n = members.len();
        if n == 0 {
            return Err(Error::InvalidArgument("randomized protocol needs a nonempty support".into()));
        }
        let p = BigRational::new(BigInt::one(), BigInt::from(n));
        Self::new(members.into_iter().map(|g| (g, p.clone())).collect())
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn support(&self) -> &[(GuessProtocol, BigRational)] {
        &self.support
    }

    fn check_shape(&self, f: &BooleanMatrix) -> Result<()> {
        if (f.rows(), f.cols()) != (self.domain.rows, self.domain.cols) {
            return Err(Error::DomainMismatch(format!(
                "protocol over {} but matrix is {}x{}",
                self.domain,
                f.rows(),
                f.cols()
            )));
        }
        Ok(())
    }

    /// Probability of a wrong answer at each input, row-major.
    pub fn error_grid(&self, f: &BooleanMatrix) -> Result<Vec<BigRational>> {
        self.check_shape(f)?;
        let mut grid = vec![BigRational::zero(); self.domain.size()];
        for (g, p) in &self.support {
            if p.is_zero() {
                continue;
            }
            let accepted = g.accepted();
            for (cell, (a, b)) in grid.iter_mut().zip(accepted.entries().iter().zip(f.entries())) {
                if a != b {
                    *cell += p;
                }
            }
        }
        Ok(grid)
    }

    /// The largest per-input error probability.
    pub fn error(&self, f: &BooleanMatrix) -> Result<BigRational> {
        Ok(self.error_grid(f)?.into_iter().max().expect("nonempty domain"))
    }

    /// Largest PP cost over members with positive probability.
    pub fn bppp_cost(&self) -> u64 {
        self.support
            .iter()
            .filter(|(_, p)| p.is_positive())
            .map(|(g, _)| g.pp_cost())
            .max()
            .unwrap_or(0)
    }

    pub fn to_json(&self) -> Result<Value> {
        let support = self
            .support
            .iter()
            .map(|(g, p)| {
                let mut v = guess_to_json(g)?;
                let obj = v.as_object_mut().expect("object");
                obj.remove("rows");
                obj.remove("cols");
                obj.insert("probability".into(), Value::String(p.to_string()));
                Ok(v)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(json!({ "rows": self.domain.rows, "cols": self.domain.cols, "support": support }))
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::InvalidArgument(m.to_string());
        let obj = v.as_object().ok_or_else(|| bad("randomized protocol must be an object"))?;
        let rows = obj.get("rows").cloned().ok_or_else(|| bad("missing rows"))?;
        let cols = obj.get("cols").cloned().ok_or_else(|| bad("missing cols"))?;
        let support = obj
            .get("support")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing support array"))?
            .iter()
            .map(|entry| {
                let p = entry
                    .get("probability")
                    .and_then(Value::as_str)
                    .and_then(parse_rational)
                    .ok_or_else(|| bad("support entry needs a probability string like \"1/3\""))?;
                let guesses = entry.get("guesses").cloned().ok_or_else(|| bad("support entry without guesses"))?;
                let g = guess_from_json(&json!({ "rows": rows, "cols": cols, "guesses": guesses }))?;
                Ok((g, p))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(support)
    }
}

fn check_eps_t(eps: &BigRational, t: u64) -> Result<()> {
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    if !eps.is_positive() || eps > &half {
        return Err(Error::InvalidArgument(format!("eps must lie in (0, 1/2], got {eps}")));
    }
    if t == 0 || t.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!("t must be odd and positive, got {t}")));
    }
    Ok(())
}

/// `1 - (1/2)(1 - 4 eps^2)^(t/2)`, the success probability guaranteed for a
/// majority of `t` independent trials that each succeed with probability
/// `1/2 + eps`. Rounded to 12 significant digits.
pub fn chernoff_bound(eps: &BigRational, t: u64) -> Result<f64> {
    check_eps_t(eps, t)?;
    let base = BigRational::one() - BigRational::from_integer(BigInt::from(4)) * eps * eps;
    let tail = 0.5 * rational_to_f64(&base).powf(t as f64 / 2.0);
    Ok(round_sig(1.0 - tail, 12))
}

pub fn round_sig(x: f64, digits: i32) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let scale = 10f64.powi(digits - 1 - x.abs().log10().floor() as i32);
    (x * scale).round() / scale
}

/// Exact test of `error <= (1/2)(1 - 4 eps^2)^(t/2)`, via `(2 error)^2 <= (1 - 4 eps^2)^t`.
pub fn within_chernoff_tail(error: &BigRational, eps: &BigRational, t: u64) -> Result<bool> {
    check_eps_t(eps, t)?;
    if error.is_negative() {
        return Ok(true);
    }
    let two_e = error * BigRational::from_integer(BigInt::from(2));
    let base = BigRational::one() - BigRational::from_integer(BigInt::from(4)) * eps * eps;
    Ok(&two_e * &two_e <= Pow::pow(base, t as u32))
}

/// Majority of `t` independent trials each correct with probability `p`.
pub fn majority_success(p: &BigRational, t: u64) -> BigRational {
    let q = BigRational::one() - p;
    let mut total = BigRational::zero();
    let mut binom = BigInt::one();
    for j in 0..=t {
        if 2 * j > t {
            total += BigRational::from_integer(binom.clone()) * Pow::pow(p, j as u32) * Pow::pow(&q, (t - j) as u32);
        }
        binom = binom * BigInt::from(t - j) / BigInt::from(j + 1);
    }
    total
}

#[derive(Clone, Debug)]
pub struct Amplified {
    pub protocol: RandomizedPPProtocol,
    /// Gap bound exponent used for `T^(t)_m`.
    pub m: usize,
    /// The `lemma2_bound` every tuple protocol satisfies.
    pub bound: CostBound,
}

/// Runs `t` independent copies and takes the PP majority.
///
/// The support is every `t`-tuple of positive-probability members with the
/// product probability; each tuple is compiled by the majority construction
/// with one parameter `m` (the largest normalized member cost) for all tuples.
pub fn amplify(rp: &RandomizedPPProtocol, t: usize) -> Result<Amplified> {
    if t == 0 || t.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!("t must be odd, got {t}")));
    }
    let members: Vec<&(GuessProtocol, BigRational)> = rp.support.iter().filter(|(_, p)| p.is_positive()).collect();
    let tuples = (members.len() as u64).checked_pow(t as u32);
    if tuples.is_none_or(|n| n > MAX_AMPLIFY_TUPLES) {
        return Err(Error::Guard(format!(
            "{} members to the power {t} exceeds {MAX_AMPLIFY_TUPLES} tuples",
            members.len()
        )));
    }
    let guesses: Vec<GuessProtocol> = members.iter().map(|(g, _)| g.clone()).collect();
    let (normalized, m) = majority_prepare(&guesses)?;
    let compiler = MajorityCompiler::new(t, m)?;
    let factors = normalized.iter().map(|g| compiler.factors(g)).collect::<Result<Vec<_>>>()?;
    let l = normalized.iter().map(|g| g.guess_count().clone()).max().expect("nonempty");
    let c = normalized.iter().map(|g| g.max_member_cost()).max().expect("nonempty");
    let bound = compiler.bound(&l, c);

    let n = members.len();
    let mut support = Vec::with_capacity(tuples.expect("checked") as usize);
    let mut index = vec![0usize; t];
    loop {
        let chosen: Vec<_> = index.iter().map(|&i| &factors[i]).collect();
        let p: BigRational = index.iter().map(|&i| members[i].1.clone()).product();
        support.push((compiler.combine(&chosen)?, p));
        let mut pos = t;
        loop {
            if pos == 0 {
                return Ok(Amplified {
                    protocol: RandomizedPPProtocol::new(support)?,
                    m,
                    bound,
                });
            }
            pos -= 1;
            index[pos] += 1;
            if index[pos] < n {
                break;
            }
            index[pos] = 0;
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NewmanReport {
    pub seed: u64,
    pub trials: usize,
    pub attempts: u32,
    #[serde(serialize_with = "ser_display")]
    pub base_error: BigRational,
    #[serde(serialize_with = "ser_display")]
    pub delta: BigRational,
    /// Exact error of each attempt, in order.
    pub measured: Vec<String>,
    #[serde(skip)]
    pub protocol: RandomizedPPProtocol,
}

/// Draws `trials` members i.i.d. from the distribution and keeps the uniform
/// distribution on the sample once its exact error is at most
/// `error(rp) + delta`. Attempt `i` uses seed `seed + i`.
pub fn newman_sparsify(
    rp: &RandomizedPPProtocol,
    f: &BooleanMatrix,
    delta: &BigRational,
    trials: usize,
    seed: u64,
    retries: u32,
) -> Result<NewmanReport> {
    if !delta.is_positive() && !delta.is_zero() {
        return Err(Error::InvalidArgument(format!("delta must be nonnegative, got {delta}")));
    }
    if trials == 0 {
        return Err(Error::InvalidArgument("at least one trial is required".into()));
    }
    let base_error = rp.error(f)?;
    let target = &base_error + delta;
    // Cumulative weights over a common denominator.
    let den = rp
        .support
        .iter()
        .fold(BigInt::one(), |acc, (_, p)| acc.lcm(p.denom()));
    let mut cumulative = Vec::with_capacity(rp.support.len());
    let mut running = BigInt::zero();
    for (_, p) in &rp.support {
        running += p.numer() * (&den / p.denom());
        cumulative.push(running.clone());
    }
    let den_u = den.to_biguint().expect("positive denominator");
    let mut measured = Vec::new();
    for attempt in 0..retries.max(1) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt as u64));
        let sample: Vec<GuessProtocol> = (0..trials)
            .map(|_| {
                let r = BigInt::from(rng.gen_biguint_below(&den_u));
                let i = cumulative.partition_point(|c| c <= &r);
                rp.support[i].0.clone()
            })
            .collect();
        let candidate = RandomizedPPProtocol::uniform(sample)?;
        let err = candidate.error(f)?;
        measured.push(err.to_string());
        if err <= target {
            return Ok(NewmanReport {
                seed,
                trials,
                attempts: attempt + 1,
                base_error,
                delta: delta.clone(),
                measured,
                protocol: candidate,
            });
        }
    }
    Err(Error::NotConverged(format!(
        "no sample of {trials} members reached error <= {target} in {} attempts; measured errors: {}",
        retries.max(1),
        measured.join(", ")
    )))
}

#[derive(Clone, Debug, Serialize)]
pub struct YaoReport {
    pub family_size: usize,
    /// Distinct error patterns among the family (LP columns).
    pub distinct_patterns: usize,
    #[serde(serialize_with = "ser_display")]
    pub primal_value: BigRational,
    #[serde(serialize_with = "ser_display")]
    pub dual_value: BigRational,
    pub difference: f64,
    pub agree: bool,
    /// Optimal distribution over the family, as `(index, probability)` with
    /// nonzero probabilities only.
    pub protocol_strategy: Vec<(usize, String)>,
    /// Optimal input distribution, row-major.
    pub input_strategy: Vec<String>,
    /// Whether the game value is at most `eps`.
    pub within_eps: Option<bool>,
}

/// Solves both sides of the zero-sum game between a distribution over the
/// family and a distribution over inputs, with payoff 1 when the protocol
/// errs: `min_alpha max_input` and `max_mu min_protocol`.
pub fn yao_minimax_check(f: &BooleanMatrix, family: &[GuessProtocol], eps: Option<&BigRational>) -> Result<YaoReport> {
    let Some(first) = family.first() else {
        return Err(Error::InvalidArgument("protocol family is empty".into()));
    };
    let domain = first.domain();
    if (domain.rows, domain.cols) != (f.rows(), f.cols()) {
        return Err(Error::DomainMismatch(format!("family over {domain}, matrix {}x{}", f.rows(), f.cols())));
    }
    let mut patterns: BTreeMap<Vec<bool>, usize> = BTreeMap::new();
    let mut columns: Vec<(Vec<bool>, usize)> = Vec::new();
    for (i, g) in family.iter().enumerate() {
        if g.domain() != domain {
            return Err(Error::DomainMismatch(format!("{domain} vs {}", g.domain())));
        }
        let errs: Vec<bool> = g.accepted().entries().iter().zip(f.entries()).map(|(a, b)| a != b).collect();
        if !patterns.contains_key(&errs) {
            patterns.insert(errs.clone(), columns.len());
            columns.push((errs, i));
        }
    }
    let payoff: Vec<Vec<BigRational>> = (0..domain.size())
        .map(|x| {
            columns
                .iter()
                .map(|(errs, _)| if errs[x] { BigRational::one() } else { BigRational::zero() })
                .collect()
        })
        .collect();
    let primal = min_max_columns(&payoff)?;
    let dual = max_min_rows(&payoff)?;
    let difference = rational_to_f64(&(&primal.value - &dual.value)).abs();
    Ok(YaoReport {
        family_size: family.len(),
        distinct_patterns: columns.len(),
        within_eps: eps.map(|e| &primal.value <= e),
        agree: difference <= YAO_TOLERANCE,
        difference,
        protocol_strategy: columns
            .iter()
            .zip(&primal.strategy)
            .filter(|(_, q)| !q.is_zero())
            .map(|((_, i), q)| (*i, q.to_string()))
            .collect(),
        input_strategy: dual.strategy.iter().map(|p| p.to_string()).collect(),
        primal_value: primal.value,
        dual_value: dual.value,
    })
}

/// Guess count as a float exponent, for reports on very large protocols.
pub fn log2_guesses(g: &GuessProtocol) -> f64 {
    crate::poly::compile::log2_big(g.guess_count())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocols::{enumerate_protocols, DeterministicProtocol};

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn single(p: DeterministicProtocol) -> GuessProtocol {
        GuessProtocol::single(p)
    }

    fn exact(f: &BooleanMatrix) -> GuessProtocol {
        single(DeterministicProtocol::for_matrix(f))
    }

    fn flip_cells(f: &BooleanMatrix, cells: &[(usize, usize)]) -> BooleanMatrix {
        BooleanMatrix::from_fn(f.rows(), f.cols(), |i, j| f.get(i, j) ^ cells.contains(&(i, j))).unwrap()
    }

    /// Uniform over three members; member `a` errs exactly on the cells of
    /// the 4x4 grid with `(i + j) % 3 == a`.
    fn error_third(f: &BooleanMatrix) -> RandomizedPPProtocol {
        let members = (0..3)
            .map(|a| {
                let cells: Vec<(usize, usize)> = (0..4)
                    .flat_map(|i| (0..4).map(move |j| (i, j)))
                    .filter(|(i, j)| (i + j) % 3 == a)
                    .collect();
                exact(&flip_cells(f, &cells))
            })
            .collect();
        RandomizedPPProtocol::uniform(members).unwrap()
    }

    fn diag4() -> BooleanMatrix {
        BooleanMatrix::from_fn(4, 4, |i, j| i == j).unwrap()
    }

    #[test]
    fn error_examples() {
        let f = diag4();
        assert_eq!(RandomizedPPProtocol::deterministic(exact(&f)).error(&f).unwrap(), r(0, 1));
        let wrong = exact(&flip_cells(&f, &(0..4).flat_map(|i| (0..4).map(move |j| (i, j))).collect::<Vec<_>>()));
        let coin = RandomizedPPProtocol::uniform(vec![exact(&f), wrong]).unwrap();
        assert_eq!(coin.error(&f).unwrap(), r(1, 2));
        let third = error_third(&f);
        assert_eq!(third.error(&f).unwrap(), r(1, 3));
        // brute force over support x inputs
        let mut worst = r(0, 1);
        for i in 0..4 {
            for j in 0..4 {
                let mut e = r(0, 1);
                for (g, p) in third.support() {
                    if g.pp_eval(i, j).unwrap() != f.get(i, j) {
                        e += p;
                    }
                }
                worst = worst.max(e);
            }
        }
        assert_eq!(worst, r(1, 3));
    }

    #[test]
    fn support_validation() {
        let g = GuessProtocol::constants(Domain::new(2, 2), &[true]).unwrap();
        assert!(RandomizedPPProtocol::new(vec![(g.clone(), r(1, 2))]).is_err());
        assert!(RandomizedPPProtocol::new(vec![(g.clone(), r(3, 2)), (g.clone(), r(-1, 2))]).is_err());
        assert!(RandomizedPPProtocol::new(vec![]).is_err());
        let h = GuessProtocol::constants(Domain::new(3, 2), &[true]).unwrap();
        assert!(RandomizedPPProtocol::new(vec![(g, r(1, 2)), (h, r(1, 2))]).is_err());
    }

    #[test]
    fn bppp_cost_examples() {
        let d = Domain::new(4, 4);
        let cost = |c: usize| {
            let mut p = DeterministicProtocol::alice_bit(d, vec![true, false, true, false]).unwrap();
            for _ in 1..c {
                p = p.product(&DeterministicProtocol::bob_bit(d, vec![true, true, false, false]).unwrap()).unwrap();
            }
            single(p)
        };
        assert_eq!(RandomizedPPProtocol::deterministic(cost(4)).bppp_cost(), 4);
        let two = RandomizedPPProtocol::new(vec![(cost(2), r(1, 2)), (cost(5), r(1, 2))]).unwrap();
        assert_eq!(two.bppp_cost(), 5);
        let zero = RandomizedPPProtocol::new(vec![(cost(2), r(1, 1)), (cost(60), r(0, 1))]).unwrap();
        assert_eq!(zero.bppp_cost(), 2);
    }

    #[test]
    fn chernoff_examples() {
        assert_eq!(chernoff_bound(&r(1, 2), 5).unwrap(), 1.0);
        let b = chernoff_bound(&r(1, 6), 3).unwrap();
        let direct = 1.0 - 0.5 * (8.0f64 / 9.0).powf(1.5);
        assert!((b - direct).abs() < 1e-11);
        assert!((b - 0.5810).abs() < 1e-4);
        let exact = majority_success(&r(2, 3), 3);
        assert_eq!(exact, r(20, 27));
        assert!(rational_to_f64(&exact) >= b);
        assert!(chernoff_bound(&r(0, 1), 3).is_err());
        assert!(chernoff_bound(&r(1, 6), 4).is_err());
        assert!(within_chernoff_tail(&r(7, 27), &r(1, 6), 3).unwrap());
        assert!(!within_chernoff_tail(&r(43, 100), &r(1, 6), 3).unwrap());
    }

    #[test]
    fn amplify_one_keeps_error() {
        let f = diag4();
        let rp = error_third(&f);
        let a = amplify(&rp, 1).unwrap();
        assert_eq!(a.protocol.support().len(), 3);
        assert_eq!(a.protocol.error(&f).unwrap(), r(1, 3));
        for ((g, p), (h, q)) in a.protocol.support().iter().zip(rp.support()) {
            assert_eq!(p, q);
            assert_eq!(g.accepted(), h.accepted());
        }
    }

    #[test]
    fn amplify_three_meets_chernoff() {
        let f = diag4();
        let rp = error_third(&f);
        let a = amplify(&rp, 3).unwrap();
        assert_eq!(a.protocol.support().len(), 27);
        let err = a.protocol.error(&f).unwrap();
        // each input is wrong in exactly one member, so the majority of three
        // independent draws errs with probability 3 (1/3)^2 (2/3) + (1/3)^3
        assert_eq!(err, r(7, 27));
        assert!(within_chernoff_tail(&err, &r(1, 6), 3).unwrap());
        assert!(rational_to_f64(&err) <= 1.0 - chernoff_bound(&r(1, 6), 3).unwrap());
        for (g, _) in a.protocol.support() {
            assert!(a.bound.holds(g));
        }
    }

    #[test]
    fn amplify_fixed_points() {
        let f = diag4();
        let zero = RandomizedPPProtocol::deterministic(exact(&f));
        assert_eq!(amplify(&zero, 3).unwrap().protocol.error(&f).unwrap(), r(0, 1));
        let wrong = exact(&flip_cells(&f, &(0..4).flat_map(|i| (0..4).map(move |j| (i, j))).collect::<Vec<_>>()));
        let half = RandomizedPPProtocol::uniform(vec![exact(&f), wrong]).unwrap();
        assert_eq!(amplify(&half, 3).unwrap().protocol.error(&f).unwrap(), r(1, 2));
        assert!(amplify(&half, 2).is_err());
    }

    #[test]
    fn newman_examples() {
        let f = diag4();
        let rp = error_third(&f);
        let rep = newman_sparsify(&rp, &f, &r(1, 12), 64, 7, DEFAULT_NEWMAN_RETRIES).unwrap();
        assert_eq!(rep.protocol.support().len(), 64);
        assert!(rep.protocol.support().iter().all(|(_, p)| p == &r(1, 64)));
        assert!(rep.protocol.error(&f).unwrap() <= r(5, 12));
        let again = newman_sparsify(&rp, &f, &r(1, 12), 64, 7, DEFAULT_NEWMAN_RETRIES).unwrap();
        assert_eq!(rep.measured, again.measured);

        let small = newman_sparsify(&rp, &f, &r(1, 1000), 3, 0, 200).unwrap();
        assert_eq!(small.protocol.error(&f).unwrap(), r(1, 3));

        // two draws always leave some cell with error at least 1/2
        let e = newman_sparsify(&rp, &f, &r(0, 1), 2, 1, 4);
        assert!(matches!(e, Err(Error::NotConverged(_))), "{e:?}");
    }

    #[test]
    fn yao_examples() {
        let f = BooleanMatrix::from_rows(&[&[1, 0], &[0, 1]]);
        let d = Domain::new(2, 2);
        let family = vec![exact(&f), GuessProtocol::constants(d, &[true]).unwrap()];
        let rep = yao_minimax_check(&f, &family, None).unwrap();
        assert_eq!(rep.primal_value, r(0, 1));
        assert_eq!(rep.dual_value, r(0, 1));

        let family = vec![
            GuessProtocol::constants(d, &[true]).unwrap(),
            GuessProtocol::constants(d, &[false]).unwrap(),
        ];
        let rep = yao_minimax_check(&f, &family, Some(&r(1, 3))).unwrap();
        assert_eq!(rep.primal_value, r(1, 2));
        assert_eq!(rep.dual_value, r(1, 2));
        assert_eq!(rep.within_eps, Some(false));

        let family: Vec<GuessProtocol> = enumerate_protocols(d, 1).unwrap().map(single).collect();
        let rep = yao_minimax_check(&f, &family, None).unwrap();
        assert!(rep.agree);
        assert_eq!(rep.primal_value, rep.dual_value);
        assert_eq!(rep.family_size, 34);
    }
}
