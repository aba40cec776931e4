//! The BP operator `(BP_eps . L)(f) = max_mu min { L(g) : mu(f != g) <= eps }`
//! by exhaustive enumeration of the perturbed matrices `g`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::disc::disc_prime;
use super::margin::mc_prime;
use crate::error::{Error, Result};
use crate::lp::{LinearProgram, Relation, Sense};
use crate::matrix::{BooleanMatrix, InputDistribution};
use crate::protocols::GuessProtocol;

/// Largest number of entries `bp_measure` enumerates perturbations of.
pub const MAX_BP_CELLS: usize = 16;

const MAX_GENERATION_ROUNDS: usize = 100_000;

type Apply = dyn Fn(&BooleanMatrix) -> Result<f64> + Send + Sync;

/// A named map from Boolean matrices to the extended reals; `+inf` marks
/// matrices the measure does not cover.
#[derive(Clone)]
pub struct MeasureFn {
    name: String,
    apply: Arc<Apply>,
}

impl fmt::Debug for MeasureFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MeasureFn({})", self.name)
    }
}

impl MeasureFn {
    pub fn new(name: impl Into<String>, apply: impl Fn(&BooleanMatrix) -> Result<f64> + Send + Sync + 'static) -> Self {
        MeasureFn {
            name: name.into(),
            apply: Arc::new(apply),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn apply(&self, m: &BooleanMatrix) -> Result<f64> {
        (self.apply)(m)
    }
}

/// Number of 1-entries.
pub fn entry_count() -> MeasureFn {
    MeasureFn::new("entries", |m| Ok(m.count_ones() as f64))
}

/// `log2(1 / disc'(B))`.
pub fn log_inv_disc_prime() -> MeasureFn {
    MeasureFn::new("log-disc-prime", |m| {
        let d = disc_prime(m)?.value;
        Ok(-super::log2_rational(&d))
    })
}

/// `mc'(B)`, the optimizer's certified upper bound.
pub fn mc_prime_measure() -> MeasureFn {
    MeasureFn::new("mc-prime", |m| Ok(mc_prime(m)?.value))
}

/// The least PP cost among family members whose PP acceptance set is the
/// matrix, or `+inf`.
pub fn best_pp_cost(family: &[GuessProtocol]) -> MeasureFn {
    let mut best: HashMap<BooleanMatrix, u64> = HashMap::new();
    for g in family {
        let cost = g.pp_cost();
        best.entry(g.accepted()).and_modify(|c| *c = (*c).min(cost)).or_insert(cost);
    }
    MeasureFn::new("pp-cost", move |m| Ok(best.get(m).map_or(f64::INFINITY, |&c| c as f64)))
}

/// Looks a library measure up by name; `pp-cost` needs a family.
pub fn measure_by_name(name: &str, family: Option<&[GuessProtocol]>) -> Result<MeasureFn> {
    match name {
        "entries" => Ok(entry_count()),
        "log-disc-prime" => Ok(log_inv_disc_prime()),
        "mc-prime" => Ok(mc_prime_measure()),
        "pp-cost" => family
            .map(best_pp_cost)
            .ok_or_else(|| Error::InvalidArgument("the pp-cost measure needs a protocol family".into())),
        other => Err(Error::InvalidArgument(format!(
            "unknown measure {other:?}; expected entries, log-disc-prime, mc-prime or pp-cost"
        ))),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BpMeasure {
    pub measure: String,
    /// `+inf` when some distribution keeps every covered matrix farther than eps.
    pub value: f64,
    pub mu: InputDistribution,
    /// The lexicographically least matrix attaining the value under `mu`.
    pub f_tilde: Option<BooleanMatrix>,
    pub candidates: usize,
    pub levels: usize,
    pub lp_solves: usize,
}

struct Candidates {
    f_code: u64,
    n: usize,
    /// Codes sorted by measure value, then row-major entries.
    codes: Vec<u64>,
    values: Vec<f64>,
    /// End index of each distinct value in `codes`.
    level_ends: Vec<usize>,
}

fn distance(weights: &[BigInt], diff: u64) -> BigInt {
    let mut d = BigInt::zero();
    let mut bits = diff;
    while bits != 0 {
        let k = bits.trailing_zeros() as usize;
        d += &weights[k];
        bits &= bits - 1;
    }
    d
}

const CONSTRAINTS_PER_ROUND: usize = 16;

/// `max_mu min_{g in codes[..end]} mu(f != g)`, generating constraints for
/// the matrices nearest under the current optimum until none is nearer.
///
/// Solved in packing form, `max sum_g q_g` subject to `sum_g q_g [g_k != f_k] <= 1`
/// for every entry `k`: its optimum is the reciprocal of the game value and
/// its duals, normalized, are an optimal `mu`.
fn prefix_value(c: &Candidates, end: usize, solves: &mut usize) -> Result<(BigRational, Vec<BigRational>)> {
    let n = c.n;
    let prefix = &c.codes[..end];
    if prefix.contains(&c.f_code) {
        return Ok((BigRational::zero(), vec![BigRational::new(BigInt::one(), BigInt::from(n)); n]));
    }
    let mut active: Vec<u64> = vec![prefix[0]];
    for _ in 0..MAX_GENERATION_ROUNDS {
        let mut lp = LinearProgram::new(Sense::Maximize, vec![BigRational::one(); active.len()]);
        for k in 0..n {
            let coeffs = active
                .iter()
                .map(|&g| if ((g ^ c.f_code) >> k) & 1 == 1 { BigRational::one() } else { BigRational::zero() })
                .collect();
            lp.add(coeffs, Relation::Le, BigRational::one());
        }
        let sol = lp.solve()?;
        *solves += 1;
        let value = sol.value.recip();
        let mu: Vec<BigRational> = sol.duals.iter().map(|y| y * &value).collect();
        let den = mu.iter().fold(BigInt::one(), |acc, w| acc.lcm(w.denom()));
        let weights: Vec<BigInt> = mu.iter().map(|w| w.numer() * (&den / w.denom())).collect();
        let bound = value.numer() * (&den / value.denom());
        let mut violated: Vec<(BigInt, u64)> = prefix
            .iter()
            .map(|&g| (distance(&weights, g ^ c.f_code), g))
            .filter(|(d, _)| d < &bound)
            .collect();
        if violated.is_empty() {
            return Ok((value, mu));
        }
        violated.sort();
        active.extend(violated.into_iter().take(CONSTRAINTS_PER_ROUND).map(|(_, g)| g));
    }
    Err(Error::NotConverged("BP linear program did not close".into()))
}

/// Whether the prefix value is at most eps, without a linear program when
/// the prefix contains `f` (value 0) or the uniform distribution already
/// keeps every prefix matrix farther than eps.
fn prefix_within(c: &Candidates, end: usize, eps: &BigRational, solves: &mut usize) -> Result<bool> {
    let nearest = c.codes[..end].iter().map(|&g| (g ^ c.f_code).count_ones()).min().expect("nonempty");
    if nearest == 0 {
        return Ok(true);
    }
    if BigRational::new(BigInt::from(nearest), BigInt::from(c.n)) > *eps {
        return Ok(false);
    }
    Ok(&prefix_value(c, end, solves)?.0 <= eps)
}

pub fn bp_measure(lambda: &MeasureFn, f: &BooleanMatrix, eps: &BigRational) -> Result<BpMeasure> {
    let (rows, cols) = f.shape();
    let n = rows * cols;
    if n > MAX_BP_CELLS {
        return Err(Error::Guard(format!(
            "bp_measure enumerates 2^(rows*cols) matrices; {rows}x{cols} exceeds {MAX_BP_CELLS} entries"
        )));
    }
    if eps.is_negative() {
        return Err(Error::InvalidArgument(format!("eps must be nonnegative, got {eps}")));
    }
    let mut scored = Vec::new();
    for code in 0..(1u64 << n) {
        let m = BooleanMatrix::from_code(rows, cols, code)?;
        let v = lambda.apply(&m)?;
        if v.is_nan() {
            return Err(Error::InvalidArgument(format!("measure {} returned NaN", lambda.name())));
        }
        if v.is_finite() {
            scored.push((v, m, code));
        }
    }
    let uniform = InputDistribution::uniform(rows, cols)?;
    if scored.is_empty() {
        return Ok(BpMeasure {
            measure: lambda.name().to_string(),
            value: f64::INFINITY,
            mu: uniform,
            f_tilde: None,
            candidates: 0,
            levels: 0,
            lp_solves: 0,
        });
    }
    scored.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
    let mut level_ends = Vec::new();
    for k in 1..=scored.len() {
        if k == scored.len() || scored[k].0 != scored[k - 1].0 {
            level_ends.push(k);
        }
    }
    let c = Candidates {
        f_code: f.code(),
        n,
        codes: scored.iter().map(|s| s.2).collect(),
        values: scored.iter().map(|s| s.0).collect(),
        level_ends,
    };
    let mut solves = 0;
    // least level whose prefix value is at most eps; the value is
    // non-increasing in the level
    let levels = c.level_ends.len();
    let (mut lo, mut hi) = (0usize, levels);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if prefix_within(&c, c.level_ends[mid], eps, &mut solves)? {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let critical = lo;
    let witness_level = if critical == 0 { 0 } else { critical - 1 };
    let weights = prefix_value(&c, c.level_ends[witness_level.min(levels - 1)], &mut solves)?.1;
    let mu = InputDistribution::new(rows, cols, weights)?;
    if critical == levels {
        return Ok(BpMeasure {
            measure: lambda.name().to_string(),
            value: f64::INFINITY,
            mu,
            f_tilde: None,
            candidates: c.codes.len(),
            levels,
            lp_solves: solves,
        });
    }
    let start = if critical == 0 { 0 } else { c.level_ends[critical - 1] };
    let f_tilde = (start..c.level_ends[critical])
        .map(|k| BooleanMatrix::from_code(rows, cols, c.codes[k]).expect("valid code"))
        .find(|g| &mu.disagreement(f, g) <= eps);
    Ok(BpMeasure {
        measure: lambda.name().to_string(),
        value: c.values[start],
        mu,
        f_tilde,
        candidates: c.codes.len(),
        levels,
        lp_solves: solves,
    })
}
