//! Consistency checks tying the measures to each other and to protocol costs.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use super::bp::{bp_measure, log_inv_disc_prime, mc_prime_measure, BpMeasure};
use super::disc::{disc, disc_prime};
use super::margin::{mc_with, DEFAULT_MC_SEED, DEFAULT_RESTARTS};
use super::log2_rational;
use crate::error::{Error, Result};
use crate::matrix::{BooleanMatrix, SignMatrix};
use crate::protocols::GuessProtocol;
use crate::randomized::RandomizedPPProtocol;
use crate::report::Check;
use crate::util::ser_display;

/// Allowed excess of the optimizer's value over `8 / disc` before flagging.
pub const LS_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Debug, Serialize)]
pub struct LsSandwich {
    #[serde(serialize_with = "ser_display")]
    pub disc: BigRational,
    pub mc: f64,
    pub product: f64,
    pub lower: f64,
    pub upper: f64,
    pub checks: Vec<Check>,
}

impl LsSandwich {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Checks `1/8 <= mc(A) disc(A) <= 8`.
pub fn ls_sandwich_check(a: &SignMatrix) -> Result<LsSandwich> {
    ls_sandwich_check_with(a, DEFAULT_RESTARTS, DEFAULT_MC_SEED)
}

pub fn ls_sandwich_check_with(a: &SignMatrix, restarts: usize, seed: u64) -> Result<LsSandwich> {
    let d = disc(a)?.value;
    let m = mc_with(a, restarts, seed)?;
    let df = crate::randomized::rational_to_f64(&d);
    let product = m.value * df;
    let feasible = m.realization.min_margin(a);
    let checks = vec![
        Check::new("ls.lower", product >= 0.125, format!("mc*disc = {} * {} = {product}", m.value, d)),
        Check::new(
            "ls.upper",
            m.value <= 8.0 / df + LS_TOLERANCE,
            format!("mc = {} vs 8/disc = {}", m.value, 8.0 / df),
        ),
        Check::new("mc.feasible", feasible >= 1.0 - 1e-9, format!("min margin {feasible}")),
    ];
    Ok(LsSandwich {
        disc: d,
        mc: m.value,
        product,
        lower: 1.0 / (8.0 * df),
        upper: 8.0 / df,
        checks,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct KlauckCheck {
    #[serde(serialize_with = "ser_display")]
    pub disc_prime: BigRational,
    pub log_inv_disc_prime: f64,
    pub pp_cost: u64,
    /// `log2(1/disc') <= pp_cost`, decided exactly.
    pub lower_bound_holds: bool,
    /// `pp_cost - log2(1/disc')`; the upper bound is not asserted.
    pub slack: f64,
}

/// The lower half of Klauck's bound for a protocol that computes `f`.
pub fn klauck_consistency(f: &BooleanMatrix, g: &GuessProtocol) -> Result<KlauckCheck> {
    let d = g.domain();
    if (d.rows, d.cols) != f.shape() {
        return Err(Error::DomainMismatch(format!("protocol over {d}, matrix {}x{}", f.rows(), f.cols())));
    }
    let accepted = g.accepted();
    if &accepted != f {
        let (i, j) = (0..f.rows())
            .flat_map(|i| (0..f.cols()).map(move |j| (i, j)))
            .find(|&(i, j)| accepted.get(i, j) != f.get(i, j))
            .expect("matrices differ");
        return Err(Error::Precondition(format!(
            "protocol does not compute the matrix: at ({i},{j}) it gives {} but f is {}",
            accepted.get(i, j) as u8,
            f.get(i, j) as u8
        )));
    }
    let dp = disc_prime(f)?.value;
    let cost = g.pp_cost();
    let cost_i = u32::try_from(cost).map_err(|_| Error::Guard("pp cost too large".into()))?;
    // 1/disc' <= 2^cost
    let holds = dp.clone() * BigRational::from_integer(BigInt::one() << cost_i) >= BigRational::one();
    let log = -log2_rational(&dp);
    Ok(KlauckCheck {
        disc_prime: dp,
        log_inv_disc_prime: log,
        pp_cost: cost,
        lower_bound_holds: holds,
        slack: cost as f64 - log,
    })
}

/// `bp_measure` of `log 1/disc'` and of `mc'` at the same matrix and eps,
/// next to the cost of a randomized protocol, if one is given.
#[derive(Clone, Debug, Serialize)]
pub struct MccChain {
    #[serde(serialize_with = "ser_display")]
    pub eps: BigRational,
    pub bp_log_disc_prime: BpMeasure,
    pub bp_mc_prime: BpMeasure,
    pub log_bp_mc_prime: f64,
    pub randomized_cost: Option<u64>,
    #[serde(serialize_with = "ser_opt_display")]
    pub randomized_error: Option<BigRational>,
}

fn ser_opt_display<S: serde::Serializer>(v: &Option<BigRational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(r) => s.collect_str(r),
        None => s.serialize_none(),
    }
}

pub fn mcc_chain(f: &BooleanMatrix, eps: &BigRational, rp: Option<&RandomizedPPProtocol>) -> Result<MccChain> {
    let a = bp_measure(&log_inv_disc_prime(), f, eps)?;
    let b = bp_measure(&mc_prime_measure(), f, eps)?;
    let (randomized_cost, randomized_error) = match rp {
        Some(rp) => (Some(rp.bppp_cost()), Some(rp.error(f)?)),
        None => (None, None),
    };
    Ok(MccChain {
        eps: eps.clone(),
        log_bp_mc_prime: b.value.log2(),
        bp_log_disc_prime: a,
        bp_mc_prime: b,
        randomized_cost,
        randomized_error,
    })
}
