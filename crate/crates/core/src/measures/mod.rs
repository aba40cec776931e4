//! Matrix measures: discrepancy, margin complexity, the BP operator and
//! the consistency checks relating them to protocol costs.

pub mod bp;
pub mod checks;
pub mod disc;
pub mod margin;

pub use disc::{disc, disc_mu, disc_mu_witness, disc_prime, Discrepancy, RectangleSum};
pub use margin::{mc, mc_prime, mc_with, MarginComplexity, MarginRealization};
pub use bp::{best_pp_cost, bp_measure, entry_count, log_inv_disc_prime, mc_prime_measure, measure_by_name, BpMeasure, MeasureFn};
pub use checks::{klauck_consistency, ls_sandwich_check, ls_sandwich_check_with, mcc_chain, KlauckCheck, LsSandwich, MccChain};

use num_rational::BigRational;

/// `log2` of a positive rational.
pub fn log2_rational(r: &BigRational) -> f64 {
    let n = r.numer().magnitude();
    let d = r.denom().magnitude();
    crate::poly::compile::log2_big(n) - crate::poly::compile::log2_big(d)
}
