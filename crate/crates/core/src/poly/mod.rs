//! Exact integer polynomials, rational functions, the `P`/`S`/`T` families
//! and the compilers from polynomials to guess protocols.

pub mod compile;
pub mod degm;
pub mod families;
pub mod parse;
pub mod polynomial;
pub mod rational;

pub use compile::{
    lemma1_bound, lemma1_compile, lemma2_bound, lemma2_compile, majority_bound, majority_compile, CostBound,
    MajorityCompiler,
};
pub use degm::{check_degm_bounds, DegmReport};
pub use families::{build_p, build_s, build_t, h};
pub use parse::{parse_polynomial, parse_rational_function};
pub use polynomial::IntPolynomial;
pub use rational::RationalFunction;
