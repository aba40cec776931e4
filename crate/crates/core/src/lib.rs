//! Guess (PP) protocols, polynomial compilers, randomized amplification and
//! matrix measures for small two-party communication problems.
//!
//! Every construction works over explicit finite domains and is checked by
//! exhaustive evaluation.

pub mod cli;
pub mod error;
pub mod lp;
pub mod measures;
pub mod matrix;
pub mod poly;
pub mod protocols;
pub mod randomized;
pub mod tarui;
pub mod report;
pub mod suites;
mod util;

pub use error::{Error, Result};
pub use matrix::{BooleanMatrix, InputDistribution, Matrix, Rectangle, SignMatrix};
