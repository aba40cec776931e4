//! Deterministic protocols, guess protocols and their gap algebra.

pub mod deterministic;
pub mod enumerate;
pub mod guess;
pub mod serialize;

pub use deterministic::{DeterministicProtocol, Domain, ProtocolNode, Speaker};
pub use enumerate::{count_protocols, enumerate_protocols, ProtocolEnumerator};
pub use guess::{ceil_log2, pp_to_threshold, threshold_to_pp, GapProfile, GuessProtocol};
