//! Seeded generators for the verification suites. Case `i` of a suite
//! draws from stream `i` of a ChaCha generator keyed by the seed, so a case
//! is reproducible on its own.

use std::sync::Arc;

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::matrix::{BooleanMatrix, SignMatrix};
use crate::poly::IntPolynomial;
use crate::protocols::{DeterministicProtocol, Domain, GuessProtocol, ProtocolNode, Speaker};

pub fn case_rng(seed: u64, case: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(case);
    rng
}

fn random_table(rng: &mut ChaCha8Rng, n: usize) -> Vec<bool> {
    (0..n).map(|_| rng.gen_bool(0.5)).collect()
}

fn random_node(rng: &mut ChaCha8Rng, domain: Domain, depth: usize) -> Arc<ProtocolNode> {
    if depth == 0 || rng.gen_ratio(1, 4) {
        return ProtocolNode::leaf(rng.gen_bool(0.5));
    }
    let speaker = if rng.gen_bool(0.5) { Speaker::Alice } else { Speaker::Bob };
    let table = random_table(rng, domain.side(speaker));
    let zero = random_node(rng, domain, depth - 1);
    let one = random_node(rng, domain, depth - 1);
    ProtocolNode::send(speaker, table, zero, one)
}

/// A random protocol tree of depth at most `depth`.
pub fn random_protocol(rng: &mut ChaCha8Rng, domain: Domain, depth: usize) -> DeterministicProtocol {
    DeterministicProtocol::new(domain, random_node(rng, domain, depth)).expect("tables sized to the domain")
}

/// Between 1 and `max_guesses` random members.
pub fn random_guess(rng: &mut ChaCha8Rng, domain: Domain, max_guesses: usize, depth: usize) -> GuessProtocol {
    let l = rng.gen_range(1..=max_guesses);
    GuessProtocol::new((0..l).map(|_| random_protocol(rng, domain, depth)).collect()).expect("shared domain")
}

pub fn random_boolean(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> BooleanMatrix {
    BooleanMatrix::from_fn(rows, cols, |_, _| rng.gen_bool(0.5)).expect("nonempty")
}

pub fn random_sign(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> SignMatrix {
    SignMatrix::from_fn(rows, cols, |_, _| if rng.gen_bool(0.5) { 1 } else { -1 }).expect("nonempty")
}

/// Up to four monomials in `k` variables of total degree at most `d` with
/// nonzero coefficients in `[-max_coeff, max_coeff]`.
pub fn random_polynomial(rng: &mut ChaCha8Rng, k: usize, d: u32, max_coeff: i64) -> IntPolynomial {
    let count = rng.gen_range(1..=4);
    let mut p = IntPolynomial::zero(k);
    for _ in 0..count {
        let total = rng.gen_range(0..=d);
        let mut exps = vec![0u32; k];
        for _ in 0..total {
            exps[rng.gen_range(0..k)] += 1;
        }
        let mut c = rng.gen_range(1..=max_coeff);
        if rng.gen_bool(0.5) {
            c = -c;
        }
        let term = IntPolynomial::monomial(k, exps, BigInt::from(c));
        p = p.add(&term).expect("same variables");
    }
    p
}

/// Each cell of `f` is assigned to one of three members, which errs there;
/// the uniform mixture has error exactly 1/3 when every member errs somewhere.
pub fn error_third_members(rng: &mut ChaCha8Rng, f: &BooleanMatrix) -> Vec<BooleanMatrix> {
    let n = f.rows() * f.cols();
    let mut owner: Vec<usize> = (0..n).map(|k| k % 3).collect();
    owner.shuffle(rng);
    (0..3)
        .map(|a| BooleanMatrix::from_fn(f.rows(), f.cols(), |i, j| f.get(i, j) ^ (owner[i * f.cols() + j] == a)).expect("nonempty"))
        .collect()
}
