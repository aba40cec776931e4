//! Exact inclusion-exclusion polynomials for small rectangle circuits.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::pipeline::RandomizedRectanglePolynomial;
use super::polynomial::{RectangleTerm, RectangleTermPolynomial};
use crate::matrix::BooleanMatrix;
use crate::protocols::Domain;

fn indicator(n: usize, set: &[usize]) -> Vec<bool> {
    (0..n).map(|i| set.contains(&i)).collect()
}

fn d44() -> Domain {
    Domain::new(4, 4)
}

/// `L = {(3, 3)}` on 4x4 and the single-term polynomial for it.
pub fn and_fixture() -> (RandomizedRectanglePolynomial, BooleanMatrix) {
    let phi = RectangleTermPolynomial::new(d44(), vec![RectangleTerm::new(1, indicator(4, &[3]), indicator(4, &[3]))])
        .expect("valid terms");
    let l = BooleanMatrix::from_fn(4, 4, |x, y| x == 3 && y == 3).expect("4x4");
    (RandomizedRectanglePolynomial::deterministic(phi), l)
}

/// `R1 = {0,1} x {0,1}`, `R2 = {1,2} x {1,2}`; `[R1 or R2] = R1 + R2 - R1 R2`.
fn or2_polynomial() -> RectangleTermPolynomial {
    RectangleTermPolynomial::new(
        d44(),
        vec![
            RectangleTerm::new(1, indicator(4, &[0, 1]), indicator(4, &[0, 1])),
            RectangleTerm::new(1, indicator(4, &[1, 2]), indicator(4, &[1, 2])),
            RectangleTerm::new(-1, indicator(4, &[1]), indicator(4, &[1])),
        ],
    )
    .expect("valid terms")
}

fn or2_language() -> BooleanMatrix {
    BooleanMatrix::from_fn(4, 4, |x, y| (x < 2 && y < 2) || ((1..3).contains(&x) && (1..3).contains(&y))).expect("4x4")
}

pub fn or2_fixture() -> (RandomizedRectanglePolynomial, BooleanMatrix) {
    (RandomizedRectanglePolynomial::deterministic(or2_polynomial()), or2_language())
}

/// Three equally likely members; member `a` is the OR polynomial with row
/// `a` decided wrongly, so each input of rows 0..3 errs with probability
/// exactly 1/3 and row 3 never errs.
pub fn boundary_fixture() -> (RandomizedRectanglePolynomial, BooleanMatrix) {
    let phi = or2_polynomial();
    let third = BigRational::new(BigInt::from(1), BigInt::from(3));
    let support = (0..3)
        .map(|a| {
            let keep: Vec<bool> = (0..4).map(|x| x != a).collect();
            let row: Vec<bool> = (0..4).map(|x| x == a).collect();
            // on row a: 1 - Phi
            let flipped = RectangleTermPolynomial::new(d44(), vec![RectangleTerm::new(1, row.clone(), vec![true; 4])])
                .and_then(|one| one.concat(&phi.restrict_rows(&row)?.neg()))
                .expect("valid terms");
            let member = phi.restrict_rows(&keep).and_then(|p| p.concat(&flipped)).expect("valid terms");
            (member, third.clone())
        })
        .collect();
    (
        RandomizedRectanglePolynomial::new(d44(), support).expect("probabilities sum to 1"),
        or2_language(),
    )
}

/// Fixtures by name.
pub fn fixture(name: &str) -> Option<(RandomizedRectanglePolynomial, BooleanMatrix)> {
    match name {
        "and" => Some(and_fixture()),
        "or2" => Some(or2_fixture()),
        "boundary" => Some(boundary_fixture()),
        _ => None,
    }
}

pub const FIXTURE_NAMES: [&str; 3] = ["and", "or2", "boundary"];
