//! Discrepancy: the largest `mu`-weighted rectangle sum, and its minimum
//! over distributions solved as a linear program with rectangle generation.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lp::{LinearProgram, Relation, Sense};
use crate::matrix::{BooleanMatrix, InputDistribution, Rectangle, SignMatrix, MAX_SIDE};
use crate::util::ser_display;

/// Largest side for the discrepancy linear program.
pub const MAX_DISC_LP_SIDE: usize = 8;

const MAX_GENERATION_ROUNDS: usize = 10_000;

/// A rectangle together with its signed `mu`-weighted sum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RectangleSum {
    pub rectangle: Rectangle,
    #[serde(serialize_with = "ser_display")]
    pub sum: BigRational,
}

fn check_side(rows: usize, cols: usize, limit: usize) -> Result<()> {
    if rows > limit || cols > limit {
        return Err(Error::Guard(format!("{rows}x{cols} exceeds {limit} per side")));
    }
    Ok(())
}

/// The rectangle maximizing `|sum_{(i,j) in R} w_ij|` for integer weights.
///
/// Rows are visited in Gray-code order; for a fixed row set the best
/// column set takes every column of one sign.
fn max_rectangle(rows: usize, cols: usize, w: &[BigInt]) -> (Rectangle, BigInt) {
    let mut sums = vec![BigInt::zero(); cols];
    let mut best = (Rectangle { row_mask: 0, col_mask: 0 }, BigInt::zero());
    let mut mask = 0u64;
    for step in 1u64..(1u64 << rows) {
        let bit = step.trailing_zeros() as usize;
        mask ^= 1 << bit;
        let adding = (mask >> bit) & 1 == 1;
        for (j, s) in sums.iter_mut().enumerate() {
            if adding {
                *s += &w[bit * cols + j];
            } else {
                *s -= &w[bit * cols + j];
            }
        }
        let (mut pos, mut neg) = (BigInt::zero(), BigInt::zero());
        let (mut pos_mask, mut neg_mask) = (0u64, 0u64);
        for (j, s) in sums.iter().enumerate() {
            if s.is_positive() {
                pos += s;
                pos_mask |= 1 << j;
            } else if s.is_negative() {
                neg -= s;
                neg_mask |= 1 << j;
            }
        }
        for (value, col_mask, sign) in [(pos, pos_mask, 1), (neg, neg_mask, -1)] {
            if value > best.1.abs() {
                best = (Rectangle { row_mask: mask, col_mask }, value * sign);
            }
        }
    }
    best
}

fn scaled_weights(a: &SignMatrix, mu: &[BigRational]) -> (Vec<BigInt>, BigInt) {
    let den = mu.iter().fold(BigInt::one(), |acc, w| acc.lcm(w.denom()));
    let w = mu
        .iter()
        .zip(a.entries())
        .map(|(m, &s)| m.numer() * (&den / m.denom()) * BigInt::from(s))
        .collect();
    (w, den)
}

fn check_mu(a: &SignMatrix, mu: &InputDistribution) -> Result<()> {
    if a.shape() != mu.shape() {
        return Err(Error::DomainMismatch(format!(
            "matrix is {}x{} but distribution is {}x{}",
            a.rows(),
            a.cols(),
            mu.rows(),
            mu.cols()
        )));
    }
    check_side(a.rows(), a.cols(), MAX_SIDE)
}

/// `disc_mu(A)` with a maximizing rectangle.
pub fn disc_mu_witness(a: &SignMatrix, mu: &InputDistribution) -> Result<RectangleSum> {
    check_mu(a, mu)?;
    let (w, den) = scaled_weights(a, mu.weights());
    let (rectangle, sum) = max_rectangle(a.rows(), a.cols(), &w);
    Ok(RectangleSum {
        rectangle,
        sum: BigRational::new(sum, den),
    })
}

pub fn disc_mu(a: &SignMatrix, mu: &InputDistribution) -> Result<BigRational> {
    Ok(disc_mu_witness(a, mu)?.sum.abs())
}

/// Signed sum of `mu . A` over a rectangle.
pub fn rectangle_sum(a: &SignMatrix, mu: &[BigRational], r: &Rectangle) -> BigRational {
    let mut total = BigRational::zero();
    for i in r.row_set() {
        for j in r.col_set() {
            if i < a.rows() && j < a.cols() {
                total += &mu[i * a.cols() + j] * BigRational::from_integer(BigInt::from(a.get(i, j)));
            }
        }
    }
    total
}

#[derive(Clone, Debug, Serialize)]
pub struct Discrepancy {
    #[serde(serialize_with = "ser_display")]
    pub value: BigRational,
    /// A minimizing distribution.
    pub mu: InputDistribution,
    /// Rectangles whose constraints were generated, in order.
    pub rectangles: Vec<Rectangle>,
}

/// Largest `|sum_{(i,j) in R} w_ij|` in floating point, one rectangle per sign.
fn max_rectangles_f64(rows: usize, cols: usize, w: &[f64]) -> [(Rectangle, f64); 2] {
    let mut sums = vec![0.0f64; cols];
    let empty = Rectangle { row_mask: 0, col_mask: 0 };
    let mut best = [(empty, 0.0f64), (empty, 0.0f64)];
    let mut mask = 0u64;
    for step in 1u64..(1u64 << rows) {
        let bit = step.trailing_zeros() as usize;
        mask ^= 1 << bit;
        let sign = if (mask >> bit) & 1 == 1 { 1.0 } else { -1.0 };
        for (j, s) in sums.iter_mut().enumerate() {
            *s += sign * w[bit * cols + j];
        }
        let (mut pos, mut neg) = (0.0, 0.0);
        let (mut pos_mask, mut neg_mask) = (0u64, 0u64);
        for (j, &s) in sums.iter().enumerate() {
            if s > 0.0 {
                pos += s;
                pos_mask |= 1 << j;
            } else if s < 0.0 {
                neg -= s;
                neg_mask |= 1 << j;
            }
        }
        if pos > best[0].1 {
            best[0] = (Rectangle { row_mask: mask, col_mask: pos_mask }, pos);
        }
        if neg > best[1].1 {
            best[1] = (Rectangle { row_mask: mask, col_mask: neg_mask }, neg);
        }
    }
    best
}

fn float_sum(a: &SignMatrix, mu: &[f64], r: &Rectangle) -> f64 {
    let mut total = 0.0;
    for i in r.row_set().into_iter().filter(|&i| i < a.rows()) {
        for j in r.col_set().into_iter().filter(|&j| j < a.cols()) {
            total += mu[i * a.cols() + j] * f64::from(a.get(i, j));
        }
    }
    total
}

const FLOAT_TOLERANCE: f64 = 1e-9;
const TIGHT_TOLERANCE: f64 = 1e-7;

/// Approximate optimum of `min t` s.t. `|sum_R mu A| <= t`, with rectangles
/// generated by the floating point oracle. Returns the distribution and every
/// generated signed rectangle.
type SignedRect = (Rectangle, i8);

fn float_guide(a: &SignMatrix, seed: &[SignedRect]) -> Option<(Vec<f64>, Vec<SignedRect>)> {
    use microlp::{ComparisonOp, OptimizationDirection, Problem};
    let (rows, cols) = a.shape();
    let n = rows * cols;
    let mut problem = Problem::new(OptimizationDirection::Minimize);
    let mu: Vec<_> = (0..n).map(|_| problem.add_var(0.0, (0.0, 1.0))).collect();
    let t = problem.add_var(1.0, (0.0, f64::INFINITY));
    problem.add_constraint(mu.iter().map(|&v| (v, 1.0)).collect::<Vec<_>>(), ComparisonOp::Eq, 1.0);
    let row = |r: &Rectangle, sign: i8| {
        let mut expr: Vec<_> = (0..n)
            .filter(|&k| r.contains(k / cols, k % cols))
            .map(|k| (mu[k], f64::from(sign * a.get(k / cols, k % cols))))
            .collect();
        expr.push((t, -1.0));
        expr
    };
    for (r, sign) in seed {
        problem.add_constraint(row(r, *sign), ComparisonOp::Le, 0.0);
    }
    let mut generated = seed.to_vec();
    let mut solution = problem.solve().ok()?.into_solution().ok()?;
    for _ in 0..MAX_GENERATION_ROUNDS {
        let weights: Vec<f64> = mu.iter().map(|&v| solution.var_value(v)).collect();
        let w: Vec<f64> = weights.iter().zip(a.entries()).map(|(m, &s)| m * f64::from(s)).collect();
        let value = solution.var_value(t);
        let mut added = false;
        for ((r, v), sign) in max_rectangles_f64(rows, cols, &w).into_iter().zip([1i8, -1]) {
            if v > value + FLOAT_TOLERANCE && !generated.contains(&(r, sign)) {
                solution = solution.add_constraint(row(&r, sign), ComparisonOp::Le, 0.0).ok()?.into_solution().ok()?;
                generated.push((r, sign));
                added = true;
            }
        }
        if !added {
            return Some((weights, generated));
        }
    }
    None
}

fn exact_packing(a: &SignMatrix, constraints: &[(Rectangle, i8)]) -> Result<(BigRational, InputDistribution)> {
    let (rows, cols) = a.shape();
    let n = rows * cols;
    let two = BigRational::from_integer(BigInt::from(2));
    let mut lp = LinearProgram::new(Sense::Maximize, vec![BigRational::one(); n]);
    for (r, sign) in constraints {
        let coeffs = (0..n)
            .map(|k| {
                let (i, j) = (k / cols, k % cols);
                if !r.contains(i, j) {
                    BigRational::one()
                } else if a.get(i, j) == *sign {
                    two.clone()
                } else {
                    BigRational::zero()
                }
            })
            .collect();
        lp.add(coeffs, Relation::Le, BigRational::one());
    }
    let sol = lp.solve()?;
    let shifted = sol.value.recip();
    let value = &shifted - BigRational::one();
    let mu = InputDistribution::new(rows, cols, sol.x.iter().map(|u| u * &shifted).collect())?;
    Ok((value, mu))
}

/// `min_mu disc_mu(A)` as a zero-sum game between a distribution on the
/// entries and a signed rectangle.
///
/// With payoffs shifted by one to `s [cell in R] A + 1 > 0`, the game value
/// `v + 1` is the reciprocal of `max sum u` subject to `sum_cell u P' <= 1`
/// per signed rectangle, and `mu = u (v + 1)`. A floating point solve picks
/// the rectangles that are tight at the optimum; the exact program over those
/// is then checked against every rectangle and extended until none exceeds
/// the value.
pub fn disc(a: &SignMatrix) -> Result<Discrepancy> {
    check_side(a.rows(), a.cols(), MAX_DISC_LP_SIDE)?;
    let (rows, cols) = a.shape();
    let full = Rectangle {
        row_mask: (1 << rows) - 1,
        col_mask: (1 << cols) - 1,
    };
    let mut seed = vec![(full, 1i8), (full, -1)];
    for i in 0..rows {
        seed.push((Rectangle { row_mask: 1 << i, col_mask: full.col_mask }, 1));
        seed.push((Rectangle { row_mask: 1 << i, col_mask: full.col_mask }, -1));
    }
    for j in 0..cols {
        seed.push((Rectangle { row_mask: full.row_mask, col_mask: 1 << j }, 1));
        seed.push((Rectangle { row_mask: full.row_mask, col_mask: 1 << j }, -1));
    }
    let mut constraints = match float_guide(a, &seed) {
        Some((mu, generated)) => {
            let value = generated
                .iter()
                .map(|(r, s)| f64::from(*s) * float_sum(a, &mu, r))
                .fold(0.0, f64::max);
            let mut tight = vec![(full, 1i8), (full, -1)];
            tight.extend(generated.into_iter().filter(|(r, s)| {
                *r != full && f64::from(*s) * float_sum(a, &mu, r) >= value - TIGHT_TOLERANCE
            }));
            tight
        }
        None => seed,
    };
    for _ in 0..MAX_GENERATION_ROUNDS {
        let (value, mu) = exact_packing(a, &constraints)?;
        let worst = disc_mu_witness(a, &mu)?;
        if worst.sum.abs() <= value {
            let mut rectangles: Vec<Rectangle> = Vec::new();
            for (r, _) in constraints {
                if !rectangles.contains(&r) {
                    rectangles.push(r);
                }
            }
            return Ok(Discrepancy { value, mu, rectangles });
        }
        let sign = if worst.sum.is_positive() { 1 } else { -1 };
        constraints.push((worst.rectangle, sign));
    }
    Err(Error::NotConverged(format!(
        "rectangle generation did not close after {MAX_GENERATION_ROUNDS} rounds"
    )))
}

/// `disc'(B) = disc(J - 2B)`.
pub fn disc_prime(b: &BooleanMatrix) -> Result<Discrepancy> {
    disc(&b.to_sign())
}
