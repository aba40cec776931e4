//! Margin complexity by alternating max-margin steps.
//!
//! With the column vectors fixed, the best unit vector for a row is the
//! normalized minimum-norm point of the convex hull of `A_ij y_j`, and its
//! margin is that point's norm. Rows and columns are updated in turn, which
//! never lowers the overall margin, from an SVD start and seeded random
//! restarts. The result is always a feasible realization, so the value is a
//! certified upper bound.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{BooleanMatrix, SignMatrix};

pub const MAX_MC_SIDE: usize = 8;
pub const DEFAULT_RESTARTS: usize = 100;
pub const DEFAULT_MC_SEED: u64 = 0x6d63;

const MAX_SWEEPS: usize = 200;
const SWEEP_TOLERANCE: f64 = 1e-12;
const WOLFE_TOLERANCE: f64 = 1e-12;
const MAX_WOLFE_ITERATIONS: usize = 1000;

#[derive(Clone, Debug, Serialize)]
pub struct MarginRealization {
    pub row_vectors: Vec<Vec<f64>>,
    pub col_vectors: Vec<Vec<f64>>,
    pub certified_value: f64,
}

impl MarginRealization {
    /// `min_ij A_ij <x_i, y_j>`.
    pub fn min_margin(&self, a: &SignMatrix) -> f64 {
        let mut worst = f64::INFINITY;
        for (i, x) in self.row_vectors.iter().enumerate() {
            for (j, y) in self.col_vectors.iter().enumerate() {
                let dot: f64 = x.iter().zip(y).map(|(p, q)| p * q).sum();
                worst = worst.min(a.get(i, j) as f64 * dot);
            }
        }
        worst
    }

    /// `max_i |x_i| * max_j |y_j|`.
    pub fn norm_product(&self) -> f64 {
        let max_norm = |vs: &[Vec<f64>]| vs.iter().map(|v| v.iter().map(|t| t * t).sum::<f64>().sqrt()).fold(0.0, f64::max);
        max_norm(&self.row_vectors) * max_norm(&self.col_vectors)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MarginComplexity {
    pub value: f64,
    pub realization: MarginRealization,
    pub restarts: usize,
    pub seed: u64,
}

/// Minimum-norm point of the convex hull of the columns of `points`
/// (Wolfe's algorithm).
pub fn min_norm_point(points: &DMatrix<f64>) -> DVector<f64> {
    let n = points.ncols();
    let scale = points.column_iter().map(|c| c.norm_squared()).fold(0.0, f64::max).max(1e-300);
    let start = (0..n)
        .min_by(|&a, &b| points.column(a).norm_squared().total_cmp(&points.column(b).norm_squared()))
        .expect("at least one point");
    let mut set = vec![start];
    let mut lambda = vec![1.0];
    let mut x: DVector<f64> = points.column(start).into_owned();
    for _ in 0..MAX_WOLFE_ITERATIONS {
        let (j, dot) = (0..n)
            .map(|k| (k, x.dot(&points.column(k))))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("nonempty");
        if x.norm_squared() - dot <= WOLFE_TOLERANCE * scale || set.contains(&j) {
            break;
        }
        set.push(j);
        lambda.push(0.0);
        loop {
            let alpha = affine_minimizer(points, &set);
            if alpha.iter().all(|&a| a > WOLFE_TOLERANCE) {
                lambda = alpha;
                break;
            }
            let theta = lambda
                .iter()
                .zip(&alpha)
                .filter(|(_, a)| **a <= WOLFE_TOLERANCE)
                .map(|(l, a)| if l - a > 0.0 { l / (l - a) } else { 0.0 })
                .fold(1.0, f64::min);
            for (l, a) in lambda.iter_mut().zip(&alpha) {
                *l = theta * a + (1.0 - theta) * *l;
            }
            let mut k = 0;
            while k < set.len() {
                if lambda[k] <= WOLFE_TOLERANCE {
                    set.remove(k);
                    lambda.remove(k);
                } else {
                    k += 1;
                }
            }
            if set.len() == 1 {
                lambda = vec![1.0];
                break;
            }
        }
        let total: f64 = lambda.iter().sum();
        x = DVector::zeros(points.nrows());
        for (&k, l) in set.iter().zip(&lambda) {
            x += points.column(k) * (l / total);
        }
    }
    x
}

/// Weights summing to one that minimize the norm over the affine hull.
fn affine_minimizer(points: &DMatrix<f64>, set: &[usize]) -> Vec<f64> {
    let s = set.len();
    let mut kkt = DMatrix::<f64>::zeros(s + 1, s + 1);
    for (a, &p) in set.iter().enumerate() {
        for (b, &q) in set.iter().enumerate() {
            kkt[(a, b)] = points.column(p).dot(&points.column(q));
        }
        kkt[(a, s)] = 1.0;
        kkt[(s, a)] = 1.0;
    }
    let mut rhs = DVector::<f64>::zeros(s + 1);
    rhs[s] = 1.0;
    match kkt.clone().lu().solve(&rhs) {
        Some(sol) => sol.rows(0, s).iter().copied().collect(),
        None => {
            let pinv = kkt.pseudo_inverse(1e-12).expect("pseudo-inverse");
            (pinv * rhs).rows(0, s).iter().copied().collect()
        }
    }
}

/// Replaces each row of `update` by the max-margin unit vector against the
/// fixed rows of `fixed`, with `signs(i, j)` the sign pattern.
fn best_responses(fixed: &DMatrix<f64>, update: &mut DMatrix<f64>, signs: impl Fn(usize, usize) -> f64) {
    let dim = fixed.ncols();
    for i in 0..update.nrows() {
        let mut pts = DMatrix::<f64>::zeros(dim, fixed.nrows());
        for j in 0..fixed.nrows() {
            pts.set_column(j, &(fixed.row(j).transpose() * signs(i, j)));
        }
        let u = min_norm_point(&pts);
        let norm = u.norm();
        if norm > 1e-12 {
            update.set_row(i, &(u / norm).transpose());
        }
    }
}

fn normalize_rows(m: &mut DMatrix<f64>) {
    for mut row in m.row_iter_mut() {
        let n = row.norm();
        if n > 0.0 {
            row /= n;
        }
    }
}

fn margin_of(a: &SignMatrix, x: &DMatrix<f64>, y: &DMatrix<f64>) -> f64 {
    let g = x * y.transpose();
    let mut worst = f64::INFINITY;
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            worst = worst.min(a.get(i, j) as f64 * g[(i, j)]);
        }
    }
    worst
}

fn alternate(a: &SignMatrix, x: &mut DMatrix<f64>, y: &mut DMatrix<f64>) -> f64 {
    normalize_rows(x);
    normalize_rows(y);
    let mut margin = margin_of(a, x, y);
    for _ in 0..MAX_SWEEPS {
        best_responses(y, x, |i, j| a.get(i, j) as f64);
        best_responses(x, y, |j, i| a.get(i, j) as f64);
        let next = margin_of(a, x, y);
        let improved = next - margin;
        margin = margin.max(next);
        if improved <= SWEEP_TOLERANCE {
            break;
        }
    }
    margin_of(a, x, y)
}

/// Factors of `A` itself from its SVD; every entry of `A` has modulus one,
/// so this realization is feasible.
fn svd_start(a: &SignMatrix, dim: usize) -> (DMatrix<f64>, DMatrix<f64>) {
    let m = DMatrix::from_fn(a.rows(), a.cols(), |i, j| a.get(i, j) as f64);
    let svd = m.svd(true, true);
    let u = svd.u.expect("u");
    let vt = svd.v_t.expect("v_t");
    let r = svd.singular_values.len();
    let mut x = DMatrix::zeros(a.rows(), dim);
    let mut y = DMatrix::zeros(a.cols(), dim);
    for k in 0..r {
        let s = svd.singular_values[k].sqrt();
        for i in 0..a.rows() {
            x[(i, k)] = u[(i, k)] * s;
        }
        for j in 0..a.cols() {
            y[(j, k)] = vt[(k, j)] * s;
        }
    }
    (x, y)
}

fn realization(x: &DMatrix<f64>, y: &DMatrix<f64>, margin: f64) -> MarginRealization {
    let s = margin.sqrt();
    let rows = |m: &DMatrix<f64>| m.row_iter().map(|r| r.iter().map(|v| v / s).collect()).collect();
    let mut r = MarginRealization {
        row_vectors: rows(x),
        col_vectors: rows(y),
        certified_value: 0.0,
    };
    r.certified_value = r.norm_product();
    r
}

/// Margin complexity with the given number of random restarts.
pub fn mc_with(a: &SignMatrix, restarts: usize, seed: u64) -> Result<MarginComplexity> {
    let (rows, cols) = a.shape();
    if rows > MAX_MC_SIDE || cols > MAX_MC_SIDE {
        return Err(Error::Guard(format!("margin complexity of {rows}x{cols} exceeds {MAX_MC_SIDE} per side")));
    }
    let dim = rows + cols;
    let (sx, sy) = svd_start(a, dim);
    let svd_margin = margin_of(a, &sx, &sy);
    let mut best = realization(&sx, &sy, svd_margin);
    let consider = |x: &DMatrix<f64>, y: &DMatrix<f64>, margin: f64, best: &mut MarginRealization| {
        if margin > 0.0 {
            let cand = realization(x, y, margin);
            if cand.certified_value < best.certified_value {
                *best = cand;
            }
        }
    };
    let (mut x, mut y) = (sx.clone(), sy.clone());
    let m = alternate(a, &mut x, &mut y);
    consider(&x, &y, m, &mut best);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..restarts {
        let mut x = DMatrix::from_fn(rows, dim, |_, _| rng.gen_range(-1.0..1.0));
        let mut y = DMatrix::from_fn(cols, dim, |_, _| rng.gen_range(-1.0..1.0));
        let m = alternate(a, &mut x, &mut y);
        consider(&x, &y, m, &mut best);
    }
    if best.min_margin(a) < 1.0 - 1e-9 {
        return Err(Error::NotConverged(format!(
            "no feasible realization found; best margin {}",
            best.min_margin(a)
        )));
    }
    Ok(MarginComplexity {
        value: best.certified_value,
        realization: best,
        restarts,
        seed,
    })
}

pub fn mc(a: &SignMatrix) -> Result<MarginComplexity> {
    mc_with(a, DEFAULT_RESTARTS, DEFAULT_MC_SEED)
}

/// `mc'(B) = mc(J - 2B)`.
pub fn mc_prime(b: &BooleanMatrix) -> Result<MarginComplexity> {
    mc(&b.to_sign())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn min_norm_examples() {
        let pts = DMatrix::from_column_slice(2, 2, &[1.0, 0.0, 0.0, 1.0]);
        let u = min_norm_point(&pts);
        assert!((u[0] - 0.5).abs() < 1e-12 && (u[1] - 0.5).abs() < 1e-12);
        let pts = DMatrix::from_column_slice(2, 3, &[2.0, 1.0, 2.0, -1.0, 3.0, 0.0]);
        let u = min_norm_point(&pts);
        assert!((u[0] - 2.0).abs() < 1e-12 && u[1].abs() < 1e-12);
        let pts = DMatrix::from_column_slice(1, 2, &[1.0, -1.0]);
        assert!(min_norm_point(&pts).norm() < 1e-12);
    }

    #[test]
    fn min_norm_matches_grid() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let pts = DMatrix::from_fn(3, 3, |_, _| rng.gen_range(-1.0..1.0));
            let u = min_norm_point(&pts);
            let mut best = f64::INFINITY;
            let steps = 200;
            for p in 0..=steps {
                for q in 0..=steps - p {
                    let (a, b) = (p as f64 / steps as f64, q as f64 / steps as f64);
                    let v = pts.column(0) * a + pts.column(1) * b + pts.column(2) * (1.0 - a - b);
                    best = best.min(v.norm());
                }
            }
            assert!(u.norm() <= best + 1e-9);
            assert!(u.norm() >= best - 0.02);
        }
    }

    #[test]
    fn mc_examples() {
        let j = mc(&SignMatrix::ones(3, 4).unwrap()).unwrap();
        assert!((j.value - 1.0).abs() < 1e-9, "{}", j.value);
        let had = mc(&SignMatrix::from_rows(&[&[1, 1], &[1, -1]])).unwrap();
        assert!((had.value - 2f64.sqrt()).abs() < 0.05 * 2f64.sqrt(), "{}", had.value);
        let had4 = SignMatrix::from_fn(4, 4, |i, j| if (i & j).count_ones() % 2 == 0 { 1 } else { -1 }).unwrap();
        assert!((mc(&had4).unwrap().value - 2.0).abs() < 0.1);
        assert!(mc_prime(&BooleanMatrix::zeros(2, 2).unwrap()).unwrap().value < 1.0 + 1e-9);
    }

    #[test]
    fn realization_is_feasible() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let rows = rng.gen_range(1..=5);
            let cols = rng.gen_range(1..=5);
            let a = SignMatrix::from_fn(rows, cols, |_, _| if rng.gen_bool(0.5) { 1 } else { -1 }).unwrap();
            let r = mc_with(&a, 10, 1).unwrap();
            assert!(r.realization.min_margin(&a) >= 1.0 - 1e-9);
            assert!(r.value >= 1.0 - 1e-9);
            assert!((r.value - r.realization.norm_product()).abs() < 1e-9);
        }
    }

    #[test]
    fn guard() {
        assert!(matches!(mc(&SignMatrix::ones(9, 1).unwrap()), Err(Error::Guard(_))));
    }
}
