//! Dense two-phase simplex over exact rationals, with Bland's rule so that
//! degenerate problems cannot cycle. Problem sizes in this crate stay in the
//! tens of rows and columns, so a full tableau is fine.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<BigRational>,
    pub relation: Relation,
    pub rhs: BigRational,
}

/// `optimize objective . x` subject to the constraints and `x >= 0`.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    pub sense: Sense,
    pub objective: Vec<BigRational>,
    pub constraints: Vec<Constraint>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpSolution {
    pub value: BigRational,
    pub x: Vec<BigRational>,
    /// One multiplier per constraint, signed so that `value = duals . rhs`.
    pub duals: Vec<BigRational>,
}

impl LinearProgram {
    pub fn new(sense: Sense, objective: Vec<BigRational>) -> Self {
        LinearProgram {
            sense,
            objective,
            constraints: Vec::new(),
        }
    }

    pub fn n_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn add(&mut self, coeffs: Vec<BigRational>, relation: Relation, rhs: BigRational) {
        assert_eq!(coeffs.len(), self.n_vars(), "constraint width must match the objective");
        self.constraints.push(Constraint { coeffs, relation, rhs });
    }

    pub fn solve(&self) -> Result<LpSolution> {
        Tableau::build(self).run(self)
    }
}

struct Tableau {
    rows: Vec<Vec<BigRational>>,
    /// Reduced-cost row for the current phase objective (maximization form).
    z: Vec<BigRational>,
    basis: Vec<usize>,
    n_structural: usize,
    first_artificial: usize,
    n_cols: usize,
    /// Per constraint: the column whose reduced cost gives its dual, and the
    /// sign to apply.
    dual_columns: Vec<(usize, bool)>,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Self {
        let n = lp.n_vars();
        let m = lp.constraints.len();
        // Normalize each row to a nonnegative right-hand side.
        let mut normalized: Vec<(Vec<BigRational>, Relation, BigRational)> = lp
            .constraints
            .iter()
            .map(|c| {
                if c.rhs.is_negative() {
                    let rel = match c.relation {
                        Relation::Le => Relation::Ge,
                        Relation::Ge => Relation::Le,
                        Relation::Eq => Relation::Eq,
                    };
                    (c.coeffs.iter().map(|v| -v).collect(), rel, -c.rhs.clone())
                } else {
                    (c.coeffs.clone(), c.relation, c.rhs.clone())
                }
            })
            .collect();
        let n_slack = normalized.iter().filter(|(_, r, _)| *r != Relation::Eq).count();
        let n_art = normalized.iter().filter(|(_, r, _)| *r != Relation::Le).count();
        let first_artificial = n + n_slack;
        let n_cols = first_artificial + n_art;
        let mut rows = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let (mut slack, mut art) = (n, first_artificial);
        let mut dual_columns = Vec::with_capacity(m);
        for ((coeffs, rel, rhs), original) in normalized.drain(..).zip(&lp.constraints) {
            let flipped = original.rhs.is_negative();
            dual_columns.push(match rel {
                Relation::Le => (slack, flipped),
                Relation::Ge => (slack, !flipped),
                Relation::Eq => (art, flipped),
            });
            let mut row = coeffs;
            row.resize(n_cols + 1, BigRational::zero());
            match rel {
                Relation::Le => {
                    row[slack] = BigRational::one();
                    basis.push(slack);
                    slack += 1;
                }
                Relation::Ge => {
                    row[slack] = -BigRational::one();
                    slack += 1;
                    row[art] = BigRational::one();
                    basis.push(art);
                    art += 1;
                }
                Relation::Eq => {
                    row[art] = BigRational::one();
                    basis.push(art);
                    art += 1;
                }
            }
            row[n_cols] = rhs;
            rows.push(row);
        }
        Tableau {
            rows,
            z: vec![BigRational::zero(); n_cols + 1],
            basis,
            n_structural: n,
            first_artificial,
            n_cols,
            dual_columns,
        }
    }

    /// Sets the reduced-cost row for maximizing `cost . x` given the current basis.
    fn price(&mut self, cost: &[BigRational]) {
        let mut z: Vec<BigRational> = (0..=self.n_cols)
            .map(|j| if j < self.n_cols { -cost[j].clone() } else { BigRational::zero() })
            .collect();
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            let cb = &cost[b];
            if cb.is_zero() {
                continue;
            }
            for (zj, v) in z.iter_mut().zip(row) {
                if !v.is_zero() {
                    *zj += cb * v;
                }
            }
        }
        self.z = z;
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        for v in self.rows[r].iter_mut() {
            if !v.is_zero() {
                *v /= &p;
            }
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        if !self.z[c].is_zero() {
            let f = self.z[c].clone();
            for (v, pv) in self.z.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Primal simplex on the current reduced-cost row; columns `>= limit` never enter.
    fn optimize(&mut self, limit: usize) -> Result<()> {
        loop {
            // Bland: lowest-index improving column.
            let Some(c) = (0..limit).find(|&j| self.z[j].is_negative()) else {
                return Ok(());
            };
            let mut best: Option<(usize, BigRational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[c].is_positive() {
                    continue;
                }
                let ratio = &row[self.n_cols] / &row[c];
                best = match best {
                    None => Some((i, ratio)),
                    Some((bi, br)) => {
                        if ratio < br || (ratio == br && self.basis[i] < self.basis[bi]) {
                            Some((i, ratio))
                        } else {
                            Some((bi, br))
                        }
                    }
                };
            }
            let Some((r, _)) = best else {
                return Err(Error::Unbounded(format!("column {c} has no positive entry")));
            };
            self.pivot(r, c);
        }
    }

    fn run(mut self, lp: &LinearProgram) -> Result<LpSolution> {
        if self.first_artificial < self.n_cols {
            let phase1: Vec<BigRational> = (0..self.n_cols)
                .map(|j| if j >= self.first_artificial { -BigRational::one() } else { BigRational::zero() })
                .collect();
            self.price(&phase1);
            self.optimize(self.n_cols)?;
            if !self.z[self.n_cols].is_zero() {
                return Err(Error::Infeasible(format!(
                    "phase one ended with artificial mass {}",
                    -self.z[self.n_cols].clone()
                )));
            }
            // Drive remaining (zero-valued) artificials out of the basis.
            let mut r = 0;
            while r < self.rows.len() {
                if self.basis[r] >= self.first_artificial {
                    match (0..self.first_artificial).find(|&j| !self.rows[r][j].is_zero()) {
                        Some(c) => self.pivot(r, c),
                        None => {
                            self.rows.remove(r);
                            self.basis.remove(r);
                            continue;
                        }
                    }
                }
                r += 1;
            }
        }
        let sign = match lp.sense {
            Sense::Maximize => BigRational::one(),
            Sense::Minimize => -BigRational::one(),
        };
        let mut cost: Vec<BigRational> = lp.objective.iter().map(|c| c * &sign).collect();
        cost.resize(self.n_cols, BigRational::zero());
        self.price(&cost);
        self.optimize(self.first_artificial)?;
        let mut x = vec![BigRational::zero(); self.n_structural];
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            if b < self.n_structural {
                x[b] = row[self.n_cols].clone();
            }
        }
        let value = lp
            .objective
            .iter()
            .zip(&x)
            .fold(BigRational::zero(), |acc, (c, v)| acc + c * v);
        let duals = self
            .dual_columns
            .iter()
            .map(|&(col, negate)| {
                let y = self.z[col].clone() * &sign;
                if negate {
                    -y
                } else {
                    y
                }
            })
            .collect();
        Ok(LpSolution { value, x, duals })
    }
}

/// Optimal mixed strategy and value of a finite zero-sum game.
#[derive(Clone, Debug, PartialEq)]
pub struct GameSolution {
    pub value: BigRational,
    pub strategy: Vec<BigRational>,
}

fn shift_nonnegative(payoff: &[Vec<BigRational>]) -> BigRational {
    payoff
        .iter()
        .flatten()
        .min()
        .cloned()
        .unwrap_or_else(BigRational::zero)
        .min(BigRational::zero())
}

fn check_payoff(payoff: &[Vec<BigRational>]) -> Result<(usize, usize)> {
    let rows = payoff.len();
    let cols = payoff.first().map_or(0, Vec::len);
    if rows == 0 || cols == 0 || payoff.iter().any(|r| r.len() != cols) {
        return Err(Error::InvalidArgument("payoff matrix must be nonempty and rectangular".into()));
    }
    Ok((rows, cols))
}

/// `min_q max_i (payoff q)_i` over mixed column strategies `q`.
pub fn min_max_columns(payoff: &[Vec<BigRational>]) -> Result<GameSolution> {
    let (rows, cols) = check_payoff(payoff)?;
    let shift = shift_nonnegative(payoff);
    // variables: q_0..q_{cols-1}, v
    let mut objective = vec![BigRational::zero(); cols + 1];
    objective[cols] = BigRational::one();
    let mut lp = LinearProgram::new(Sense::Minimize, objective);
    for row in payoff {
        let mut coeffs: Vec<BigRational> = row.iter().map(|p| p - &shift).collect();
        coeffs.push(-BigRational::one());
        lp.add(coeffs, Relation::Le, BigRational::zero());
    }
    let mut simplex = vec![BigRational::one(); cols];
    simplex.push(BigRational::zero());
    lp.add(simplex, Relation::Eq, BigRational::one());
    let sol = lp.solve()?;
    debug_assert!(rows > 0);
    Ok(GameSolution {
        value: sol.value + shift,
        strategy: sol.x[..cols].to_vec(),
    })
}

/// `max_p min_j (p^T payoff)_j` over mixed row strategies `p`.
pub fn max_min_rows(payoff: &[Vec<BigRational>]) -> Result<GameSolution> {
    let (rows, cols) = check_payoff(payoff)?;
    let shift = shift_nonnegative(payoff);
    let mut objective = vec![BigRational::zero(); rows + 1];
    objective[rows] = BigRational::one();
    let mut lp = LinearProgram::new(Sense::Maximize, objective);
    for j in 0..cols {
        let mut coeffs: Vec<BigRational> = payoff.iter().map(|r| &r[j] - &shift).collect();
        coeffs.push(-BigRational::one());
        lp.add(coeffs, Relation::Ge, BigRational::zero());
    }
    let mut simplex = vec![BigRational::one(); rows];
    simplex.push(BigRational::zero());
    lp.add(simplex, Relation::Eq, BigRational::one());
    let sol = lp.solve()?;
    Ok(GameSolution {
        value: sol.value + shift,
        strategy: sol.x[..rows].to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn qi(n: i64) -> BigRational {
        q(n, 1)
    }

    #[test]
    fn textbook_maximization() {
        // max 3x + 5y s.t. x <= 4, 2y <= 12, 3x + 2y <= 18  ->  36 at (2, 6)
        let mut lp = LinearProgram::new(Sense::Maximize, vec![qi(3), qi(5)]);
        lp.add(vec![qi(1), qi(0)], Relation::Le, qi(4));
        lp.add(vec![qi(0), qi(2)], Relation::Le, qi(12));
        lp.add(vec![qi(3), qi(2)], Relation::Le, qi(18));
        let sol = lp.solve().unwrap();
        assert_eq!(sol.value, qi(36));
        assert_eq!(sol.x, vec![qi(2), qi(6)]);
        assert_eq!(sol.duals, vec![qi(0), q(3, 2), qi(1)]);
    }

    #[test]
    fn minimization_with_ge_and_eq() {
        // min x + y s.t. x + 2y >= 3, x - y = 0  ->  x = y = 1
        let mut lp = LinearProgram::new(Sense::Minimize, vec![qi(1), qi(1)]);
        lp.add(vec![qi(1), qi(2)], Relation::Ge, qi(3));
        lp.add(vec![qi(1), qi(-1)], Relation::Eq, qi(0));
        let sol = lp.solve().unwrap();
        assert_eq!(sol.value, qi(2));
        assert_eq!(sol.x, vec![qi(1), qi(1)]);
        assert_eq!(sol.duals[0], q(2, 3));
        assert_eq!(sol.duals[0].clone() * qi(3) + sol.duals[1].clone() * qi(0), sol.value);
    }

    #[test]
    fn duals_with_negative_rhs() {
        // max -x - y s.t. -x - y <= -2, x <= 5  ->  -2, dual of the first row is 1
        let mut lp = LinearProgram::new(Sense::Maximize, vec![qi(-1), qi(-1)]);
        lp.add(vec![qi(-1), qi(-1)], Relation::Le, qi(-2));
        lp.add(vec![qi(1), qi(0)], Relation::Le, qi(5));
        let sol = lp.solve().unwrap();
        assert_eq!(sol.value, qi(-2));
        assert_eq!(sol.duals, vec![qi(1), qi(0)]);
        let mut lp = LinearProgram::new(Sense::Minimize, vec![qi(1), qi(1)]);
        lp.add(vec![qi(1), qi(1)], Relation::Ge, qi(2));
        lp.add(vec![qi(1), qi(-1)], Relation::Eq, qi(-1));
        let sol = lp.solve().unwrap();
        assert_eq!(sol.value, qi(2));
        let dot = sol.duals[0].clone() * qi(2) + sol.duals[1].clone() * qi(-1);
        assert_eq!(dot, sol.value);
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = LinearProgram::new(Sense::Maximize, vec![qi(1)]);
        lp.add(vec![qi(1)], Relation::Le, qi(1));
        lp.add(vec![qi(1)], Relation::Ge, qi(2));
        assert!(matches!(lp.solve(), Err(Error::Infeasible(_))));

        let mut lp = LinearProgram::new(Sense::Maximize, vec![qi(1), qi(0)]);
        lp.add(vec![qi(-1), qi(1)], Relation::Le, qi(1));
        assert!(matches!(lp.solve(), Err(Error::Unbounded(_))));
    }

    #[test]
    fn negative_rhs_is_normalized() {
        // max -x s.t. -x <= -2  ->  x = 2
        let mut lp = LinearProgram::new(Sense::Maximize, vec![qi(-1)]);
        lp.add(vec![qi(-1)], Relation::Le, qi(-2));
        assert_eq!(lp.solve().unwrap().x, vec![qi(2)]);
    }

    #[test]
    fn redundant_equalities() {
        let mut lp = LinearProgram::new(Sense::Maximize, vec![qi(1), qi(1)]);
        lp.add(vec![qi(1), qi(1)], Relation::Eq, qi(1));
        lp.add(vec![qi(2), qi(2)], Relation::Eq, qi(2));
        assert_eq!(lp.solve().unwrap().value, qi(1));
    }

    #[test]
    fn degenerate_cycling_example() {
        // Beale's example cycles under the largest-coefficient rule.
        let mut lp = LinearProgram::new(Sense::Minimize, vec![q(-3, 4), qi(150), q(-1, 50), qi(6)]);
        lp.add(vec![q(1, 4), qi(-60), q(-1, 25), qi(9)], Relation::Le, qi(0));
        lp.add(vec![q(1, 2), qi(-90), q(-1, 50), qi(3)], Relation::Le, qi(0));
        lp.add(vec![qi(0), qi(0), qi(1), qi(0)], Relation::Le, qi(1));
        let sol = lp.solve().unwrap();
        assert_eq!(sol.value, q(-1, 20));
    }

    #[test]
    fn matching_pennies_and_rock_paper_scissors() {
        let pennies = vec![vec![qi(1), qi(-1)], vec![qi(-1), qi(1)]];
        let a = min_max_columns(&pennies).unwrap();
        let b = max_min_rows(&pennies).unwrap();
        assert_eq!(a.value, qi(0));
        assert_eq!(b.value, qi(0));
        assert_eq!(a.strategy, vec![q(1, 2), q(1, 2)]);

        let rps = vec![
            vec![qi(0), qi(2), qi(-1)],
            vec![qi(-1), qi(0), qi(1)],
            vec![qi(1), qi(-1), qi(0)],
        ];
        assert_eq!(max_min_rows(&rps).unwrap().value, q(1, 12));
        assert_eq!(min_max_columns(&rps).unwrap().value, q(1, 12));
    }
}
