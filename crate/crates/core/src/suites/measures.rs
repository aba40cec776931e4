//! Suites over discrepancy, margin complexity, the BP operator and Yao's
//! minimax principle.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

use super::gen::{case_rng, random_boolean, random_guess, random_sign};
use super::{guards, CaseResult, SuiteOutput};
use crate::error::Result;
use crate::matrix::{enumerate_rectangles, parse_rational, BooleanMatrix, InputDistribution, SignMatrix};
use crate::measures::disc::rectangle_sum;
use crate::measures::{bp_measure, disc, entry_count, klauck_consistency, ls_sandwich_check, mc};
use crate::protocols::{enumerate_protocols, threshold_to_pp, DeterministicProtocol, Domain, GuessProtocol};
use crate::randomized::yao_minimax_check;
use crate::report::Check;

pub const LS_CASES: u64 = 100;
pub const LS_MAX_SIDE: usize = 5;
pub const KLAUCK_CASES: u64 = 50;
pub const YAO_CASES: u64 = 50;
pub const BP_EPS: [(i64, i64); 5] = [(0, 1), (1, 8), (1, 4), (1, 2), (1, 1)];
const MC_GRID_STEPS: usize = 120;
const DISC_GRID_STEP: i64 = 12;
const BP_GRID_STEPS: i64 = 100;

fn r(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `max_R |sum_R mu A|` over every rectangle.
fn brute_disc_mu(a: &SignMatrix, mu: &InputDistribution) -> Result<BigRational> {
    Ok(enumerate_rectangles(a.rows(), a.cols())?
        .map(|rect| num_traits::Signed::abs(&rectangle_sum(a, mu.weights(), &rect)))
        .max()
        .unwrap_or_default())
}

/// `min_mu disc_mu` over distributions on a 2x2 matrix with step `1/DISC_GRID_STEP`.
fn grid_disc_2x2(a: &SignMatrix) -> Result<BigRational> {
    let s = DISC_GRID_STEP;
    let mut best: Option<BigRational> = None;
    for p in 0..=s {
        for q in 0..=s - p {
            for t in 0..=s - p - q {
                let w = vec![r(p, s), r(q, s), r(t, s), r(s - p - q - t, s)];
                let v = brute_disc_mu(a, &InputDistribution::new(2, 2, w)?)?;
                best = Some(best.map_or(v.clone(), |b| b.min(v)));
            }
        }
    }
    Ok(best.expect("grid is nonempty"))
}

/// Best margin of a 2x2 sign matrix over unit vectors in the plane at angles
/// on a grid, with the first row vector fixed by rotation invariance.
fn grid_margin_2x2(a: &SignMatrix) -> f64 {
    let angle = |k: usize| 2.0 * std::f64::consts::PI * k as f64 / MC_GRID_STEPS as f64;
    let mut best = f64::NEG_INFINITY;
    for x1 in 0..MC_GRID_STEPS {
        for y0 in 0..MC_GRID_STEPS {
            for y1 in 0..MC_GRID_STEPS {
                let xs = [0.0, angle(x1)];
                let ys = [angle(y0), angle(y1)];
                let mut margin = f64::INFINITY;
                for (i, xa) in xs.iter().enumerate() {
                    for (j, ya) in ys.iter().enumerate() {
                        margin = margin.min(f64::from(a.get(i, j)) * (xa - ya).cos());
                    }
                }
                best = best.max(margin);
            }
        }
    }
    best
}

fn disc_case(a: &SignMatrix, want: BigRational) -> Result<Vec<Check>> {
    let d = disc(a)?;
    let at_mu = brute_disc_mu(a, &d.mu)?;
    let grid = grid_disc_2x2(a)?;
    Ok(vec![
        Check::new("disc.value", d.value == want, format!("disc = {}, expected {want}", d.value)),
        Check::new("disc.rectangles", at_mu == d.value, format!("max over all rectangles at the LP distribution: {at_mu}")),
        Check::new("disc.grid", grid == d.value, format!("grid minimum with step 1/{DISC_GRID_STEP}: {grid}")),
    ])
}

fn mc_case() -> Result<Vec<Check>> {
    let h = SignMatrix::from_rows(&[&[1, 1], &[1, -1]]);
    let m = mc(&h)?;
    let grid = 1.0 / grid_margin_2x2(&h);
    let sqrt2 = std::f64::consts::SQRT_2;
    Ok(vec![
        Check::new("mc.sqrt2", (m.value - sqrt2).abs() <= 0.05 * sqrt2, format!("mc = {}, sqrt 2 = {sqrt2}", m.value)),
        Check::new("mc.grid", (m.value - grid).abs() <= 0.05 * grid, format!("mc = {}, planar grid search = {grid}", m.value)),
        Check::new("mc.at_least_one", m.value >= 1.0, format!("mc = {}", m.value)),
    ])
}

fn ls_case(seed: u64, case: u64) -> Result<Vec<Check>> {
    let mut rng = case_rng(seed, case);
    let rows = rng.gen_range(1..=LS_MAX_SIDE);
    let cols = rng.gen_range(1..=LS_MAX_SIDE);
    let a = random_sign(&mut rng, rows, cols);
    let ls = ls_sandwich_check(&a)?;
    let mut checks = ls.checks;
    for c in &mut checks {
        c.detail = format!("{rows}x{cols}: {}", c.detail);
    }
    Ok(checks)
}

fn klauck_check(name: &str, g: &GuessProtocol) -> Result<Check> {
    let f = g.accepted();
    let k = klauck_consistency(&f, g)?;
    Ok(Check::new(
        name,
        k.lower_bound_holds,
        format!("log2(1/disc') = {:.6} <= pp_cost = {} (disc' = {})", k.log_inv_disc_prime, k.pp_cost, k.disc_prime),
    ))
}

fn klauck_case(seed: u64, case: u64) -> Result<Vec<Check>> {
    let mut rng = case_rng(seed, case);
    let side = rng.gen_range(2..=4);
    let d = Domain::new(side, side);
    let g = random_guess(&mut rng, d, 4, 2);
    let f = g.accepted();
    let l = u64::try_from(g.guess_count().clone()).unwrap_or(u64::MAX);
    let t = BigInt::from(rng.gen_range(0..=l));
    Ok(vec![
        klauck_check("klauck.random", &g)?,
        klauck_check("klauck.tree", &GuessProtocol::single(DeterministicProtocol::for_matrix(&f)))?,
        klauck_check("klauck.threshold", &threshold_to_pp(&g, &t)?)?,
    ])
}

fn klauck_examples() -> Result<Vec<Check>> {
    let zeros = GuessProtocol::constants(Domain::new(2, 2), &[false])?;
    let k0 = klauck_consistency(&BooleanMatrix::zeros(2, 2)?, &zeros)?;
    let id = BooleanMatrix::from_rows(&[&[0, 1], &[1, 0]]);
    let k1 = klauck_consistency(&id, &GuessProtocol::single(DeterministicProtocol::for_matrix(&id)))?;
    Ok(vec![
        Check::new(
            "klauck.zeros",
            k0.disc_prime == BigRational::one() && k0.pp_cost == 0 && k0.lower_bound_holds,
            format!("disc' = {}, cost = {}", k0.disc_prime, k0.pp_cost),
        ),
        Check::new(
            "klauck.anti_identity",
            k1.disc_prime == r(1, 4) && k1.lower_bound_holds,
            format!("disc' = {}, log2(1/disc') = {} <= cost {}", k1.disc_prime, k1.log_inv_disc_prime, k1.pp_cost),
        ),
    ])
}

fn run(id: String, check: &str, r: Result<Vec<Check>>) -> CaseResult {
    match r {
        Ok(checks) => CaseResult::new(id, checks),
        Err(e) => CaseResult::error(id, check, &e),
    }
}

pub fn measures(seed: u64) -> SuiteOutput {
    let mut cases = vec![
        run("disc-anti-hadamard".into(), "disc.run", disc_case(&SignMatrix::from_rows(&[&[1, -1], &[-1, 1]]), r(1, 4))),
        run("disc-hadamard".into(), "disc.run", disc_case(&SignMatrix::from_rows(&[&[1, 1], &[1, -1]]), r(1, 3))),
        run("mc-hadamard".into(), "mc.run", mc_case()),
        run("klauck-examples".into(), "klauck.run", klauck_examples()),
    ];
    for case in 0..LS_CASES {
        cases.push(run(format!("ls-{case:03}"), "ls.run", ls_case(seed, case)));
    }
    for case in 0..KLAUCK_CASES {
        cases.push(run(format!("klauck-{case:03}"), "klauck.run", klauck_case(seed, 10_000 + case)));
    }
    let g = guards(&[
        ("ls_cases", LS_CASES.to_string()),
        ("ls_max_side", LS_MAX_SIDE.to_string()),
        ("klauck_cases", KLAUCK_CASES.to_string()),
        ("mc_restarts", crate::measures::margin::DEFAULT_RESTARTS.to_string()),
        ("mc_seed", crate::measures::margin::DEFAULT_MC_SEED.to_string()),
        ("ls_tolerance", crate::measures::checks::LS_TOLERANCE.to_string()),
    ]);
    (g, cases, Vec::new())
}

/// `max_mu min {entries(g) : mu(f != g) <= num/den}` over distributions on a
/// 2x2 matrix with step `1/BP_GRID_STEPS`.
fn grid_bp(f: &BooleanMatrix, num: i64, den: i64) -> f64 {
    let fc = f.code();
    let steps = BP_GRID_STEPS;
    let mut best = f64::NEG_INFINITY;
    for a in 0..=steps {
        for b in 0..=steps - a {
            for c in 0..=steps - a - b {
                let w = [a, b, c, steps - a - b - c];
                let mut inner = f64::INFINITY;
                for g in 0..16u64 {
                    let diff = g ^ fc;
                    let d: i64 = (0..4).filter(|k| (diff >> k) & 1 == 1).map(|k| w[k]).sum();
                    if d * den <= num * steps {
                        inner = inner.min(g.count_ones() as f64);
                    }
                }
                best = best.max(inner);
            }
        }
    }
    best
}

fn bp_case(f: &BooleanMatrix, grid: bool) -> Result<Vec<Check>> {
    let lam = entry_count();
    let mut values = Vec::new();
    let mut checks = Vec::new();
    for (num, den) in BP_EPS {
        let v = bp_measure(&lam, f, &r(num, den))?.value;
        if grid {
            // the grid can only lower the max; shrinking eps by the grid's
            // rounding error makes up for it
            let below = grid_bp(f, num, den);
            let lowered = (num * BP_GRID_STEPS - 4 * den).max(0);
            let above = grid_bp(f, lowered, BP_GRID_STEPS * den);
            checks.push(Check::new(
                format!("bp.grid[{num}/{den}]"),
                below <= v && v <= above,
                format!("grid {below} <= {v} <= grid at eps - 0.04 {above}"),
            ));
        }
        values.push(v);
    }
    let ones = f.count_ones() as f64;
    checks.insert(0, Check::new("bp.eps0", values[0] == ones, format!("{} vs entries {ones}", values[0])));
    checks.insert(
        1,
        Check::new(
            "bp.monotone",
            values.windows(2).all(|w| w[1] <= w[0]),
            format!("values at eps 0, 1/8, 1/4, 1/2, 1: {values:?}"),
        ),
    );
    Ok(checks)
}

fn worked_example() -> Result<Vec<Check>> {
    let f = BooleanMatrix::from_rows(&[&[1, 0], &[0, 1]]);
    let b = bp_measure(&entry_count(), &f, &r(1, 4))?;
    let want_mu = [r(1, 2), r(0, 1), r(0, 1), r(1, 2)];
    let grid = grid_bp(&f, 1, 4);
    Ok(vec![
        Check::new("bp.worked.value", b.value == 2.0, format!("value {}", b.value)),
        Check::new(
            "bp.worked.mu",
            b.mu.weights() == want_mu,
            format!("mu {:?}", b.mu.weights().iter().map(|w| w.to_string()).collect::<Vec<_>>()),
        ),
        Check::new("bp.worked.f_tilde", b.f_tilde.as_ref() == Some(&f), format!("{:?}", b.f_tilde.as_ref().map(|m| m.code()))),
        Check::new("bp.worked.grid", grid == 2.0, format!("grid value {grid}")),
    ])
}

pub fn bp(_seed: u64) -> SuiteOutput {
    let mut cases = vec![run("worked-example".into(), "bp.run", worked_example())];
    for code in 0..16u64 {
        let f = BooleanMatrix::from_code(2, 2, code).expect("2x2");
        cases.push(run(format!("entries-2x2-{code:02}"), "bp.run", bp_case(&f, true)));
    }
    for code in 0..512u64 {
        let f = BooleanMatrix::from_code(3, 3, code).expect("3x3");
        cases.push(run(format!("entries-3x3-{code:03}"), "bp.run", bp_case(&f, false)));
    }
    let g = guards(&[
        ("measure", "entries".into()),
        ("eps", "0,1/8,1/4,1/2,1".into()),
        ("grid_steps", BP_GRID_STEPS.to_string()),
        ("max_cells", crate::measures::bp::MAX_BP_CELLS.to_string()),
    ]);
    (g, cases, Vec::new())
}

fn yao_case(seed: u64, case: u64) -> Result<Vec<Check>> {
    let mut rng = case_rng(seed, case);
    let d = Domain::new(2, 2);
    let all = enumerate_protocols(d, 2)?;
    let size = rng.gen_range(2..=8);
    let family: Vec<GuessProtocol> = (0..size)
        .map(|_| {
            let l = rng.gen_range(1..=3);
            let members = (0..l)
                .map(|_| all.get(rng.gen_range(0..all.total())).expect("index below total"))
                .collect();
            GuessProtocol::new(members).expect("shared domain")
        })
        .collect();
    let f = random_boolean(&mut rng, 2, 2);
    let rep = yao_minimax_check(&f, &family, None)?;

    let errs: Vec<Vec<bool>> = family
        .iter()
        .map(|g| g.accepted().entries().iter().zip(f.entries()).map(|(a, b)| a != b).collect())
        .collect();
    let parse = |s: &str| parse_rational(s).unwrap_or_else(|| BigRational::from_integer((-1).into()));
    let mut mix = vec![BigRational::zero(); d.size()];
    for (i, q) in &rep.protocol_strategy {
        for (cell, e) in mix.iter_mut().zip(&errs[*i]) {
            if *e {
                *cell += parse(q);
            }
        }
    }
    let primal = mix.into_iter().max().expect("nonempty");
    let mu: Vec<BigRational> = rep.input_strategy.iter().map(|s| parse(s)).collect();
    let dual = errs
        .iter()
        .map(|e| e.iter().zip(&mu).filter(|(b, _)| **b).map(|(_, m)| m.clone()).sum::<BigRational>())
        .min()
        .expect("nonempty");
    Ok(vec![
        Check::new(
            "yao.agree",
            rep.agree,
            format!("primal {} dual {} difference {}", rep.primal_value, rep.dual_value, rep.difference),
        ),
        Check::new(
            "yao.primal_strategy",
            primal == rep.primal_value,
            format!("worst input error of the protocol mixture {primal}"),
        ),
        Check::new(
            "yao.dual_strategy",
            dual == rep.dual_value,
            format!("best protocol error under the input distribution {dual}"),
        ),
    ])
}

pub fn yao(seed: u64) -> SuiteOutput {
    let cases = (0..YAO_CASES)
        .map(|case| run(format!("{case:02}"), "yao.run", yao_case(seed, case)))
        .collect();
    let g = guards(&[
        ("cases", YAO_CASES.to_string()),
        ("domain", "2x2".into()),
        ("max_depth", "2".into()),
        ("family_size", "2..8".into()),
        ("tolerance", crate::randomized::YAO_TOLERANCE.to_string()),
    ]);
    (g, cases, Vec::new())
}
