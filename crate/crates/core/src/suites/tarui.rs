//! The rectangle-polynomial pipeline on the shipped fixtures and on seeded
//! random polynomials.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::gen::case_rng;
use super::{guards, CaseResult, SuiteOutput};
use crate::error::Result;
use crate::matrix::BooleanMatrix;
use crate::protocols::Domain;
use crate::report::Check;
use crate::tarui::{fixture, pipeline, PipelineReport, RandomizedRectanglePolynomial, RectangleTerm, RectangleTermPolynomial};

pub const RANDOM_CASES: u64 = 20;
pub const MAX_TERMS: usize = 4;
pub const MAX_COEFFICIENT: i64 = 3;

/// Every check of a pipeline run, member checks prefixed by member index.
fn report_checks(rep: &PipelineReport) -> Vec<Check> {
    let mut out: Vec<Check> = rep
        .members
        .iter()
        .flat_map(|m| {
            m.checks
                .iter()
                .map(move |c| Check::new(format!("member[{}].{}", m.index, c.name), c.passed, c.detail.clone()))
        })
        .collect();
    out.extend(rep.checks.iter().cloned());
    out
}

fn fixture_case(name: &str) -> Result<Vec<Check>> {
    let (rphi, l) = fixture(name).expect("known fixture");
    let rep = pipeline(&rphi, &l)?;
    let mut checks = report_checks(&rep);
    let want_error = if name == "boundary" { "1/3" } else { "0" };
    checks.push(Check::new(
        "fixture.error",
        rep.max_error == want_error,
        format!("max error {}, expected {want_error}", rep.max_error),
    ));
    if rphi.support().len() == 1 {
        let accepted = rep.protocol.support()[0].0.accepted();
        checks.push(Check::new(
            "fixture.language",
            accepted == l,
            format!("accepted set has {} inputs, L has {}", accepted.count_ones(), l.count_ones()),
        ));
    }
    Ok(checks)
}

fn random_phi(rng: &mut ChaCha8Rng, d: Domain) -> RectangleTermPolynomial {
    let count = rng.gen_range(1..=MAX_TERMS);
    let terms = (0..count)
        .map(|_| {
            let mut c = rng.gen_range(1..=MAX_COEFFICIENT);
            if rng.gen_bool(0.5) {
                c = -c;
            }
            let f = (0..d.rows).map(|_| rng.gen_bool(0.5)).collect();
            let g = (0..d.cols).map(|_| rng.gen_bool(0.5)).collect();
            RectangleTerm::new(c, f, g)
        })
        .collect();
    RectangleTermPolynomial::new(d, terms).expect("tables sized to the domain")
}

fn language(phi: &RectangleTermPolynomial) -> BooleanMatrix {
    let d = phi.domain();
    let grid = phi.eval_grid();
    BooleanMatrix::from_fn(d.rows, d.cols, |x, y| grid[x * d.cols + y].is_positive()).expect("nonempty")
}

/// A single exact member, or (odd cases) two copies of it and one random
/// member, each with probability 1/3.
fn random_case(seed: u64, case: u64) -> Result<Vec<Check>> {
    let mut rng = case_rng(seed, case);
    let d = Domain::new(4, 4);
    let phi = random_phi(&mut rng, d);
    let l = language(&phi);
    let rphi = if case.is_multiple_of(2) {
        RandomizedRectanglePolynomial::deterministic(phi)
    } else {
        let third = BigRational::new(BigInt::from(1), BigInt::from(3));
        let noise = random_phi(&mut rng, d);
        RandomizedRectanglePolynomial::new(d, vec![(phi.clone(), third.clone()), (phi, third.clone()), (noise, third)])?
    };
    let rep = pipeline(&rphi, &l)?;
    Ok(report_checks(&rep))
}

pub fn tarui(seed: u64) -> SuiteOutput {
    let mut cases = Vec::new();
    for name in crate::tarui::FIXTURE_NAMES {
        let id = format!("fixture-{name}");
        cases.push(match fixture_case(name) {
            Ok(checks) => CaseResult::new(id, checks),
            Err(e) => CaseResult::error(id, "pipeline.run", &e),
        });
    }
    for case in 0..RANDOM_CASES {
        let id = format!("random-{case:02}");
        cases.push(match random_case(seed, case) {
            Ok(checks) => CaseResult::new(id, checks),
            Err(e) => CaseResult::error(id, "pipeline.run", &e),
        });
    }
    let g = guards(&[
        ("random_cases", RANDOM_CASES.to_string()),
        ("domain", "4x4".into()),
        ("max_terms", MAX_TERMS.to_string()),
        ("max_coefficient", MAX_COEFFICIENT.to_string()),
    ]);
    (g, cases, Vec::new())
}
