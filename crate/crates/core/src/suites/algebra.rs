//! Suites over guess-protocol algebra, the polynomial compilers and majority.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow};
use rand::Rng;

use super::gen::{case_rng, error_third_members, random_boolean, random_guess, random_polynomial};
use super::{grid_check, guards, CaseResult, SuiteOutput};
use crate::error::Result;
use crate::poly::compile::{lemma1_compile, majority_bound, majority_compile};
use crate::poly::degm::{check_degm_bounds, DegmReport};
use crate::protocols::guess::MATERIALIZE_LIMIT;
use crate::protocols::{ceil_log2, pp_to_threshold, threshold_to_pp, DeterministicProtocol, Domain, GuessProtocol};
use crate::randomized::{amplify, chernoff_bound, majority_success, within_chernoff_tail, RandomizedPPProtocol};
use crate::report::Check;

pub const GAP_CASES: u64 = 1000;
pub const LEMMA1_CASES: u64 = 200;
pub const MAJORITY_SETS: u64 = 50;
pub const AMPLIFY_CASES: u64 = 10;
pub const PP_CASES: u64 = 500;

/// Gaps obtained by evaluating every member at every input.
fn counted_gaps(g: &GuessProtocol) -> Result<Vec<BigInt>> {
    Ok(g.count_profile(MATERIALIZE_LIMIT)?.gap)
}

/// Compares both the composed gap grid and the member-by-member count with `want`.
fn gap_check(name: &str, g: &GuessProtocol, want: &[BigInt]) -> Result<Check> {
    let domain = g.domain();
    let lazy = grid_check(name, domain, g.gap_grid(), want);
    if !lazy.passed {
        return Ok(lazy);
    }
    Ok(grid_check(name, domain, &counted_gaps(g)?, want))
}

fn gap_case(seed: u64, case: u64) -> Result<Vec<Check>> {
    let mut rng = case_rng(seed, case);
    let d = Domain::new(4, 4);
    let a = random_guess(&mut rng, d, 4, 3);
    let b = random_guess(&mut rng, d, 4, 3);
    let (ga, gb) = (counted_gaps(&a)?, counted_gaps(&b)?);
    let neg: Vec<BigInt> = ga.iter().map(|v| -v).collect();
    let sum: Vec<BigInt> = ga.iter().zip(&gb).map(|(x, y)| x + y).collect();
    let prod: Vec<BigInt> = ga.iter().zip(&gb).map(|(x, y)| x * y).collect();
    Ok(vec![
        gap_check("gap.complement", &a.complement(), &neg)?,
        gap_check("gap.sum", &a.sum(&b)?, &sum)?,
        gap_check("gap.product", &a.product(&b)?, &prod)?,
    ])
}

pub fn gap_algebra(seed: u64) -> SuiteOutput {
    let cases = (0..GAP_CASES)
        .map(|case| {
            let id = format!("{case:04}");
            match gap_case(seed, case) {
                Ok(checks) => CaseResult::new(id, checks),
                Err(e) => CaseResult::error(id, "gap.run", &e),
            }
        })
        .collect();
    let g = guards(&[
        ("cases", GAP_CASES.to_string()),
        ("domain", "4x4".into()),
        ("max_guesses", "4".into()),
        ("max_depth", "3".into()),
    ]);
    (g, cases, Vec::new())
}

fn lemma1_case(seed: u64, case: u64) -> Result<Vec<Check>> {
    let mut rng = case_rng(seed, case);
    let d = Domain::new(4, 4);
    let k = rng.gen_range(1..=3usize);
    let deg = rng.gen_range(0..=3u32);
    let protocols: Vec<GuessProtocol> = (0..k).map(|_| random_guess(&mut rng, d, 4, 2)).collect();
    let p = random_polynomial(&mut rng, k, deg, 5);
    let compiled = lemma1_compile(&protocols, &p)?;

    let gaps = protocols.iter().map(counted_gaps).collect::<Result<Vec<_>>>()?;
    let want = (0..d.size())
        .map(|cell| {
            let z: Vec<BigInt> = gaps.iter().map(|g| g[cell].clone()).collect();
            p.evaluate(&z)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut checks = vec![gap_check("lemma1.gap", &compiled, &want)?];

    let m: BigUint = p.terms().map(|(_, c)| c.magnitude().clone()).max().unwrap_or_default();
    if m == BigUint::from(0u32) {
        checks.push(Check::new("lemma1.bound", true, "zero polynomial, no bound"));
        return Ok(checks);
    }
    let l = protocols.iter().map(|g| g.guess_count().clone()).max().expect("k >= 1");
    let c = protocols.iter().map(|g| g.max_member_cost()).max().expect("k >= 1") as u64;
    let dd = p.degree();
    let kk = k as u32;
    let guesses = &m * Pow::pow(&l, dd) * Pow::pow(BigUint::from(dd + kk), kk + 1);
    let cost = ceil_log2(&guesses) + c * dd as u64;
    checks.push(Check::new(
        "lemma1.guesses",
        compiled.guess_count() <= &guesses,
        format!("{} <= M l^d (d+k)^(k+1) = {guesses} (M={m}, l={l}, d={dd}, k={k})", compiled.guess_count()),
    ));
    checks.push(Check::new(
        "lemma1.cost",
        compiled.pp_cost() <= cost,
        format!("{} <= {cost} (c={c})", compiled.pp_cost()),
    ));
    Ok(checks)
}

pub fn lemma1(seed: u64) -> SuiteOutput {
    let cases = (0..LEMMA1_CASES)
        .map(|case| {
            let id = format!("{case:03}");
            match lemma1_case(seed, case) {
                Ok(checks) => CaseResult::new(id, checks),
                Err(e) => CaseResult::error(id, "lemma1.run", &e),
            }
        })
        .collect();
    let g = guards(&[
        ("cases", LEMMA1_CASES.to_string()),
        ("domain", "4x4".into()),
        ("max_k", "3".into()),
        ("max_degree", "3".into()),
        ("max_coefficient", "5".into()),
        ("max_guesses", "4".into()),
    ]);
    (g, cases, Vec::new())
}

fn degm_case(report: DegmReport) -> CaseResult {
    let (checks, notes): (Vec<Check>, Vec<Check>) = report
        .checks
        .into_iter()
        .partition(|c| !DegmReport::INFORMATIONAL.contains(&c.name.as_str()));
    let mut case = CaseResult::new(format!("k{}-m{}", report.k, report.m), checks);
    case.notes = notes;
    case
}

pub fn degm(seed: u64) -> SuiteOutput {
    let mut cases = Vec::new();
    for k in 1..=4 {
        for m in 0..=4 {
            cases.push(match check_degm_bounds(k, m, seed) {
                Ok(r) => degm_case(r),
                Err(e) => CaseResult::error(format!("k{k}-m{m}"), "degm.run", &e),
            });
        }
    }
    let g = guards(&[
        ("max_k", "4".into()),
        ("max_m", "4".into()),
        ("full_grid_limit", crate::poly::degm::FULL_GRID_LIMIT.to_string()),
        ("sampled_points", crate::poly::degm::SAMPLED_POINTS.to_string()),
    ]);
    (g, cases, Vec::new())
}

fn majority_case(seed: u64, stream: u64, k: usize) -> Result<Vec<Check>> {
    let mut rng = case_rng(seed, stream);
    let d = Domain::new(3, 3);
    let members: Vec<GuessProtocol> = (0..k).map(|_| random_guess(&mut rng, d, 3, 2)).collect();
    let compiled = majority_compile(&members)?;
    let votes = members.iter().map(counted_gaps).collect::<Result<Vec<_>>>()?;
    let want: Vec<u8> = (0..d.size())
        .map(|cell| u8::from(2 * votes.iter().filter(|g| g[cell] > BigInt::from(0)).count() > k))
        .collect();
    let got: Vec<u8> = compiled.accepted().entries().iter().map(|&b| u8::from(b)).collect();
    let bound = majority_bound(&members)?;
    Ok(vec![
        grid_check("majority.pointwise", d, &got, &want),
        Check::new(
            "majority.bound",
            bound.holds(&compiled),
            format!(
                "guesses 2^{:.1} cost {} vs bound cost {}",
                crate::randomized::log2_guesses(&compiled),
                compiled.pp_cost(),
                bound.cost
            ),
        ),
    ])
}

fn amplify_case(seed: u64, stream: u64, t: usize) -> Result<Vec<Check>> {
    let mut rng = case_rng(seed, stream);
    let f = random_boolean(&mut rng, 4, 4);
    let members = error_third_members(&mut rng, &f)
        .iter()
        .map(|m| GuessProtocol::single(DeterministicProtocol::for_matrix(m)))
        .collect();
    let rp = RandomizedPPProtocol::uniform(members)?;
    let third = BigRational::new(BigInt::one(), BigInt::from(3));
    let sixth = BigRational::new(BigInt::one(), BigInt::from(6));
    let base = rp.error(&f)?;
    let amplified = amplify(&rp, t)?;
    let err = amplified.protocol.error(&f)?;
    let exact = BigRational::one() - majority_success(&(BigRational::one() - &third), t as u64);
    let tail = 1.0 - chernoff_bound(&sixth, t as u64)?;
    let over = amplified
        .protocol
        .support()
        .iter()
        .filter(|(g, _)| !amplified.bound.holds(g))
        .count();
    Ok(vec![
        Check::new("amplify.base", base == third, format!("base error {base}")),
        Check::new("amplify.exact", err == exact, format!("error {err}, binomial tail {exact}")),
        Check::new(
            "amplify.chernoff",
            within_chernoff_tail(&err, &sixth, t as u64)?,
            format!("error {err} <= 1 - chernoff_bound(1/6, {t}) = {tail}"),
        ),
        Check::new(
            "amplify.cost",
            over == 0,
            format!("{over} of {} tuple protocols exceed the bound", amplified.protocol.support().len()),
        ),
    ])
}

pub fn majority(seed: u64) -> SuiteOutput {
    let mut cases = Vec::new();
    for k in [3usize, 5] {
        for set in 0..MAJORITY_SETS {
            let id = format!("majority-k{k}-{set:02}");
            let stream = 1000 * k as u64 + set;
            cases.push(match majority_case(seed, stream, k) {
                Ok(checks) => CaseResult::new(id, checks),
                Err(e) => CaseResult::error(id, "majority.run", &e),
            });
        }
    }
    for t in [3usize, 5] {
        for case in 0..AMPLIFY_CASES {
            let id = format!("amplify-t{t}-{case:02}");
            let stream = 100_000 + 1000 * t as u64 + case;
            cases.push(match amplify_case(seed, stream, t) {
                Ok(checks) => CaseResult::new(id, checks),
                Err(e) => CaseResult::error(id, "amplify.run", &e),
            });
        }
    }
    let g = guards(&[
        ("majority_k", "3,5".into()),
        ("majority_sets", MAJORITY_SETS.to_string()),
        ("majority_domain", "3x3".into()),
        ("max_guesses", "3".into()),
        ("amplify_t", "3,5".into()),
        ("amplify_cases", AMPLIFY_CASES.to_string()),
        ("amplify_domain", "4x4".into()),
    ]);
    (g, cases, Vec::new())
}

fn pp_case(seed: u64, case: u64) -> Result<Vec<Check>> {
    let mut rng = case_rng(seed, case);
    let d = Domain::new(4, 4);
    let g = random_guess(&mut rng, d, 6, 2);
    let profile = g.count_profile(MATERIALIZE_LIMIT)?;
    let l = BigInt::from(profile.guesses.clone());
    let accepts = |t: &BigInt| -> Vec<u8> { profile.acc.iter().map(|a| u8::from(a > t)).collect() };
    let bits = |h: &GuessProtocol| -> Vec<u8> { h.accepted().entries().iter().map(|&b| u8::from(b)).collect() };

    let (acc, threshold) = pp_to_threshold(&g);
    let mut checks = vec![
        grid_check("pp.acc", d, &acc, &profile.acc),
        Check::new("pp.threshold", threshold == &l / 2, format!("threshold {threshold}, l = {l}")),
    ];
    let back = threshold_to_pp(&g, &threshold)?;
    let pp_mode: Vec<u8> = profile.gap.iter().map(|v| u8::from(v > &BigInt::from(0))).collect();
    checks.push(grid_check("pp.roundtrip", d, &bits(&back), &pp_mode));

    let t = BigInt::from(rng.gen_range(0..=profile.guesses.to_u64_digits().first().copied().unwrap_or(0) + 1));
    let h = threshold_to_pp(&g, &t)?;
    let mut c = grid_check("pp.threshold_to_pp", d, &bits(&h), &accepts(&t));
    c.detail = format!("threshold {t}: {}", c.detail);
    checks.push(c);
    Ok(checks)
}

pub fn pp_equivalence(seed: u64) -> SuiteOutput {
    let cases = (0..PP_CASES)
        .map(|case| {
            let id = format!("{case:03}");
            match pp_case(seed, case) {
                Ok(checks) => CaseResult::new(id, checks),
                Err(e) => CaseResult::error(id, "pp.run", &e),
            }
        })
        .collect();
    let g = guards(&[
        ("cases", PP_CASES.to_string()),
        ("domain", "4x4".into()),
        ("max_guesses", "6".into()),
    ]);
    (g, cases, Vec::new())
}
