//! Acceptance criteria 1-10. Prints one PASS/FAIL line per criterion and
//! exits nonzero when any criterion fails.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use ppcc::suites::{run_suite, SuiteReport};

const SEED: u64 = 7;

/// Check counts by name, with size prefixes ("3x3 ") and member indices folded.
fn check_counts(r: &SuiteReport) -> BTreeMap<String, (usize, usize)> {
    let mut out: BTreeMap<String, (usize, usize)> = BTreeMap::new();
    for case in &r.cases {
        for c in &case.checks {
            let mut name = c.name.as_str();
            if let Some((size, rest)) = name.split_once(' ') {
                if size.contains('x') {
                    name = rest;
                }
            }
            let name = match name.strip_prefix("member[").and_then(|s| s.split_once("].")) {
                Some((_, rest)) => format!("member.{rest}"),
                None => name.to_string(),
            };
            let e = out.entry(name).or_default();
            e.0 += 1;
            e.1 += usize::from(c.passed);
        }
    }
    out
}

struct Expect<'a> {
    cases: usize,
    /// (check name, minimum number of passing occurrences)
    checks: &'a [(&'a str, usize)],
}

fn require(r: &SuiteReport, e: &Expect) -> Result<String, String> {
    if let Some((case, c)) = r.first_failure() {
        return Err(format!("case {case}: {}: {}", c.name, c.detail));
    }
    if r.cases.len() != e.cases {
        return Err(format!("{} cases, expected {}", r.cases.len(), e.cases));
    }
    let counts = check_counts(r);
    for &(name, min) in e.checks {
        let (seen, passed) = counts.get(name).copied().unwrap_or((0, 0));
        if passed < min || passed != seen {
            return Err(format!("check {name}: {passed} of {seen} passed, expected at least {min}"));
        }
    }
    let total: usize = counts.values().map(|c| c.0).sum();
    Ok(format!("{} cases, {total} checks", r.cases.len()))
}

fn case<'a>(r: &'a SuiteReport, id: &str) -> Result<&'a ppcc::suites::CaseResult, String> {
    r.cases.iter().find(|c| c.id == id).ok_or_else(|| format!("missing case {id}"))
}

fn check_detail(r: &SuiteReport, id: &str, name: &str) -> Result<String, String> {
    let c = case(r, id)?;
    c.checks
        .iter()
        .find(|k| k.name == name)
        .map(|k| k.detail.clone())
        .ok_or_else(|| format!("case {id} has no check {name}"))
}

struct Criterion {
    number: u32,
    suite: &'static str,
    limit: Duration,
    verify: fn(&SuiteReport) -> Result<String, String>,
}

fn c1(r: &SuiteReport) -> Result<String, String> {
    require(r, &Expect { cases: 1000, checks: &[("gap.complement", 1000), ("gap.sum", 1000), ("gap.product", 1000)] })
}

fn c2(r: &SuiteReport) -> Result<String, String> {
    let zero = r.cases.iter().filter(|c| c.checks.iter().any(|k| k.name == "lemma1.bound")).count();
    let rest = 200 - zero;
    require(r, &Expect { cases: 200, checks: &[("lemma1.gap", 200), ("lemma1.guesses", rest), ("lemma1.cost", rest)] })
}

fn c3(r: &SuiteReport) -> Result<String, String> {
    let checks = [
        ("p.degree", 20),
        ("p.lc", 20),
        ("s.interval", 20),
        ("s.degree", 20),
        ("s.lc", 20),
        ("t.sign", 20),
        ("t.degree", 20),
        ("t.lc", 20),
    ];
    let mut d = require(r, &Expect { cases: 20, checks: &checks })?;
    for k in 1..=3 {
        for m in 0..=3 {
            let detail = check_detail(r, &format!("k{k}-m{m}"), "t.sign")?;
            if !detail.starts_with("all ") {
                return Err(format!("k{k}-m{m}: t.sign not on the full grid: {detail}"));
            }
        }
    }
    d.push_str(", full sign grid for k, m <= 3");
    Ok(d)
}

fn c4(r: &SuiteReport) -> Result<String, String> {
    let d = require(
        r,
        &Expect {
            cases: 120,
            checks: &[
                ("majority.pointwise", 100),
                ("majority.bound", 100),
                ("amplify.base", 20),
                ("amplify.exact", 20),
                ("amplify.chernoff", 20),
            ],
        },
    )?;
    for t in [3, 5] {
        let n = r.cases.iter().filter(|c| c.id.starts_with(&format!("amplify-t{t}-"))).count();
        if n != 10 {
            return Err(format!("{n} amplify cases at t = {t}, expected 10"));
        }
    }
    for k in [3, 5] {
        let n = r.cases.iter().filter(|c| c.id.starts_with(&format!("majority-k{k}-"))).count();
        if n != 50 {
            return Err(format!("{n} member sets at k = {k}, expected 50"));
        }
    }
    // complement of 1 - (1/2)(1 - 4/36)^(3/2)
    let tail = 0.5 * (8.0f64 / 9.0).powf(1.5);
    let t3 = ppcc::randomized::chernoff_bound(&num_rational::BigRational::new(1.into(), 6.into()), 3)
        .map_err(|e| e.to_string())?;
    if (1.0 - t3 - tail).abs() > 1e-9 || tail > 0.4191 {
        return Err(format!("chernoff bound at t = 3 is {t3}, expected {}", 1.0 - tail));
    }
    Ok(format!("{d}, error bound at t=3 {:.4}", 1.0 - t3))
}

fn c5(r: &SuiteReport) -> Result<String, String> {
    require(r, &Expect { cases: 500, checks: &[("pp.roundtrip", 500), ("pp.threshold_to_pp", 500)] })
}

fn c6(r: &SuiteReport) -> Result<String, String> {
    let d = require(
        r,
        &Expect {
            cases: 154,
            checks: &[
                ("disc.value", 2),
                ("disc.rectangles", 2),
                ("disc.grid", 2),
                ("mc.sqrt2", 1),
                ("mc.grid", 1),
                ("ls.lower", 100),
                ("ls.upper", 100),
                ("klauck.random", 50),
                ("klauck.tree", 50),
                ("klauck.threshold", 50),
            ],
        },
    )?;
    let anti = check_detail(r, "disc-anti-hadamard", "disc.value")?;
    if !anti.starts_with("disc = 1/4,") {
        return Err(format!("disc of the anti-identity: {anti}"));
    }
    Ok(format!("{d}, anti-identity {anti}"))
}

fn c7(r: &SuiteReport) -> Result<String, String> {
    let mut grid = vec![("bp.eps0", 16 + 512), ("bp.monotone", 16 + 512), ("bp.worked.value", 1)];
    let names = ["bp.grid[0/1]", "bp.grid[1/8]", "bp.grid[1/4]", "bp.grid[1/2]", "bp.grid[1/1]"];
    grid.extend(names.iter().map(|n| (*n, 16)));
    let d = require(r, &Expect { cases: 529, checks: &grid })?;
    let worked = check_detail(r, "worked-example", "bp.worked.value")?;
    Ok(format!("{d}, worked example {worked}"))
}

fn c8(r: &SuiteReport) -> Result<String, String> {
    if r.guards.get("tolerance").map(String::as_str) != Some("0.000000001") {
        return Err(format!("tolerance guard {:?}", r.guards.get("tolerance")));
    }
    require(r, &Expect { cases: 50, checks: &[("yao.agree", 50)] })
}

fn c9(r: &SuiteReport) -> Result<String, String> {
    let members: usize = check_counts(r).get("member.klauck").map_or(0, |c| c.0);
    let d = require(r, &Expect { cases: 23, checks: &[("member.klauck", members.max(1)), ("error", 23)] })?;
    for (id, want) in [("fixture-or2", "max error 0,"), ("fixture-boundary", "max error 1/3,")] {
        let detail = check_detail(r, id, "fixture.error")?;
        if !detail.starts_with(want) {
            return Err(format!("{id}: {detail}"));
        }
    }
    let lang = check_detail(r, "fixture-or2", "fixture.language")?;
    Ok(format!("{d}, or2 {lang}"))
}

const CRITERIA: [Criterion; 9] = [
    Criterion { number: 1, suite: "gap-algebra", limit: Duration::from_secs(10), verify: c1 },
    Criterion { number: 2, suite: "lemma1", limit: Duration::from_secs(60), verify: c2 },
    Criterion { number: 3, suite: "degm", limit: Duration::from_secs(120), verify: c3 },
    Criterion { number: 4, suite: "majority", limit: Duration::from_secs(120), verify: c4 },
    Criterion { number: 5, suite: "pp-equivalence", limit: Duration::from_secs(10), verify: c5 },
    Criterion { number: 6, suite: "measures", limit: Duration::from_secs(300), verify: c6 },
    Criterion { number: 7, suite: "bp", limit: Duration::from_secs(300), verify: c7 },
    Criterion { number: 8, suite: "yao", limit: Duration::from_secs(60), verify: c8 },
    Criterion { number: 9, suite: "tarui", limit: Duration::from_secs(30), verify: c9 },
];

fn line(pass: bool, number: u32, text: &str) {
    println!("{} criterion {number:>2}: {text}", if pass { "PASS" } else { "FAIL" });
}

fn main() -> ExitCode {
    let mut failed = 0;
    let mut reports = Vec::new();
    for c in &CRITERIA {
        let start = Instant::now();
        let outcome = run_suite(c.suite, SEED).map_err(|e| e.to_string());
        let elapsed = start.elapsed();
        let verdict = outcome.as_ref().map_err(Clone::clone).and_then(|r| (c.verify)(r)).and_then(|d| {
            if elapsed < c.limit {
                Ok(d)
            } else {
                Err(format!("runtime {:.1}s over the {}s limit", elapsed.as_secs_f64(), c.limit.as_secs()))
            }
        });
        let timing = format!("{:.2}s < {}s", elapsed.as_secs_f64(), c.limit.as_secs());
        match verdict {
            Ok(d) => line(true, c.number, &format!("{} seed {SEED}: {d} ({timing})", c.suite)),
            Err(e) => {
                failed += 1;
                line(false, c.number, &format!("{} seed {SEED}: {e}", c.suite));
            }
        }
        if let Ok(r) = outcome {
            reports.push((c.suite, r.to_json()));
        }
    }

    let start = Instant::now();
    let mismatched: Vec<&str> = reports
        .iter()
        .filter(|(suite, first)| run_suite(suite, SEED).map(|r| r.to_json()).ok().as_ref() != Some(first))
        .map(|(suite, _)| *suite)
        .collect();
    let elapsed = start.elapsed().as_secs_f64();
    if mismatched.is_empty() && reports.len() == CRITERIA.len() {
        line(true, 10, &format!("all {} suites rerun byte-identical at seed {SEED} ({elapsed:.2}s)", reports.len()));
    } else {
        failed += 1;
        line(false, 10, &format!("reports differ on rerun: {mismatched:?}"));
    }

    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
