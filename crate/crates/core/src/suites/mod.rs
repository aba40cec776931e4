//! Seeded property-verification suites. Every suite returns a report whose
//! JSON form depends only on the suite name and seed.

pub mod gen;

mod algebra;
mod measures;
mod tarui;

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::report::Check;

pub const SUITE_NAMES: [&str; 9] = [
    "gap-algebra",
    "lemma1",
    "degm",
    "majority",
    "pp-equivalence",
    "measures",
    "bp",
    "yao",
    "tarui",
];

#[derive(Clone, Debug, Serialize)]
pub struct CaseResult {
    pub id: String,
    pub passed: bool,
    pub checks: Vec<Check>,
    /// Reported values that do not enter the verdict.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<Check>,
}

impl CaseResult {
    pub fn new(id: impl Into<String>, checks: Vec<Check>) -> Self {
        CaseResult {
            id: id.into(),
            passed: checks.iter().all(|c| c.passed),
            checks,
            notes: Vec::new(),
        }
    }

    /// A case that could not run; the error is recorded as a failed check.
    pub fn error(id: impl Into<String>, check: &str, e: &Error) -> Self {
        CaseResult::new(id, vec![Check::new(check, false, e.to_string())])
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub tool: String,
    pub version: String,
    pub suite: String,
    pub seed: u64,
    pub guards: BTreeMap<String, String>,
    pub cases: Vec<CaseResult>,
    pub summary: Vec<Check>,
    pub passed: bool,
}

impl SuiteReport {
    fn new(suite: &str, seed: u64, guards: BTreeMap<String, String>, mut cases: Vec<CaseResult>, summary: Vec<Check>) -> Self {
        cases.sort_by(|a, b| a.id.cmp(&b.id));
        let failed = cases.iter().filter(|c| !c.passed).count();
        let mut all = vec![Check::new(
            "cases",
            failed == 0,
            format!("{} of {} cases passed", cases.len() - failed, cases.len()),
        )];
        all.extend(summary);
        SuiteReport {
            tool: "ppcc".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            suite: suite.into(),
            seed,
            guards,
            passed: all.iter().all(|c| c.passed),
            cases,
            summary: all,
        }
    }

    pub fn failed_cases(&self) -> impl Iterator<Item = &CaseResult> {
        self.cases.iter().filter(|c| !c.passed)
    }

    /// The first failed check, named by case and invariant.
    pub fn first_failure(&self) -> Option<(String, &Check)> {
        self.cases
            .iter()
            .flat_map(|c| c.checks.iter().map(move |k| (c.id.clone(), k)))
            .chain(self.summary.iter().map(|k| ("summary".to_string(), k)))
            .find(|(_, k)| !k.passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

pub(crate) type SuiteOutput = (BTreeMap<String, String>, Vec<CaseResult>, Vec<Check>);

pub(crate) fn guards(pairs: &[(&str, String)]) -> BTreeMap<String, String> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

pub fn run_suite(name: &str, seed: u64) -> Result<SuiteReport> {
    let (guards, cases, summary) = match name {
        "gap-algebra" => algebra::gap_algebra(seed),
        "lemma1" => algebra::lemma1(seed),
        "degm" => algebra::degm(seed),
        "majority" => algebra::majority(seed),
        "pp-equivalence" => algebra::pp_equivalence(seed),
        "measures" => measures::measures(seed),
        "bp" => measures::bp(seed),
        "yao" => measures::yao(seed),
        "tarui" => tarui::tarui(seed),
        _ => {
            return Err(Error::InvalidArgument(format!(
                "unknown suite {name:?}; expected one of {}",
                SUITE_NAMES.join(", ")
            )))
        }
    };
    Ok(SuiteReport::new(name, seed, guards, cases, summary))
}

/// First input where two row-major grids differ.
pub(crate) fn witness<A: PartialEq + std::fmt::Display>(
    domain: crate::protocols::Domain,
    got: &[A],
    want: &[A],
) -> Option<String> {
    domain
        .inputs()
        .zip(got.iter().zip(want))
        .find(|(_, (a, b))| a != b)
        .map(|((x, y), (a, b))| format!("at ({x},{y}): got {a}, expected {b}"))
}

/// A check comparing two grids, with a witness on failure.
pub(crate) fn grid_check<A: PartialEq + std::fmt::Display>(
    name: &str,
    domain: crate::protocols::Domain,
    got: &[A],
    want: &[A],
) -> Check {
    match witness(domain, got, want) {
        None if got.len() == want.len() => Check::new(name, true, format!("{} inputs", got.len())),
        None => Check::new(name, false, format!("grid sizes {} vs {}", got.len(), want.len())),
        Some(w) => Check::new(name, false, w),
    }
}
