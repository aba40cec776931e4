//! The `ppcc` command line.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde_json::{json, Value};

use crate::error::Error;
use crate::matrix::{parse_matrix, parse_rational, BooleanMatrix, Matrix};
use crate::measures::checks::LS_TOLERANCE;
use crate::measures::{bp_measure, disc, disc_prime, mc, measure_by_name};
use crate::poly::compile::{lemma1_bound, lemma2_bound, majority_bound};
use crate::poly::{lemma1_compile, lemma2_compile, majority_compile, parse_polynomial, parse_rational_function};
use crate::protocols::serialize::{guess_to_json, parse_guess};
use crate::protocols::GuessProtocol;
use crate::randomized::{
    amplify, chernoff_bound, newman_sparsify, rational_to_f64, within_chernoff_tail, RandomizedPPProtocol,
    DEFAULT_NEWMAN_RETRIES,
};
use crate::suites::{run_suite, SUITE_NAMES};
use crate::tarui::{pipeline, RandomizedRectanglePolynomial};

#[derive(Parser, Debug)]
#[command(name = "ppcc", version, about = "Guess protocols, polynomial compilers and matrix measures")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Which {
    Disc,
    DiscPrime,
    Mc,
    Bp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Discrepancy, margin complexity or the BP operator of a matrix.
    Measure {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long, value_enum)]
        which: Which,
        /// Error budget for `bp`.
        #[arg(long, default_value = "1/3")]
        eps: String,
        /// Measure for `bp`: entries, log-disc-prime, mc-prime or pp-cost.
        #[arg(long, default_value = "entries")]
        lambda: String,
        /// Guess protocol files forming the family for `--lambda pp-cost`.
        #[arg(long, num_args = 1..)]
        family: Vec<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        out: Format,
    },
    /// Compile guess protocols through a polynomial, a rational function or majority.
    Compile {
        /// Guess protocol files, one per variable.
        #[arg(long, num_args = 1.., required = true)]
        protocols: Vec<PathBuf>,
        #[arg(long, conflicts_with_all = ["rational", "majority"])]
        poly: Option<String>,
        #[arg(long, conflicts_with = "majority")]
        rational: Option<String>,
        #[arg(long)]
        majority: bool,
        /// Write the compiled protocol here.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Majority of `t` independent runs of a randomized PP protocol, and
    /// optionally a Newman sample of the result.
    Amplify {
        /// Randomized protocol file.
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long, default_value_t = 3)]
        t: usize,
        /// Advantage over 1/2 for the Chernoff check; defaults to 1/2 minus the measured error.
        #[arg(long)]
        eps: Option<String>,
        /// Sample this many members for Newman sparsification.
        #[arg(long)]
        trials: Option<usize>,
        /// Allowed error increase of the sample.
        #[arg(long, default_value = "1/12")]
        delta: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Rectangle polynomials to a randomized PP protocol, with verification.
    Pipeline {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        matrix: PathBuf,
        /// Report path; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a seeded property suite.
    Verify {
        #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(SUITE_NAMES))]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Report path; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Exit status 1: an invariant failed. Exit status 2: the command could not run.
#[derive(Debug)]
pub enum Failure {
    Assertion(String),
    Usage(String),
}

impl Failure {
    pub fn code(&self) -> i32 {
        match self {
            Failure::Assertion(_) => 1,
            Failure::Usage(_) => 2,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Assertion(m) | Failure::Usage(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Violation { .. } | Error::NotConverged(_) => Failure::Assertion(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

/// A command's output: the report text and, when an invariant failed, its description.
pub struct Outcome {
    pub report: String,
    pub failure: Option<String>,
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => Failure::Usage(format!("file not found: {}", path.display())),
        _ => Failure::Usage(format!("cannot read {}: {e}", path.display())),
    })
}

fn read_matrix(path: &Path) -> CliResult<Matrix> {
    parse_matrix(&read(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn read_json(path: &Path) -> CliResult<Value> {
    serde_json::from_str(&read(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn read_guess(path: &Path) -> CliResult<GuessProtocol> {
    parse_guess(&read(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn rational(s: &str, what: &str) -> CliResult<BigRational> {
    parse_rational(s).ok_or_else(|| Failure::Usage(format!("{what} {s:?} is not a rational such as 1/3 or 0.25")))
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialize")
}

fn csv(header: &[&str], row: &[String]) -> String {
    let quote = |s: &String| {
        if s.contains([',', '"', '\n']) {
            format!("\"{}\"", s.replace('"', "\"\""))
        } else {
            s.clone()
        }
    };
    format!("{}\n{}\n", header.join(","), row.iter().map(quote).collect::<Vec<_>>().join(","))
}

fn measure(matrix: &Path, which: Which, eps: &str, lambda: &str, family: &[PathBuf], out: Format) -> CliResult<Outcome> {
    let m = read_matrix(matrix)?;
    let (rows, cols) = m.shape();
    let mut failure = None;
    let (report, row): (Value, Vec<String>) = match which {
        Which::Disc | Which::DiscPrime => {
            let (name, d) = match which {
                Which::Disc => ("disc", disc(&m.as_sign())?),
                _ => ("disc-prime", disc_prime(&m.as_boolean())?),
            };
            let f = rational_to_f64(&d.value);
            let row = vec![name.into(), rows.to_string(), cols.to_string(), d.value.to_string(), f.to_string()];
            (
                json!({
                    "which": name, "rows": rows, "cols": cols,
                    "value": d.value.to_string(), "value_f64": f,
                    "mu": d.mu, "rectangles": d.rectangles.len(),
                }),
                row,
            )
        }
        Which::Mc => {
            let a = m.as_sign();
            let r = mc(&a)?;
            let d = rational_to_f64(&disc(&a)?.value);
            let upper = 8.0 / d;
            if r.value > upper + LS_TOLERANCE {
                failure = Some(format!("ls.upper: mc = {} exceeds 8/disc = {upper}", r.value));
            }
            let row = vec!["mc".into(), rows.to_string(), cols.to_string(), r.value.to_string(), r.value.to_string()];
            (
                json!({
                    "which": "mc", "rows": rows, "cols": cols,
                    "value": r.value, "lower_bound": 1.0 / (8.0 * d), "upper_bound": upper,
                    "min_margin": r.realization.min_margin(&a),
                    "flagged": failure.is_some(),
                }),
                row,
            )
        }
        Which::Bp => {
            let eps = rational(eps, "eps")?;
            let fam = family.iter().map(|p| read_guess(p)).collect::<CliResult<Vec<_>>>()?;
            let lam = measure_by_name(lambda, (!fam.is_empty()).then_some(fam.as_slice()))?;
            let b = bp_measure(&lam, &m.as_boolean(), &eps)?;
            let row = vec!["bp".into(), rows.to_string(), cols.to_string(), b.value.to_string(), b.value.to_string()];
            (
                json!({
                    "which": "bp", "rows": rows, "cols": cols, "lambda": lambda, "eps": eps.to_string(),
                    "value": if b.value.is_finite() { json!(b.value) } else { json!("inf") }, "mu": b.mu,
                    "f_tilde": b.f_tilde.as_ref().map(BooleanMatrix::to_string),
                    "candidates": b.candidates, "levels": b.levels, "lp_solves": b.lp_solves,
                }),
                row,
            )
        }
    };
    let report = match out {
        Format::Json => pretty(&report),
        Format::Csv => csv(&["which", "rows", "cols", "value", "value_f64"], &row),
    };
    Ok(Outcome { report, failure })
}

fn compile(
    paths: &[PathBuf],
    poly: Option<&str>,
    rational_fn: Option<&str>,
    majority: bool,
    emit: Option<&Path>,
) -> CliResult<Outcome> {
    let protocols = paths.iter().map(|p| read_guess(p)).collect::<CliResult<Vec<_>>>()?;
    let k = protocols.len();
    let gaps: Vec<Vec<BigInt>> = protocols.iter().map(|g| g.gap_grid().to_vec()).collect();
    let domain = protocols[0].domain();
    let at = |cell: usize| -> Vec<BigInt> { gaps.iter().map(|g| g[cell].clone()).collect() };
    let zero = BigInt::from(0);

    // (mode, compiled, bound, expected gap test per input)
    type GapTest<'a> = Box<dyn Fn(usize, &BigInt) -> crate::Result<bool> + 'a>;
    let (mode, g, bound, check): (&str, GuessProtocol, Option<_>, GapTest) =
        if majority {
            let g = majority_compile(&protocols)?;
            let bound = Some(majority_bound(&protocols)?);
            let check = Box::new(|cell: usize, gap: &BigInt| {
                let yes = at(cell).iter().filter(|v| v.is_positive()).count();
                Ok((gap > &zero) == (2 * yes > k))
            });
            ("majority", g, bound, check)
        } else if let Some(text) = rational_fn {
            let r = parse_rational_function(text, Some(k))?;
            let g = lemma2_compile(&protocols, &r)?;
            let bound = lemma2_bound(&protocols, &r)?;
            let check = Box::new(move |cell: usize, gap: &BigInt| {
                Ok(match r.sign_at(&at(cell))? {
                    Some(s) => gap.signum() == BigInt::from(s),
                    None => true,
                })
            });
            ("lemma2", g, bound, check)
        } else if let Some(text) = poly {
            let p = parse_polynomial(text, Some(k))?;
            let g = lemma1_compile(&protocols, &p)?;
            let bound = lemma1_bound(&protocols, &p)?;
            let check = Box::new(move |cell: usize, gap: &BigInt| Ok(&p.evaluate(&at(cell))? == gap));
            ("lemma1", g, bound, check)
        } else {
            return Err(Failure::Usage("one of --poly, --rational or --majority is required".into()));
        };

    let mut failure = None;
    for (cell, (x, y)) in domain.inputs().enumerate() {
        if !check(cell, &g.gap_grid()[cell])? {
            failure = Some(format!("{mode}.gap: wrong gap {} at ({x},{y})", g.gap_grid()[cell]));
            break;
        }
    }
    if let Some(b) = &bound {
        if failure.is_none() && !b.holds(&g) {
            failure = Some(format!(
                "{mode}.bound: {} guesses / cost {} exceed {} / {}",
                g.guess_count(),
                g.pp_cost(),
                b.guesses,
                b.cost
            ));
        }
    }
    if let Some(path) = emit {
        let v = guess_to_json(&g)?;
        fs::write(path, pretty(&v) + "\n").map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?;
    }
    let report = json!({
        "mode": mode,
        "rows": domain.rows,
        "cols": domain.cols,
        "guesses": g.guess_count().to_string(),
        "max_member_cost": g.max_member_cost(),
        "pp_cost": g.pp_cost(),
        "bound": bound,
        "gap_grid": g.gap_grid().iter().map(|v| v.to_string()).collect::<Vec<_>>(),
        "accepted": g.accepted().to_string(),
        "verified": failure.is_none(),
    });
    Ok(Outcome { report: pretty(&report), failure })
}

#[allow(clippy::too_many_arguments)]
fn amplify_cmd(
    input: &Path,
    matrix: &Path,
    t: usize,
    eps: Option<&str>,
    trials: Option<usize>,
    delta: &str,
    seed: u64,
) -> CliResult<Outcome> {
    let rp = RandomizedPPProtocol::from_json(&read_json(input)?)?;
    let f = read_matrix(matrix)?.as_boolean();
    let base = rp.error(&f)?;
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let eps = match eps {
        Some(s) => rational(s, "eps")?,
        None => &half - &base,
    };
    if !eps.is_positive() || eps > half {
        return Err(Failure::Usage(format!("advantage eps = {eps} must be in (0, 1/2]")));
    }
    let a = amplify(&rp, t)?;
    let err = a.protocol.error(&f)?;
    let holds = within_chernoff_tail(&err, &eps, t as u64)?;
    let mut failure = (!holds).then(|| format!("amplify.chernoff: error {err} above the tail bound for eps {eps}, t {t}"));
    let newman = match trials {
        Some(n) => {
            let delta = rational(delta, "delta")?;
            match newman_sparsify(&a.protocol, &f, &delta, n, seed, DEFAULT_NEWMAN_RETRIES) {
                Ok(r) => serde_json::to_value(&r).map_err(Error::from)?,
                Err(e @ Error::NotConverged(_)) => {
                    failure.get_or_insert(format!("newman: {e}"));
                    Value::Null
                }
                Err(e) => return Err(e.into()),
            }
        }
        None => Value::Null,
    };
    let report = json!({
        "t": t,
        "support": a.protocol.support().len(),
        "base_error": base.to_string(),
        "error": err.to_string(),
        "eps": eps.to_string(),
        "chernoff_bound": chernoff_bound(&eps, t as u64)?,
        "within_tail": holds,
        "m": a.m,
        "bound": a.bound,
        "bppp_cost": a.protocol.bppp_cost(),
        "newman": newman,
    });
    Ok(Outcome { report: pretty(&report), failure })
}

fn pipeline_cmd(input: &Path, matrix: &Path) -> CliResult<Outcome> {
    let l = read_matrix(matrix)?.as_boolean();
    let domain = crate::protocols::Domain::new(l.rows(), l.cols());
    let rphi = RandomizedRectanglePolynomial::from_json(&read_json(input)?, Some(domain))?;
    let rep = pipeline(&rphi, &l)?;
    let failure = rep
        .failures()
        .first()
        .map(|c| format!("{}: {}", c.name, c.detail));
    Ok(Outcome {
        report: serde_json::to_string_pretty(&rep).expect("report serializes"),
        failure,
    })
}

fn verify(suite: &str, seed: u64) -> CliResult<Outcome> {
    let rep = run_suite(suite, seed)?;
    let failure = rep
        .first_failure()
        .map(|(case, c)| format!("case {case}: {}: {}", c.name, c.detail));
    Ok(Outcome {
        report: rep.to_json(),
        failure,
    })
}

fn write_report(text: &str, out: Option<&Path>) -> CliResult<()> {
    let text = if text.ends_with('\n') { text.to_string() } else { format!("{text}\n") };
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn run(cli: Cli) -> CliResult<()> {
    let (outcome, out) = match cli.command {
        Command::Measure { matrix, which, eps, lambda, family, out } => {
            (measure(&matrix, which, &eps, &lambda, &family, out)?, None)
        }
        Command::Compile { protocols, poly, rational, majority, emit } => (
            compile(&protocols, poly.as_deref(), rational.as_deref(), majority, emit.as_deref())?,
            None,
        ),
        Command::Amplify { input, matrix, t, eps, trials, delta, seed } => {
            (amplify_cmd(&input, &matrix, t, eps.as_deref(), trials, &delta, seed)?, None)
        }
        Command::Pipeline { input, matrix, out } => (pipeline_cmd(&input, &matrix)?, out),
        Command::Verify { suite, seed, out } => (verify(&suite, seed)?, out),
    };
    write_report(&outcome.report, out.as_deref())?;
    match outcome.failure {
        Some(f) => Err(Failure::Assertion(f)),
        None => Ok(()),
    }
}

/// Parses the process arguments, runs, and returns the exit status.
pub fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(f) => {
            eprintln!("ppcc: {}", f.message());
            f.code()
        }
    }
}
