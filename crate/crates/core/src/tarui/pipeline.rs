//! Randomized rectangle polynomials to randomized PP protocols, with every
//! step verified at every input.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use super::polynomial::{counting_to_guess, shift_nonnegative, RectangleTermPolynomial};
use crate::error::{Error, Result};
use crate::matrix::{parse_rational, BooleanMatrix};
use crate::measures::disc::MAX_DISC_LP_SIDE;
use crate::measures::{klauck_consistency, KlauckCheck};
use crate::protocols::{ceil_log2, threshold_to_pp, Domain, GuessProtocol};
use crate::randomized::RandomizedPPProtocol;
use crate::report::Check;

/// A distribution over rectangle polynomials; a member decides `(x, y)` in
/// the language iff its value is positive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RandomizedRectanglePolynomial {
    domain: Domain,
    support: Vec<(RectangleTermPolynomial, BigRational)>,
}

impl RandomizedRectanglePolynomial {
    pub fn new(domain: Domain, support: Vec<(RectangleTermPolynomial, BigRational)>) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::InvalidArgument("randomized polynomial needs a nonempty support".into()));
        }
        if let Some((p, _)) = support.iter().find(|(p, _)| p.domain() != domain) {
            return Err(Error::DomainMismatch(format!("member over {} in a family over {domain}", p.domain())));
        }
        if let Some((_, q)) = support.iter().find(|(_, q)| q.is_negative()) {
            return Err(Error::InvalidArgument(format!("negative probability {q}")));
        }
        let total: BigRational = support.iter().map(|(_, q)| q).sum();
        if !total.is_one() {
            return Err(Error::InvalidArgument(format!("probabilities sum to {total}, not 1")));
        }
        Ok(RandomizedRectanglePolynomial { domain, support })
    }

    pub fn deterministic(phi: RectangleTermPolynomial) -> Self {
        RandomizedRectanglePolynomial {
            domain: phi.domain(),
            support: vec![(phi, BigRational::one())],
        }
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn support(&self) -> &[(RectangleTermPolynomial, BigRational)] {
        &self.support
    }

    /// Per-member thresholds: the sum of `|c|` over negative coefficients.
    pub fn thresholds(&self) -> Vec<BigInt> {
        self.support
            .iter()
            .map(|(p, _)| p.terms().iter().filter(|t| t.coefficient.is_negative()).map(|t| -t.coefficient.clone()).sum())
            .collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "rows": self.domain.rows,
            "cols": self.domain.cols,
            "support": self.support.iter().map(|(p, q)| json!({
                "probability": q.to_string(),
                "terms": p.to_json(),
            })).collect::<Vec<_>>(),
        })
    }

    /// Parses `{"rows", "cols", "support": [{"probability", "terms"}]}`;
    /// `rows` and `cols` may be left out when `domain` is given.
    pub fn from_json(v: &Value, domain: Option<Domain>) -> Result<Self> {
        let bad = |m: String| Error::InvalidArgument(m);
        let dim = |key: &str| v.get(key).and_then(Value::as_u64).map(|d| d as usize);
        let domain = match (dim("rows"), dim("cols"), domain) {
            (Some(r), Some(c), Some(d)) if (r, c) != (d.rows, d.cols) => {
                return Err(Error::DomainMismatch(format!("input declares {r}x{c} but the matrix is {d}")))
            }
            (Some(r), Some(c), _) => Domain::new(r, c),
            (_, _, Some(d)) => d,
            _ => return Err(bad("missing rows/cols".into())),
        };
        let support = v
            .get("support")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing support array".into()))?
            .iter()
            .enumerate()
            .map(|(i, e)| {
                let q = e
                    .get("probability")
                    .and_then(Value::as_str)
                    .and_then(parse_rational)
                    .ok_or_else(|| bad(format!("member {i}: probability must be a string like \"1/3\"")))?;
                let terms = e.get("terms").ok_or_else(|| bad(format!("member {i}: missing terms")))?;
                Ok((RectangleTermPolynomial::from_json(domain, terms)?, q))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(domain, support)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MemberReport {
    pub index: usize,
    pub probability: String,
    pub terms: usize,
    pub coefficient_abs_sum: String,
    pub threshold: String,
    pub counting_guesses: String,
    pub counting_pp_cost: u64,
    pub guesses: String,
    pub pp_cost: u64,
    pub pp_cost_bound: u64,
    pub klauck: Option<KlauckCheck>,
    pub checks: Vec<Check>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PipelineReport {
    pub rows: usize,
    pub cols: usize,
    pub members: Vec<MemberReport>,
    /// Exact error probability per input, row-major.
    pub error_grid: Vec<String>,
    pub max_error: String,
    pub bppp_cost: u64,
    pub checks: Vec<Check>,
    #[serde(skip)]
    pub protocol: RandomizedPPProtocol,
}

impl PipelineReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed) && self.members.iter().all(|m| m.checks.iter().all(|c| c.passed))
    }

    /// Every failed check, member checks prefixed with the member index.
    pub fn failures(&self) -> Vec<Check> {
        let mut out: Vec<Check> = self
            .members
            .iter()
            .flat_map(|m| {
                m.checks
                    .iter()
                    .filter(|c| !c.passed)
                    .map(move |c| Check::new(format!("member[{}].{}", m.index, c.name), false, c.detail.clone()))
            })
            .collect();
        out.extend(self.checks.iter().filter(|c| !c.passed).cloned());
        out
    }
}

/// Upper bound on `pp_cost` of `threshold_to_pp(counting, g)`.
fn pp_cost_bound(l: &BigUint, g: &BigInt, member_cost: usize) -> u64 {
    let l = BigInt::from(l.clone());
    let twice: BigInt = g * 2;
    let padded = l.max(twice.clone());
    let total: BigInt = &padded * 2 - twice;
    ceil_log2(&total.to_biguint().expect("nonnegative")) + member_cost as u64
}

/// First input where two grids differ, for witnesses.
fn first_difference<A: PartialEq + std::fmt::Display, B: PartialEq + std::fmt::Display>(
    domain: Domain,
    a: &[A],
    b: &[B],
    same: impl Fn(&A, &B) -> bool,
) -> Option<String> {
    domain
        .inputs()
        .zip(a.iter().zip(b))
        .find(|(_, (p, q))| !same(p, q))
        .map(|((x, y), (p, q))| format!("at ({x},{y}): {p} vs {q}"))
}

pub fn pipeline(rphi: &RandomizedRectanglePolynomial, language: &BooleanMatrix) -> Result<PipelineReport> {
    let domain = rphi.domain();
    if (domain.rows, domain.cols) != language.shape() {
        return Err(Error::DomainMismatch(format!(
            "polynomials over {domain} but the language matrix is {}x{}",
            language.rows(),
            language.cols()
        )));
    }
    let mut members = Vec::new();
    let mut support = Vec::new();
    for (index, ((phi, q), g)) in rphi.support.iter().zip(rphi.thresholds()).enumerate() {
        let (psi, shift) = shift_nonnegative(phi)?;
        debug_assert_eq!(shift, g);
        let counting = counting_to_guess(&psi)?;
        let member = threshold_to_pp(&counting, &g)?;
        let phi_grid = phi.eval_grid();
        let psi_grid = psi.eval_grid();
        let acc = counting.gap_profile().acc;
        let accepted = member.accepted();
        let decided: Vec<bool> = phi_grid.iter().map(|v| v.is_positive()).collect();
        let abs_sum = phi.abs_sum();
        let counting_cost = counting.pp_cost();
        let member_cost = counting.max_member_cost();
        let bound = pp_cost_bound(counting.guess_count(), &g, member_cost);
        let mut checks = vec![
            Check::new(
                "shift",
                first_difference(domain, &psi_grid, &phi_grid, |p, v| p == &(v + &g)).is_none(),
                first_difference(domain, &psi_grid, &phi_grid, |p, v| p == &(v + &g))
                    .map_or(format!("Psi = Phi + {g} at all {} inputs", domain.size()), |w| format!("Psi vs Phi {w}")),
            ),
            Check::new(
                "counting",
                acc == psi_grid,
                first_difference(domain, &acc, &psi_grid, |a, b| a == b)
                    .map_or("acc = Psi at every input".to_string(), |w| format!("acc vs Psi {w}")),
            ),
            Check::new(
                "threshold",
                accepted.entries() == decided.as_slice(),
                first_difference(domain, accepted.entries(), &decided, |a, b| a == b)
                    .map_or("accepts iff Psi > g iff Phi > 0".to_string(), |w| format!("accepted vs [Phi > 0] {w}")),
            ),
            Check::new(
                "cost.guesses",
                BigInt::from(psi.terms().len()) <= abs_sum.clone().max(BigInt::one()),
                format!("{} unit terms, sum |c| = {abs_sum}", psi.terms().len()),
            ),
            Check::new(
                "cost.counting",
                counting_cost <= ceil_log2(&abs_sum.to_biguint().unwrap_or_default().max(BigUint::one())) + 2,
                format!("pp_cost {counting_cost}, member cost {member_cost}"),
            ),
            Check::new("cost.pp", member.pp_cost() <= bound, format!("pp_cost {} <= {bound}", member.pp_cost())),
        ];
        let klauck = if domain.rows <= MAX_DISC_LP_SIDE && domain.cols <= MAX_DISC_LP_SIDE {
            let k = klauck_consistency(&accepted, &member)?;
            checks.push(Check::new(
                "klauck",
                k.lower_bound_holds,
                format!("log2(1/disc') = {:.6} <= pp_cost {}", k.log_inv_disc_prime, k.pp_cost),
            ));
            Some(k)
        } else {
            None
        };
        members.push(MemberReport {
            index,
            probability: q.to_string(),
            terms: phi.terms().len(),
            coefficient_abs_sum: abs_sum.to_string(),
            threshold: g.to_string(),
            counting_guesses: counting.guess_count().to_string(),
            counting_pp_cost: counting_cost,
            guesses: member.guess_count().to_string(),
            pp_cost: member.pp_cost(),
            pp_cost_bound: bound,
            klauck,
            checks,
        });
        support.push((member, q.clone()));
    }
    let protocol = RandomizedPPProtocol::new(support)?;
    let error_grid = protocol.error_grid(language)?;
    let max_error = error_grid.iter().max().cloned().unwrap_or_else(BigRational::zero);
    let third = BigRational::new(BigInt::one(), BigInt::from(3));

    // The precondition, from the polynomials alone.
    let mut wrong = vec![BigRational::zero(); domain.size()];
    for (phi, q) in &rphi.support {
        for (k, v) in phi.eval_grid().iter().enumerate() {
            if v.is_positive() != language.entries()[k] {
                wrong[k] += q;
            }
        }
    }
    let violations: Vec<String> = domain
        .inputs()
        .zip(&wrong)
        .filter(|(_, w)| **w > third)
        .map(|((x, y), w)| format!("({x},{y}) correct with probability {}", BigRational::one() - w))
        .collect();
    let checks = vec![
        Check::new(
            "precondition",
            violations.is_empty(),
            if violations.is_empty() {
                "every input decided correctly with probability >= 2/3".to_string()
            } else {
                violations.join("; ")
            },
        ),
        Check::new("error", max_error <= third, format!("max error {max_error} <= 1/3")),
    ];
    Ok(PipelineReport {
        rows: domain.rows,
        cols: domain.cols,
        members,
        error_grid: error_grid.iter().map(|e| e.to_string()).collect(),
        max_error: max_error.to_string(),
        bppp_cost: protocol.bppp_cost(),
        checks,
        protocol,
    })
}

/// The member protocols of a pipeline run, in support order.
pub fn member_protocols(report: &PipelineReport) -> Vec<&GuessProtocol> {
    report.protocol.support().iter().map(|(g, _)| g).collect()
}
