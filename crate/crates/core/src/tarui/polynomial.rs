//! Integer combinations of rectangle indicators `f(x) g(y)` and their
//! nonnegative counting form.

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::protocols::{DeterministicProtocol, Domain, GuessProtocol, ProtocolNode, Speaker};

/// Largest number of unit terms in a counting form.
pub const MAX_UNIT_TERMS: u64 = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RectangleTerm {
    pub coefficient: BigInt,
    /// Truth table over Alice's inputs.
    pub f: Vec<bool>,
    /// Truth table over Bob's inputs.
    pub g: Vec<bool>,
}

impl RectangleTerm {
    pub fn new(coefficient: impl Into<BigInt>, f: Vec<bool>, g: Vec<bool>) -> Self {
        RectangleTerm {
            coefficient: coefficient.into(),
            f,
            g,
        }
    }

    pub fn fires(&self, x: usize, y: usize) -> bool {
        self.f[x] && self.g[y]
    }
}

/// `Phi(x, y) = sum_S c_S f_S(x) g_S(y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RectangleTermPolynomial {
    domain: Domain,
    terms: Vec<RectangleTerm>,
}

fn check_tables(domain: Domain, f: &[bool], g: &[bool]) -> Result<()> {
    if f.len() != domain.rows || g.len() != domain.cols {
        return Err(Error::DomainMismatch(format!(
            "term tables of length {} and {} over {domain}",
            f.len(),
            g.len()
        )));
    }
    Ok(())
}

impl RectangleTermPolynomial {
    pub fn new(domain: Domain, terms: Vec<RectangleTerm>) -> Result<Self> {
        for t in &terms {
            check_tables(domain, &t.f, &t.g)?;
            if t.coefficient.is_zero() {
                return Err(Error::InvalidArgument("rectangle terms must have nonzero coefficients".into()));
            }
        }
        Ok(RectangleTermPolynomial { domain, terms })
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn terms(&self) -> &[RectangleTerm] {
        &self.terms
    }

    pub fn eval(&self, x: usize, y: usize) -> Result<BigInt> {
        self.domain.check(x, y)?;
        Ok(self.terms.iter().filter(|t| t.fires(x, y)).map(|t| t.coefficient.clone()).sum())
    }

    /// Values at every input, row-major.
    pub fn eval_grid(&self) -> Vec<BigInt> {
        self.domain.inputs().map(|(x, y)| self.eval(x, y).expect("in domain")).collect()
    }

    /// `sum |c_S|`.
    pub fn abs_sum(&self) -> BigInt {
        self.terms.iter().map(|t| t.coefficient.abs()).sum()
    }

    /// The same terms with every `f` restricted to the rows in `keep`.
    pub fn restrict_rows(&self, keep: &[bool]) -> Result<Self> {
        if keep.len() != self.domain.rows {
            return Err(Error::DomainMismatch(format!("row mask of length {} over {}", keep.len(), self.domain)));
        }
        let terms = self
            .terms
            .iter()
            .filter_map(|t| {
                let f: Vec<bool> = t.f.iter().zip(keep).map(|(a, b)| *a && *b).collect();
                f.iter().any(|&b| b).then(|| RectangleTerm::new(t.coefficient.clone(), f, t.g.clone()))
            })
            .collect();
        Self::new(self.domain, terms)
    }

    pub fn neg(&self) -> Self {
        RectangleTermPolynomial {
            domain: self.domain,
            terms: self
                .terms
                .iter()
                .map(|t| RectangleTerm::new(-t.coefficient.clone(), t.f.clone(), t.g.clone()))
                .collect(),
        }
    }

    /// Concatenated term lists.
    pub fn concat(&self, other: &Self) -> Result<Self> {
        if self.domain != other.domain {
            return Err(Error::DomainMismatch(format!("{} vs {}", self.domain, other.domain)));
        }
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Ok(RectangleTermPolynomial { domain: self.domain, terms })
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|t| {
                    json!({
                        "coefficient": t.coefficient.to_string(),
                        "f": bits_to_string(&t.f),
                        "g": bits_to_string(&t.g),
                    })
                })
                .collect(),
        )
    }

    /// Parses a term list `[{"coefficient", "f", "g"}, ...]`.
    pub fn from_json(domain: Domain, v: &Value) -> Result<Self> {
        let bad = |m: String| Error::InvalidArgument(m);
        let terms = v
            .as_array()
            .ok_or_else(|| bad("terms must be an array".into()))?
            .iter()
            .enumerate()
            .map(|(i, t)| {
                let coefficient = match t.get("coefficient") {
                    Some(Value::String(s)) => s.trim().parse::<BigInt>().ok(),
                    Some(Value::Number(n)) => n.as_i64().map(BigInt::from),
                    _ => None,
                }
                .ok_or_else(|| bad(format!("term {i}: coefficient must be an integer or integer string")))?;
                let table = |key: &str| {
                    t.get(key)
                        .and_then(Value::as_str)
                        .ok_or_else(|| bad(format!("term {i}: missing bit string {key:?}")))
                        .and_then(|s| parse_bits(s).map_err(|e| bad(format!("term {i}: {e}"))))
                };
                Ok(RectangleTerm::new(coefficient, table("f")?, table("g")?))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(domain, terms)
    }
}

pub fn bits_to_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

pub fn parse_bits(s: &str) -> std::result::Result<Vec<bool>, String> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(format!("unexpected character {other:?} in bit string")),
        })
        .collect()
}

/// A unit term of a counting polynomial: `f g`, or `1 - f g` when complemented.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountingTerm {
    pub f: Vec<bool>,
    pub g: Vec<bool>,
    pub complemented: bool,
}

impl CountingTerm {
    pub fn value(&self, x: usize, y: usize) -> bool {
        (self.f[x] && self.g[y]) != self.complemented
    }
}

/// A sum of unit terms, each contributing 0 or 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountingPolynomial {
    domain: Domain,
    terms: Vec<CountingTerm>,
}

impl CountingPolynomial {
    pub fn new(domain: Domain, terms: Vec<CountingTerm>) -> Result<Self> {
        for t in &terms {
            check_tables(domain, &t.f, &t.g)?;
        }
        Ok(CountingPolynomial { domain, terms })
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn terms(&self) -> &[CountingTerm] {
        &self.terms
    }

    pub fn eval(&self, x: usize, y: usize) -> Result<BigInt> {
        self.domain.check(x, y)?;
        Ok(BigInt::from(self.terms.iter().filter(|t| t.value(x, y)).count()))
    }

    pub fn eval_grid(&self) -> Vec<BigInt> {
        self.domain.inputs().map(|(x, y)| self.eval(x, y).expect("in domain")).collect()
    }
}

/// `Psi = Phi + g` with `g` the total of the negative coefficients' absolute
/// values: `c > 0` becomes `c` copies of `f g`, `c < 0` becomes `|c|` copies
/// of `1 - f g`.
pub fn shift_nonnegative(phi: &RectangleTermPolynomial) -> Result<(CountingPolynomial, BigInt)> {
    let mut g = BigInt::zero();
    let mut terms = Vec::new();
    for t in phi.terms() {
        let copies = t
            .coefficient
            .abs()
            .to_u64()
            .filter(|&c| c <= MAX_UNIT_TERMS)
            .ok_or_else(|| Error::Guard(format!("coefficient {} exceeds {MAX_UNIT_TERMS} unit terms", t.coefficient)))?;
        let complemented = t.coefficient.is_negative();
        if complemented {
            g += t.coefficient.abs();
        }
        if terms.len() as u64 + copies > MAX_UNIT_TERMS {
            return Err(Error::Guard(format!("counting form exceeds {MAX_UNIT_TERMS} unit terms")));
        }
        for _ in 0..copies {
            terms.push(CountingTerm {
                f: t.f.clone(),
                g: t.g.clone(),
                complemented,
            });
        }
    }
    Ok((CountingPolynomial::new(phi.domain(), terms)?, g))
}

/// The protocol computing `f(x) g(y)`: Alice sends `f(x)`, then Bob sends
/// `g(y)`; a constant table needs no message.
pub fn rectangle_protocol(domain: Domain, f: &[bool], g: &[bool]) -> Result<DeterministicProtocol> {
    check_tables(domain, f, g)?;
    let constant = |t: &[bool]| {
        if t.iter().all(|&b| b) {
            Some(true)
        } else if t.iter().all(|&b| !b) {
            Some(false)
        } else {
            None
        }
    };
    let bob = match constant(g) {
        Some(b) => ProtocolNode::leaf(b),
        None => ProtocolNode::send(Speaker::Bob, g.to_vec(), ProtocolNode::leaf(false), ProtocolNode::leaf(true)),
    };
    let root = match (constant(f), constant(g)) {
        (Some(false), _) | (_, Some(false)) => ProtocolNode::leaf(false),
        (Some(true), _) => bob,
        (None, _) => ProtocolNode::send(Speaker::Alice, f.to_vec(), ProtocolNode::leaf(false), bob),
    };
    DeterministicProtocol::new(domain, root)
}

/// One member per unit term, complemented terms through the complement
/// protocol, so that `acc` equals `Psi` at every input. An empty counting
/// form becomes a single rejecting guess.
pub fn counting_to_guess(psi: &CountingPolynomial) -> Result<GuessProtocol> {
    let domain = psi.domain();
    if psi.terms().is_empty() {
        return GuessProtocol::constants(domain, &[false]);
    }
    // Repeated terms share one member protocol.
    let mut members = Vec::with_capacity(psi.terms().len());
    let mut last: Option<(&CountingTerm, DeterministicProtocol)> = None;
    for t in psi.terms() {
        let p = match &last {
            Some((prev, p)) if *prev == t => p.clone(),
            _ => {
                let p = rectangle_protocol(domain, &t.f, &t.g)?;
                if t.complemented {
                    p.complement()
                } else {
                    p
                }
            }
        };
        members.push(p.clone());
        last = Some((t, p));
    }
    GuessProtocol::new(members)
}

/// Guesses in the counting protocol of `psi`, without building it.
pub fn counting_guess_count(psi: &CountingPolynomial) -> BigUint {
    BigUint::from(psi.terms().len().max(1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use proptest::prelude::*;

    fn bits(s: &str) -> Vec<bool> {
        parse_bits(s).unwrap()
    }

    fn d44() -> Domain {
        Domain::new(4, 4)
    }

    fn s1_s2() -> RectangleTermPolynomial {
        // S1 = rows {0,1} x cols {0,1}, S2 = rows {2,3} x cols {2,3}
        RectangleTermPolynomial::new(
            d44(),
            vec![
                RectangleTerm::new(2, bits("1100"), bits("1100")),
                RectangleTerm::new(-3, bits("0011"), bits("0011")),
            ],
        )
        .unwrap()
    }

    #[test]
    fn eval_examples() {
        let empty = RectangleTermPolynomial::new(d44(), vec![]).unwrap();
        assert!(empty.eval_grid().iter().all(|v| v.is_zero()));
        let two = RectangleTermPolynomial::new(d44(), vec![RectangleTerm::new(2, bits("1111"), bits("1111"))]).unwrap();
        assert!(two.eval_grid().iter().all(|v| v == &BigInt::from(2)));
        assert_eq!(s1_s2().eval(0, 1).unwrap(), BigInt::from(2));
        assert_eq!(s1_s2().eval(3, 2).unwrap(), BigInt::from(-3));
        assert!(s1_s2().eval(4, 0).is_err());
    }

    #[test]
    fn validation() {
        assert!(RectangleTermPolynomial::new(d44(), vec![RectangleTerm::new(0, bits("1111"), bits("1111"))]).is_err());
        assert!(RectangleTermPolynomial::new(d44(), vec![RectangleTerm::new(1, bits("111"), bits("1111"))]).is_err());
    }

    #[test]
    fn shift_examples() {
        let pos = RectangleTermPolynomial::new(d44(), vec![RectangleTerm::new(3, bits("1010"), bits("0110"))]).unwrap();
        let (psi, g) = shift_nonnegative(&pos).unwrap();
        assert_eq!(g, BigInt::zero());
        assert_eq!(psi.terms().len(), 3);
        let (psi, g) = shift_nonnegative(&s1_s2()).unwrap();
        assert_eq!(g, BigInt::from(3));
        assert_eq!(psi.eval(0, 0).unwrap(), BigInt::from(5));
        assert_eq!(psi.eval(2, 2).unwrap(), BigInt::zero());
    }

    #[test]
    fn counting_examples() {
        let one = CountingPolynomial::new(
            d44(),
            vec![CountingTerm { f: bits("1111"), g: bits("1111"), complemented: false }],
        )
        .unwrap();
        let p = counting_to_guess(&one).unwrap();
        assert!(p.count_profile(16).unwrap().acc.iter().all(|a| a.is_one()));
        assert!(p.max_member_cost() <= 1);
        let comp = CountingPolynomial::new(
            d44(),
            vec![CountingTerm { f: bits("0000"), g: bits("1010"), complemented: true }],
        )
        .unwrap();
        let p = counting_to_guess(&comp).unwrap();
        assert!(p.count_profile(16).unwrap().acc.iter().all(|a| a.is_one()));
        let empty = CountingPolynomial::new(d44(), vec![]).unwrap();
        let p = counting_to_guess(&empty).unwrap();
        assert!(p.count_profile(16).unwrap().acc.iter().all(|a| a.is_zero()));
    }

    #[test]
    fn json_round_trip() {
        let phi = s1_s2();
        let back = RectangleTermPolynomial::from_json(d44(), &phi.to_json()).unwrap();
        assert_eq!(back, phi);
        let v: Value = serde_json::from_str(r#"[{"coefficient": -2, "f": "1000", "g": "0001"}]"#).unwrap();
        assert_eq!(RectangleTermPolynomial::from_json(d44(), &v).unwrap().eval(0, 3).unwrap(), BigInt::from(-2));
        let bad: Value = serde_json::from_str(r#"[{"coefficient": 1, "f": "10x0", "g": "0001"}]"#).unwrap();
        assert!(RectangleTermPolynomial::from_json(d44(), &bad).is_err());
    }

    fn random_phi() -> impl Strategy<Value = RectangleTermPolynomial> {
        proptest::collection::vec(((-4i64..=4).prop_filter("nonzero", |c| *c != 0), 0u8..16, 0u8..16), 0..6).prop_map(|ts| {
            let table = |m: u8| (0..4).map(|k| (m >> k) & 1 == 1).collect::<Vec<_>>();
            RectangleTermPolynomial::new(
                Domain::new(4, 4),
                ts.into_iter().map(|(c, f, g)| RectangleTerm::new(c, table(f), table(g))).collect(),
            )
            .unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn shift_adds_g_everywhere(phi in random_phi()) {
            let (psi, g) = shift_nonnegative(&phi).unwrap();
            let neg: BigInt = phi.terms().iter().filter(|t| t.coefficient.is_negative()).map(|t| -t.coefficient.clone()).sum();
            prop_assert_eq!(&g, &neg);
            for (a, b) in psi.eval_grid().iter().zip(phi.eval_grid()) {
                prop_assert_eq!(a, &(b + &g));
            }
        }

        #[test]
        fn counting_acc_equals_psi(phi in random_phi()) {
            let (psi, _) = shift_nonnegative(&phi).unwrap();
            let p = counting_to_guess(&psi).unwrap();
            prop_assert_eq!(p.count_profile(1 << 10).unwrap().acc, psi.eval_grid());
            prop_assert!(p.max_member_cost() <= 2);
        }
    }
}
