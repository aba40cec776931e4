//! Guess protocols: finite sequences of deterministic protocols evaluated by
//! counting accepting members.
//!
//! A [`GuessProtocol`] is stored as an expression over member lists
//! (complement, concatenation, pairwise product, replication) so that
//! compiled protocols with astronomically many guesses stay representable.
//! The member sequence is always well defined: [`GuessProtocol::member`]
//! materializes any single member and [`GuessProtocol::members`] the whole
//! list when it is small enough. Gap values are computed from the
//! expression; [`GuessProtocol::count_profile`] recomputes them by counting
//! materialized members.

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::deterministic::{DeterministicProtocol, Domain};
use crate::error::{Error, Result};
use crate::matrix::BooleanMatrix;

/// Member lists up to this length are kept explicit by `sum`, `replicate`
/// and `normalize_nonzero`.
const EAGER_MEMBERS: u64 = 1 << 12;

/// Default cap on how many members [`GuessProtocol::members`] will materialize.
pub const MATERIALIZE_LIMIT: u64 = 1 << 20;

#[derive(Debug)]
enum Kind {
    Members(Vec<DeterministicProtocol>),
    Complement(Arc<Node>),
    Sum(Vec<Arc<Node>>),
    Product(Arc<Node>, Arc<Node>),
    Repeat(BigUint, Arc<Node>),
}

#[derive(Debug)]
struct Node {
    kind: Kind,
    count: BigUint,
    max_cost: usize,
    gap: OnceLock<Vec<BigInt>>,
}

impl Node {
    fn new(kind: Kind) -> Arc<Node> {
        let (count, max_cost) = match &kind {
            Kind::Members(m) => (BigUint::from(m.len()), m.iter().map(|p| p.cost()).max().unwrap_or(0)),
            Kind::Complement(n) => (n.count.clone(), n.max_cost),
            Kind::Sum(ns) => (
                ns.iter().map(|n| &n.count).sum(),
                ns.iter().map(|n| n.max_cost).max().unwrap_or(0),
            ),
            Kind::Product(a, b) => (&a.count * &b.count, a.max_cost + b.max_cost),
            Kind::Repeat(k, n) => (k * &n.count, n.max_cost),
        };
        Arc::new(Node {
            kind,
            count,
            max_cost,
            gap: OnceLock::new(),
        })
    }

    fn gap(&self, domain: Domain) -> &[BigInt] {
        self.gap.get_or_init(|| match &self.kind {
            Kind::Members(ms) => domain
                .inputs()
                .map(|(x, y)| {
                    let acc = ms.iter().filter(|p| p.eval_unchecked(x, y)).count() as i64;
                    BigInt::from(2 * acc - ms.len() as i64)
                })
                .collect(),
            Kind::Complement(n) => n.gap(domain).iter().map(|g| -g).collect(),
            Kind::Sum(ns) => {
                let mut out = vec![BigInt::zero(); domain.size()];
                for n in ns {
                    for (o, g) in out.iter_mut().zip(n.gap(domain)) {
                        *o += g;
                    }
                }
                out
            }
            Kind::Product(a, b) => a.gap(domain).iter().zip(b.gap(domain)).map(|(x, y)| x * y).collect(),
            Kind::Repeat(k, n) => {
                let k = BigInt::from(k.clone());
                n.gap(domain).iter().map(|g| g * &k).collect()
            }
        })
    }

    fn member(&self, index: &BigUint) -> DeterministicProtocol {
        match &self.kind {
            Kind::Members(ms) => ms[index.to_usize().expect("index below member count")].clone(),
            Kind::Complement(n) => n.member(index).complement(),
            Kind::Sum(ns) => {
                let mut i = index.clone();
                for n in ns {
                    if i < n.count {
                        return n.member(&i);
                    }
                    i -= &n.count;
                }
                unreachable!("index checked against count")
            }
            Kind::Product(a, b) => {
                let (hi, lo) = index.div_rem(&b.count);
                a.member(&hi).product(&b.member(&lo)).expect("shared domain")
            }
            Kind::Repeat(_, n) => n.member(&(index % &n.count)),
        }
    }

    fn for_each(&self, f: &mut dyn FnMut(DeterministicProtocol)) {
        match &self.kind {
            Kind::Members(ms) => ms.iter().cloned().for_each(f),
            Kind::Complement(n) => n.for_each(&mut |p| f(p.complement())),
            Kind::Sum(ns) => ns.iter().for_each(|n| n.for_each(f)),
            Kind::Product(a, b) => {
                let mut right = Vec::new();
                b.for_each(&mut |p| right.push(p));
                a.for_each(&mut |p| {
                    for q in &right {
                        f(p.product(q).expect("shared domain"));
                    }
                });
            }
            Kind::Repeat(k, n) => {
                let mut once = Vec::new();
                n.for_each(&mut |p| once.push(p));
                let mut r = BigUint::zero();
                while &r < k {
                    once.iter().cloned().for_each(&mut *f);
                    r += 1u32;
                }
            }
        }
    }

    fn explicit(&self) -> Option<&[DeterministicProtocol]> {
        match &self.kind {
            Kind::Members(ms) => Some(ms),
            _ => None,
        }
    }
}

/// Acceptance statistics of a guess protocol, one entry per input (row-major).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapProfile {
    pub domain: Domain,
    pub guesses: BigUint,
    pub acc: Vec<BigInt>,
    pub rej: Vec<BigInt>,
    pub gap: Vec<BigInt>,
}

impl GapProfile {
    fn from_gap(domain: Domain, guesses: BigUint, gap: Vec<BigInt>) -> Self {
        let l = BigInt::from(guesses.clone());
        let acc: Vec<BigInt> = gap.iter().map(|g| (&l + g) / 2).collect();
        let rej = acc.iter().map(|a| &l - a).collect();
        GapProfile {
            domain,
            guesses,
            acc,
            rej,
            gap,
        }
    }

    pub fn gap_at(&self, x: usize, y: usize) -> &BigInt {
        &self.gap[x * self.domain.cols + y]
    }

    pub fn acc_at(&self, x: usize, y: usize) -> &BigInt {
        &self.acc[x * self.domain.cols + y]
    }
}

/// A nonempty sequence of deterministic protocols over a shared domain.
#[derive(Clone)]
pub struct GuessProtocol {
    domain: Domain,
    node: Arc<Node>,
}

impl fmt::Debug for GuessProtocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GuessProtocol")
            .field("domain", &self.domain)
            .field("guesses", &self.node.count)
            .field("max_member_cost", &self.node.max_cost)
            .finish()
    }
}

/// `ceil(log2 n)` for `n >= 1`.
pub fn ceil_log2(n: &BigUint) -> u64 {
    if n <= &BigUint::one() {
        0
    } else {
        (n - 1u32).bits()
    }
}

impl GuessProtocol {
    pub fn new(members: Vec<DeterministicProtocol>) -> Result<Self> {
        let Some(first) = members.first() else {
            return Err(Error::InvalidArgument("a guess protocol needs at least one guess".into()));
        };
        let domain = first.domain();
        if let Some(p) = members.iter().find(|p| p.domain() != domain) {
            return Err(Error::DomainMismatch(format!("members over {domain} and {}", p.domain())));
        }
        Ok(GuessProtocol {
            domain,
            node: Node::new(Kind::Members(members)),
        })
    }

    /// A guess protocol whose members are constant protocols with the given outputs.
    pub fn constants(domain: Domain, outputs: &[bool]) -> Result<Self> {
        Self::new(outputs.iter().map(|&b| DeterministicProtocol::constant(domain, b)).collect())
    }

    pub fn single(p: DeterministicProtocol) -> Self {
        GuessProtocol {
            domain: p.domain(),
            node: Node::new(Kind::Members(vec![p])),
        }
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    /// The number of guesses `l`.
    pub fn guess_count(&self) -> &BigUint {
        &self.node.count
    }

    pub fn max_member_cost(&self) -> usize {
        self.node.max_cost
    }

    /// `ceil(log l) + max_i D(member_i)`.
    pub fn pp_cost(&self) -> u64 {
        ceil_log2(&self.node.count) + self.node.max_cost as u64
    }

    pub fn is_explicit(&self) -> bool {
        self.node.explicit().is_some()
    }

    fn check_domain(&self, other: &Self) -> Result<()> {
        if self.domain != other.domain {
            return Err(Error::DomainMismatch(format!("{} vs {}", self.domain, other.domain)));
        }
        Ok(())
    }

    fn small(count: &BigUint) -> bool {
        count <= &BigUint::from(EAGER_MEMBERS)
    }

    /// Flips every member; the gap is negated.
    pub fn complement(&self) -> Self {
        let node = match &self.node.kind {
            Kind::Members(ms) => Node::new(Kind::Members(ms.iter().map(|p| p.complement()).collect())),
            Kind::Complement(inner) => inner.clone(),
            _ => Node::new(Kind::Complement(self.node.clone())),
        };
        GuessProtocol { domain: self.domain, node }
    }

    /// Concatenation of the guess lists; gaps add.
    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.check_domain(other)?;
        Ok(Self::sum_all(&[self.clone(), other.clone()]).expect("nonempty"))
    }

    /// Concatenation of several guess lists, in order.
    pub fn sum_all(parts: &[GuessProtocol]) -> Result<Self> {
        let Some(first) = parts.first() else {
            return Err(Error::InvalidArgument("sum of no guess protocols".into()));
        };
        for p in parts {
            first.check_domain(p)?;
        }
        if parts.len() == 1 {
            return Ok(first.clone());
        }
        let total: BigUint = parts.iter().map(|p| p.guess_count()).sum();
        if Self::small(&total) && parts.iter().all(|p| p.is_explicit()) {
            let members = parts
                .iter()
                .flat_map(|p| p.node.explicit().expect("checked").iter().cloned())
                .collect();
            return Ok(GuessProtocol {
                domain: first.domain,
                node: Node::new(Kind::Members(members)),
            });
        }
        let mut children = Vec::with_capacity(parts.len());
        for p in parts {
            match &p.node.kind {
                Kind::Sum(inner) => children.extend(inner.iter().cloned()),
                _ => children.push(p.node.clone()),
            }
        }
        Ok(GuessProtocol {
            domain: first.domain,
            node: Node::new(Kind::Sum(children)),
        })
    }

    /// All pairwise deterministic products, first factor outermost; gaps multiply.
    pub fn product(&self, other: &Self) -> Result<Self> {
        self.check_domain(other)?;
        Ok(GuessProtocol {
            domain: self.domain,
            node: Node::new(Kind::Product(self.node.clone(), other.node.clone())),
        })
    }

    /// `times` back-to-back copies of the guess list; the gap scales by `times`.
    pub fn replicate(&self, times: &BigUint) -> Result<Self> {
        if times.is_zero() {
            return Err(Error::InvalidArgument("cannot replicate a guess protocol zero times".into()));
        }
        if times.is_one() {
            return Ok(self.clone());
        }
        if let (Some(ms), true) = (self.node.explicit(), Self::small(&(times * &self.node.count))) {
            let k = times.to_usize().expect("small");
            let members = (0..k).flat_map(|_| ms.iter().cloned()).collect();
            return Ok(GuessProtocol {
                domain: self.domain,
                node: Node::new(Kind::Members(members)),
            });
        }
        Ok(GuessProtocol {
            domain: self.domain,
            node: Node::new(Kind::Repeat(times.clone(), self.node.clone())),
        })
    }

    /// `(P_1, P_1, ..., P_l, P_l, 0)`: the gap becomes `2 gap - 1`, which is odd,
    /// and PP acceptance is unchanged.
    pub fn normalize_nonzero(&self) -> Self {
        let reject = DeterministicProtocol::constant(self.domain, false);
        if let (Some(ms), true) = (self.node.explicit(), Self::small(&(&self.node.count * 2u32 + 1u32))) {
            let mut members = Vec::with_capacity(2 * ms.len() + 1);
            for p in ms {
                members.push(p.clone());
                members.push(p.clone());
            }
            members.push(reject);
            return GuessProtocol {
                domain: self.domain,
                node: Node::new(Kind::Members(members)),
            };
        }
        // Same multiset of members, grouped as (P_1..P_l, P_1..P_l, 0).
        let doubled = Node::new(Kind::Repeat(BigUint::from(2u32), self.node.clone()));
        GuessProtocol {
            domain: self.domain,
            node: Node::new(Kind::Sum(vec![doubled, Node::new(Kind::Members(vec![reject]))])),
        }
    }

    /// Gap values per input, from the protocol expression.
    pub fn gap_grid(&self) -> &[BigInt] {
        self.node.gap(self.domain)
    }

    pub fn gap_profile(&self) -> GapProfile {
        GapProfile::from_gap(self.domain, self.node.count.clone(), self.gap_grid().to_vec())
    }

    pub fn gap_at(&self, x: usize, y: usize) -> Result<BigInt> {
        self.domain.check(x, y)?;
        Ok(self.gap_grid()[x * self.domain.cols + y].clone())
    }

    /// PP acceptance: strictly more accepting than rejecting guesses.
    pub fn pp_eval(&self, x: usize, y: usize) -> Result<bool> {
        Ok(self.gap_at(x, y)?.is_positive())
    }

    /// The Boolean matrix computed in PP acceptance mode.
    pub fn accepted(&self) -> BooleanMatrix {
        let cols = self.domain.cols;
        let gap = self.gap_grid();
        BooleanMatrix::from_fn(self.domain.rows, cols, |x, y| gap[x * cols + y].is_positive()).expect("nonempty domain")
    }

    /// Member `index` (0-based) of the guess sequence.
    pub fn member(&self, index: &BigUint) -> Result<DeterministicProtocol> {
        if index >= &self.node.count {
            return Err(Error::InvalidArgument(format!(
                "member index {index} out of range for {} guesses",
                self.node.count
            )));
        }
        Ok(self.node.member(index))
    }

    /// The full member list, if it has at most `limit` entries.
    pub fn members_limited(&self, limit: u64) -> Result<Vec<DeterministicProtocol>> {
        if self.node.count > BigUint::from(limit) {
            return Err(Error::Guard(format!(
                "guess protocol has {} members, materialization limit is {limit}",
                self.node.count
            )));
        }
        let mut out = Vec::with_capacity(self.node.count.to_usize().unwrap_or(0));
        self.node.for_each(&mut |p| out.push(p));
        Ok(out)
    }

    pub fn members(&self) -> Result<Vec<DeterministicProtocol>> {
        self.members_limited(MATERIALIZE_LIMIT)
    }

    /// Acceptance statistics obtained by evaluating every materialized member.
    pub fn count_profile(&self, limit: u64) -> Result<GapProfile> {
        let members = self.members_limited(limit)?;
        let l = members.len();
        let acc: Vec<BigInt> = self
            .domain
            .inputs()
            .map(|(x, y)| BigInt::from(members.iter().filter(|p| p.eval_unchecked(x, y)).count()))
            .collect();
        let lb = BigInt::from(l);
        let rej: Vec<BigInt> = acc.iter().map(|a| &lb - a).collect();
        let gap = acc.iter().zip(&rej).map(|(a, r)| a - r).collect();
        Ok(GapProfile {
            domain: self.domain,
            guesses: BigUint::from(l),
            acc,
            rej,
            gap,
        })
    }

    /// Same members, in the same order.
    pub fn same_members(&self, other: &Self) -> Result<bool> {
        if self.domain != other.domain || self.guess_count() != other.guess_count() {
            return Ok(false);
        }
        Ok(self.members()? == other.members()?)
    }
}

/// `(acc, floor(l/2))`: PP acceptance is `acc > floor(l/2)` at every input.
pub fn pp_to_threshold(g: &GuessProtocol) -> (Vec<BigInt>, BigInt) {
    let profile = g.gap_profile();
    let threshold = BigInt::from(g.guess_count().clone()) / 2;
    (profile.acc, threshold)
}

/// A guess protocol accepting in PP mode exactly where `acc_g > threshold`.
///
/// Pads with always-rejecting guesses until `l >= 2 threshold`, then appends
/// `l - 2 threshold` always-accepting guesses.
pub fn threshold_to_pp(g: &GuessProtocol, threshold: &BigInt) -> Result<GuessProtocol> {
    if threshold.is_negative() {
        return Err(Error::InvalidArgument(format!("threshold {threshold} must be nonnegative")));
    }
    let domain = g.domain();
    let l = BigInt::from(g.guess_count().clone());
    let twice: BigInt = threshold * 2;
    let mut parts = vec![g.clone()];
    let mut padded = l.clone();
    if twice > l {
        let pad = BigInt::to_biguint(&(&twice - &l)).expect("positive");
        parts.push(GuessProtocol::constants(domain, &[false])?.replicate(&pad)?);
        padded = twice.clone();
    }
    let accepts = &padded - &twice;
    if accepts.is_positive() {
        let accepts = accepts.to_biguint().expect("positive");
        parts.push(GuessProtocol::constants(domain, &[true])?.replicate(&accepts)?);
    }
    GuessProtocol::sum_all(&parts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocols::deterministic::{ProtocolNode, Speaker};

    fn d22() -> Domain {
        Domain::new(2, 2)
    }

    fn consts(bits: &[bool]) -> GuessProtocol {
        GuessProtocol::constants(d22(), bits).unwrap()
    }

    fn all_eq(grid: &[BigInt], v: i64) -> bool {
        grid.iter().all(|g| g == &BigInt::from(v))
    }

    #[test]
    fn gap_profile_examples() {
        let p = consts(&[true]).gap_profile();
        assert!(all_eq(&p.acc, 1) && all_eq(&p.rej, 0) && all_eq(&p.gap, 1));
        let p = consts(&[true, false]).gap_profile();
        assert!(all_eq(&p.acc, 1) && all_eq(&p.rej, 1) && all_eq(&p.gap, 0));
        assert!(all_eq(&consts(&[true, true, false]).gap_profile().gap, 1));
    }

    #[test]
    fn pp_eval_examples() {
        for (x, y) in d22().inputs() {
            assert!(consts(&[true]).pp_eval(x, y).unwrap());
            assert!(!consts(&[true, false]).pp_eval(x, y).unwrap());
            assert!(consts(&[true, true, false]).pp_eval(x, y).unwrap());
        }
    }

    #[test]
    fn pp_cost_examples() {
        let d = d22();
        assert_eq!(consts(&[true]).pp_cost(), 0);
        let cost1 = DeterministicProtocol::alice_bit(d, vec![false, true]).unwrap();
        let cost2 = DeterministicProtocol::new(
            d,
            ProtocolNode::send(
                Speaker::Alice,
                vec![false, true],
                ProtocolNode::leaf(false),
                ProtocolNode::send(Speaker::Bob, vec![true, false], ProtocolNode::leaf(false), ProtocolNode::leaf(true)),
            ),
        )
        .unwrap();
        let g = GuessProtocol::new(vec![DeterministicProtocol::constant(d, true), cost1.clone(), cost2]).unwrap();
        assert_eq!(g.pp_cost(), 4);
        let g = GuessProtocol::new(vec![cost1.clone(), cost1.clone(), cost1.clone(), cost1]).unwrap();
        assert_eq!(g.pp_cost(), 3);
    }

    /// Gap grid [[2, -2]] on a 1x2 domain.
    fn gap_2_minus_2() -> GuessProtocol {
        let d = Domain::new(1, 2);
        let bob = DeterministicProtocol::bob_bit(d, vec![true, false]).unwrap();
        GuessProtocol::new(vec![bob.clone(), bob]).unwrap()
    }

    #[test]
    fn complement_examples() {
        let g = consts(&[true]);
        let c = g.complement();
        assert!(c.same_members(&consts(&[false])).unwrap());
        assert!(all_eq(&c.gap_profile().gap, -1));
        let g = gap_2_minus_2();
        assert_eq!(g.gap_grid(), &[BigInt::from(2), BigInt::from(-2)]);
        let c = g.complement();
        assert_eq!(c.gap_grid(), &[BigInt::from(-2), BigInt::from(2)]);
        assert_eq!(c.guess_count(), g.guess_count());
        assert_eq!(c.pp_cost(), g.pp_cost());
        assert!(c.complement().same_members(&g).unwrap());
    }

    #[test]
    fn sum_examples() {
        assert!(all_eq(consts(&[true]).sum(&consts(&[false])).unwrap().gap_grid(), 0));
        let g = gap_2_minus_2();
        assert!(all_eq(g.sum(&g.complement()).unwrap().gap_grid(), 0));
        let three = consts(&[true, true, true]);
        let minus_one = consts(&[false]);
        let s = three.sum(&minus_one).unwrap();
        assert!(all_eq(s.gap_grid(), 2));
        assert_eq!(s.guess_count(), &BigUint::from(4u32));
        assert!(matches!(
            three.sum(&GuessProtocol::constants(Domain::new(3, 3), &[true]).unwrap()),
            Err(Error::DomainMismatch(_))
        ));
    }

    #[test]
    fn product_examples() {
        let g = gap_2_minus_2();
        let c = |b| GuessProtocol::constants(Domain::new(1, 2), &[b]).unwrap();
        let p = c(true).product(&g).unwrap();
        assert_eq!(p.gap_grid(), g.gap_grid());
        let p = c(false).product(&g).unwrap();
        assert_eq!(p.gap_grid(), g.complement().gap_grid());
        // gap 2 times gap -3 on a 2x2 domain
        let two = consts(&[true, true]);
        let minus_three = consts(&[false, false, false]);
        let p = two.product(&minus_three).unwrap();
        assert_eq!(p.guess_count(), &BigUint::from(6u32));
        assert!(all_eq(&p.count_profile(1 << 10).unwrap().gap, -6));
        assert!(all_eq(p.gap_grid(), -6));
    }

    #[test]
    fn normalize_examples() {
        let g = consts(&[true]).normalize_nonzero();
        assert!(all_eq(g.gap_grid(), 1));
        assert_eq!(g.guess_count(), &BigUint::from(3u32));
        let g = consts(&[true, false]).normalize_nonzero();
        assert!(all_eq(g.gap_grid(), -1));
        assert!(!g.pp_eval(0, 0).unwrap());
    }

    #[test]
    fn threshold_examples() {
        let g = consts(&[true, true]);
        let (acc, t) = pp_to_threshold(&g);
        assert!(all_eq(&acc, 2));
        assert_eq!(t, BigInt::from(1));
        let g = consts(&[true, false, false]);
        let (acc, t) = pp_to_threshold(&g);
        assert!(all_eq(&acc, 1));
        assert_eq!(t, BigInt::from(1));
        assert!(!g.pp_eval(0, 0).unwrap());

        let g = consts(&[true, true]);
        let h = threshold_to_pp(&g, &BigInt::from(1)).unwrap();
        assert!(h.same_members(&g).unwrap());
        assert!(h.pp_eval(1, 1).unwrap());

        let g = consts(&[true]);
        let h = threshold_to_pp(&g, &BigInt::from(2)).unwrap();
        assert!(h.same_members(&consts(&[true, false, false, false])).unwrap());
        assert!(h.accepted().count_ones() == 0);
    }

    #[test]
    fn threshold_zero_and_negative() {
        let g = consts(&[false, false]);
        let h = threshold_to_pp(&g, &BigInt::zero()).unwrap();
        assert_eq!(h.guess_count(), &BigUint::from(4u32));
        assert_eq!(h.accepted().count_ones(), 0);
        let g = consts(&[true, false]);
        assert_eq!(threshold_to_pp(&g, &BigInt::zero()).unwrap().accepted().count_ones(), 4);
        assert!(threshold_to_pp(&g, &BigInt::from(-1)).is_err());
    }

    #[test]
    fn lazy_members_match_expression() {
        let d = d22();
        let a = GuessProtocol::new(vec![
            DeterministicProtocol::alice_bit(d, vec![true, false]).unwrap(),
            DeterministicProtocol::bob_bit(d, vec![false, true]).unwrap(),
        ])
        .unwrap();
        let b = a.complement().sum(&consts(&[true])).unwrap();
        let big = a.product(&b).unwrap().replicate(&BigUint::from(5000u32)).unwrap();
        assert!(!big.is_explicit());
        let e = big.complement().normalize_nonzero();
        assert!(!e.is_explicit());
        let by_count = e.count_profile(1 << 20).unwrap();
        assert_eq!(by_count, e.gap_profile());
        let last = e.member(&(e.guess_count() - 1u32)).unwrap();
        assert_eq!(last, DeterministicProtocol::constant(d, false));
        assert!(e.member(e.guess_count()).is_err());
    }

    #[test]
    fn materialization_guard() {
        let g = consts(&[true, false]).replicate(&BigUint::from(1u64 << 40)).unwrap();
        assert_eq!(g.pp_cost(), 41);
        assert!(matches!(g.members(), Err(Error::Guard(_))));
        assert!(all_eq(g.gap_grid(), 0));
    }

    #[test]
    fn ceil_log2_values() {
        let v: Vec<u64> = (1u32..=9).map(|n| ceil_log2(&BigUint::from(n))).collect();
        assert_eq!(v, vec![0, 1, 2, 2, 3, 3, 3, 3, 4]);
    }
}
