use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Input domain `X x Y`; Alice holds a row index, Bob a column index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Domain {
    pub rows: usize,
    pub cols: usize,
}

impl Domain {
    pub fn new(rows: usize, cols: usize) -> Self {
        Domain { rows, cols }
    }

    pub fn size(&self) -> usize {
        self.rows * self.cols
    }

    /// All inputs in row-major order.
    pub fn inputs(&self) -> impl Iterator<Item = (usize, usize)> {
        let cols = self.cols;
        (0..self.rows).flat_map(move |x| (0..cols).map(move |y| (x, y)))
    }

    pub fn check(&self, x: usize, y: usize) -> Result<()> {
        if x >= self.rows || y >= self.cols {
            return Err(Error::OutOfDomain {
                x,
                y,
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok(())
    }

    pub fn side(&self, speaker: Speaker) -> usize {
        match speaker {
            Speaker::Alice => self.rows,
            Speaker::Bob => self.cols,
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.rows, self.cols)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Speaker {
    Alice,
    Bob,
}

/// A node of a protocol tree. Subtrees are shared through `Arc`, so a
/// protocol is physically a DAG even though it denotes a tree.
#[derive(Debug)]
pub enum ProtocolNode {
    Leaf(bool),
    Send {
        speaker: Speaker,
        /// Message bit for each of the speaker's input indices.
        table: Vec<bool>,
        zero: Arc<ProtocolNode>,
        one: Arc<ProtocolNode>,
    },
}

impl ProtocolNode {
    pub fn leaf(bit: bool) -> Arc<ProtocolNode> {
        Arc::new(ProtocolNode::Leaf(bit))
    }

    pub fn send(speaker: Speaker, table: Vec<bool>, zero: Arc<ProtocolNode>, one: Arc<ProtocolNode>) -> Arc<ProtocolNode> {
        Arc::new(ProtocolNode::Send {
            speaker,
            table,
            zero,
            one,
        })
    }
}

fn nodes_equal(a: &Arc<ProtocolNode>, b: &Arc<ProtocolNode>) -> bool {
    if Arc::ptr_eq(a, b) {
        return true;
    }
    match (a.as_ref(), b.as_ref()) {
        (ProtocolNode::Leaf(x), ProtocolNode::Leaf(y)) => x == y,
        (
            ProtocolNode::Send {
                speaker: s1,
                table: t1,
                zero: z1,
                one: o1,
            },
            ProtocolNode::Send {
                speaker: s2,
                table: t2,
                zero: z2,
                one: o2,
            },
        ) => s1 == s2 && t1 == t2 && nodes_equal(z1, z2) && nodes_equal(o1, o2),
        _ => false,
    }
}

type Memo = HashMap<*const ProtocolNode, Arc<ProtocolNode>>;

fn depth(node: &Arc<ProtocolNode>, memo: &mut HashMap<*const ProtocolNode, usize>) -> usize {
    if let Some(&d) = memo.get(&Arc::as_ptr(node)) {
        return d;
    }
    let d = match node.as_ref() {
        ProtocolNode::Leaf(_) => 0,
        ProtocolNode::Send { zero, one, .. } => 1 + depth(zero, memo).max(depth(one, memo)),
    };
    memo.insert(Arc::as_ptr(node), d);
    d
}

fn flip(node: &Arc<ProtocolNode>, memo: &mut Memo) -> Arc<ProtocolNode> {
    if let Some(n) = memo.get(&Arc::as_ptr(node)) {
        return n.clone();
    }
    let out = match node.as_ref() {
        ProtocolNode::Leaf(b) => ProtocolNode::leaf(!b),
        ProtocolNode::Send {
            speaker,
            table,
            zero,
            one,
        } => ProtocolNode::send(*speaker, table.clone(), flip(zero, memo), flip(one, memo)),
    };
    memo.insert(Arc::as_ptr(node), out.clone());
    out
}

fn graft(node: &Arc<ProtocolNode>, on_accept: &Arc<ProtocolNode>, on_reject: &Arc<ProtocolNode>, memo: &mut Memo) -> Arc<ProtocolNode> {
    if let Some(n) = memo.get(&Arc::as_ptr(node)) {
        return n.clone();
    }
    let out = match node.as_ref() {
        ProtocolNode::Leaf(true) => on_accept.clone(),
        ProtocolNode::Leaf(false) => on_reject.clone(),
        ProtocolNode::Send {
            speaker,
            table,
            zero,
            one,
        } => ProtocolNode::send(
            *speaker,
            table.clone(),
            graft(zero, on_accept, on_reject, memo),
            graft(one, on_accept, on_reject, memo),
        ),
    };
    memo.insert(Arc::as_ptr(node), out.clone());
    out
}

fn validate(node: &Arc<ProtocolNode>, domain: Domain, seen: &mut HashMap<*const ProtocolNode, ()>) -> Result<()> {
    if seen.insert(Arc::as_ptr(node), ()).is_some() {
        return Ok(());
    }
    if let ProtocolNode::Send {
        speaker,
        table,
        zero,
        one,
    } = node.as_ref()
    {
        let want = domain.side(*speaker);
        if table.len() != want {
            return Err(Error::InvalidArgument(format!(
                "{speaker:?} message table has {} entries, domain {domain} needs {want}",
                table.len()
            )));
        }
        validate(zero, domain, seen)?;
        validate(one, domain, seen)?;
    }
    Ok(())
}

/// A deterministic two-party protocol over a finite domain.
#[derive(Clone, Debug)]
pub struct DeterministicProtocol {
    domain: Domain,
    root: Arc<ProtocolNode>,
    cost: usize,
}

impl PartialEq for DeterministicProtocol {
    fn eq(&self, other: &Self) -> bool {
        self.domain == other.domain && nodes_equal(&self.root, &other.root)
    }
}

impl Eq for DeterministicProtocol {}

impl DeterministicProtocol {
    pub fn new(domain: Domain, root: Arc<ProtocolNode>) -> Result<Self> {
        if domain.rows == 0 || domain.cols == 0 {
            return Err(Error::InvalidArgument(format!("empty domain {domain}")));
        }
        validate(&root, domain, &mut HashMap::new())?;
        let cost = depth(&root, &mut HashMap::new());
        Ok(DeterministicProtocol { domain, root, cost })
    }

    fn from_trusted(domain: Domain, root: Arc<ProtocolNode>) -> Self {
        let cost = depth(&root, &mut HashMap::new());
        DeterministicProtocol { domain, root, cost }
    }

    /// The protocol that outputs `bit` without communicating.
    pub fn constant(domain: Domain, bit: bool) -> Self {
        DeterministicProtocol {
            domain,
            root: ProtocolNode::leaf(bit),
            cost: 0,
        }
    }

    /// Alice announces `table[x]`; the announced bit is the output.
    pub fn alice_bit(domain: Domain, table: Vec<bool>) -> Result<Self> {
        Self::new(
            domain,
            ProtocolNode::send(Speaker::Alice, table, ProtocolNode::leaf(false), ProtocolNode::leaf(true)),
        )
    }

    /// Bob announces `table[y]`; the announced bit is the output.
    pub fn bob_bit(domain: Domain, table: Vec<bool>) -> Result<Self> {
        Self::new(
            domain,
            ProtocolNode::send(Speaker::Bob, table, ProtocolNode::leaf(false), ProtocolNode::leaf(true)),
        )
    }

    /// Alice sends her row index in binary, then Bob announces the entry.
    /// Computes any Boolean matrix with `ceil(log rows) + 1` bits.
    pub fn for_matrix(m: &crate::matrix::BooleanMatrix) -> Self {
        let domain = Domain::new(m.rows(), m.cols());
        fn build(m: &crate::matrix::BooleanMatrix, rows: &[usize]) -> Arc<ProtocolNode> {
            if rows.len() == 1 {
                let x = rows[0];
                let table: Vec<bool> = (0..m.cols()).map(|y| m.get(x, y)).collect();
                if table.iter().all(|&b| b) {
                    return ProtocolNode::leaf(true);
                }
                if table.iter().all(|&b| !b) {
                    return ProtocolNode::leaf(false);
                }
                return ProtocolNode::send(Speaker::Bob, table, ProtocolNode::leaf(false), ProtocolNode::leaf(true));
            }
            let half = rows.len().div_ceil(2);
            let (low, high) = rows.split_at(half);
            let mut table = vec![false; m.rows()];
            for &x in high {
                table[x] = true;
            }
            ProtocolNode::send(Speaker::Alice, table, build(m, low), build(m, high))
        }
        let rows: Vec<usize> = (0..m.rows()).collect();
        Self::from_trusted(domain, build(m, &rows))
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn root(&self) -> &Arc<ProtocolNode> {
        &self.root
    }

    /// Worst-case number of bits exchanged (tree depth; the output is not charged).
    pub fn cost(&self) -> usize {
        self.cost
    }

    pub fn eval(&self, x: usize, y: usize) -> Result<bool> {
        self.domain.check(x, y)?;
        Ok(self.eval_unchecked(x, y))
    }

    pub(crate) fn eval_unchecked(&self, x: usize, y: usize) -> bool {
        let mut node = &self.root;
        loop {
            match node.as_ref() {
                ProtocolNode::Leaf(b) => return *b,
                ProtocolNode::Send {
                    speaker,
                    table,
                    zero,
                    one,
                } => {
                    let bit = match speaker {
                        Speaker::Alice => table[x],
                        Speaker::Bob => table[y],
                    };
                    node = if bit { one } else { zero };
                }
            }
        }
    }

    /// The protocol accepting exactly where this one rejects.
    pub fn complement(&self) -> Self {
        DeterministicProtocol {
            domain: self.domain,
            root: flip(&self.root, &mut HashMap::new()),
            cost: self.cost,
        }
    }

    /// Runs `self`; on accept runs `other`, on reject runs the complement of `other`.
    /// The result accepts iff both outputs agree.
    pub fn product(&self, other: &Self) -> Result<Self> {
        if self.domain != other.domain {
            return Err(Error::DomainMismatch(format!("{} vs {}", self.domain, other.domain)));
        }
        let negated = flip(&other.root, &mut HashMap::new());
        let root = graft(&self.root, &other.root, &negated, &mut HashMap::new());
        Ok(DeterministicProtocol {
            domain: self.domain,
            root,
            cost: self.cost + other.cost,
        })
    }

    /// Number of nodes when the shared DAG is unfolded into a tree.
    pub fn tree_size(&self) -> u128 {
        fn size(node: &Arc<ProtocolNode>, memo: &mut HashMap<*const ProtocolNode, u128>) -> u128 {
            if let Some(&s) = memo.get(&Arc::as_ptr(node)) {
                return s;
            }
            let s = match node.as_ref() {
                ProtocolNode::Leaf(_) => 1,
                ProtocolNode::Send { zero, one, .. } => 1u128.saturating_add(size(zero, memo)).saturating_add(size(one, memo)),
            };
            memo.insert(Arc::as_ptr(node), s);
            s
        }
        size(&self.root, &mut HashMap::new())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parity_equal() -> DeterministicProtocol {
        let d = Domain::new(2, 2);
        let bob = |flip: bool| ProtocolNode::send(Speaker::Bob, vec![false, true], ProtocolNode::leaf(!flip), ProtocolNode::leaf(flip));
        DeterministicProtocol::new(d, ProtocolNode::send(Speaker::Alice, vec![false, true], bob(false), bob(true))).unwrap()
    }

    #[test]
    fn leaf_protocols() {
        let d = Domain::new(3, 2);
        let one = DeterministicProtocol::constant(d, true);
        let zero = DeterministicProtocol::constant(d, false);
        for (x, y) in d.inputs() {
            assert!(one.eval(x, y).unwrap());
            assert!(!zero.eval(x, y).unwrap());
        }
        assert_eq!(one.cost(), 0);
        assert_eq!(zero.cost(), 0);
    }

    #[test]
    fn two_bit_equality_protocol() {
        let p = parity_equal();
        assert_eq!(p.cost(), 2);
        // hand-evaluated truth table of [x mod 2 == y mod 2]
        let truth = [[true, false], [false, true]];
        for (x, y) in p.domain().inputs() {
            assert_eq!(p.eval(x, y).unwrap(), truth[x][y], "at ({x},{y})");
        }
        assert!(p.eval(1, 1).unwrap());
    }

    #[test]
    fn out_of_domain() {
        let p = parity_equal();
        assert!(matches!(p.eval(2, 0), Err(Error::OutOfDomain { .. })));
        assert!(matches!(p.eval(0, 5), Err(Error::OutOfDomain { .. })));
    }

    #[test]
    fn table_width_is_validated() {
        let d = Domain::new(2, 3);
        assert!(DeterministicProtocol::alice_bit(d, vec![true, false, true]).is_err());
        assert!(DeterministicProtocol::bob_bit(d, vec![true, false, true]).is_ok());
    }

    #[test]
    fn product_is_agreement() {
        let d = Domain::new(2, 2);
        let a = DeterministicProtocol::alice_bit(d, vec![false, true]).unwrap();
        let b = parity_equal();
        let p = a.product(&b).unwrap();
        assert_eq!(p.cost(), a.cost() + b.cost());
        for (x, y) in d.inputs() {
            let expect = a.eval(x, y).unwrap() == b.eval(x, y).unwrap();
            assert_eq!(p.eval(x, y).unwrap(), expect);
        }
        let other = DeterministicProtocol::constant(Domain::new(3, 2), true);
        assert!(matches!(a.product(&other), Err(Error::DomainMismatch(_))));
    }

    #[test]
    fn complement_is_structural_involution() {
        let p = parity_equal();
        let c = p.complement();
        assert_eq!(c.cost(), p.cost());
        assert_ne!(c, p);
        assert_eq!(c.complement(), p);
    }

    #[test]
    fn matrix_protocol_computes_matrix() {
        let m = crate::matrix::BooleanMatrix::from_code(4, 3, 0b1011_0110_1001).unwrap();
        let p = DeterministicProtocol::for_matrix(&m);
        for (x, y) in p.domain().inputs() {
            assert_eq!(p.eval(x, y).unwrap(), m.get(x, y));
        }
        assert!(p.cost() <= 3);
    }

    #[test]
    fn long_product_chains_stay_small() {
        let p = parity_equal();
        let mut chain = p.clone();
        for _ in 0..60 {
            chain = chain.product(&p).unwrap();
        }
        assert_eq!(chain.cost(), 122);
        assert!(chain.tree_size() > 1u128 << 60);
        // 61 copies of an even predicate: agreement chain of 61 copies is the predicate itself
        for (x, y) in p.domain().inputs() {
            assert_eq!(chain.eval(x, y).unwrap(), p.eval(x, y).unwrap());
        }
    }
}
