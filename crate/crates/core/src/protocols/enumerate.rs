//! Exhaustive enumeration of protocol trees of bounded depth.

use std::sync::Arc;

use super::deterministic::{DeterministicProtocol, Domain, ProtocolNode, Speaker};
use crate::error::{Error, Result};

pub const MAX_ENUM_SIDE: usize = 4;
pub const MAX_ENUM_DEPTH: usize = 3;

const SPEAKERS: [Speaker; 2] = [Speaker::Alice, Speaker::Bob];

fn check_guard(domain: Domain, max_depth: usize) -> Result<()> {
    if domain.rows == 0 || domain.cols == 0 {
        return Err(Error::InvalidArgument(format!("empty domain {domain}")));
    }
    if domain.rows > MAX_ENUM_SIDE || domain.cols > MAX_ENUM_SIDE || max_depth > MAX_ENUM_DEPTH {
        return Err(Error::Guard(format!(
            "protocol enumeration supports sides <= {MAX_ENUM_SIDE} and depth <= {MAX_ENUM_DEPTH}, got {domain} depth {max_depth}"
        )));
    }
    Ok(())
}

/// Number of structurally distinct protocol trees of depth at most `max_depth`.
///
/// `T(0) = 2` and `T(d) = 2 + sum over speakers of 2^side * T(d-1)^2`.
pub fn count_protocols(domain: Domain, max_depth: usize) -> Option<u128> {
    let mut t: u128 = 2;
    for _ in 0..max_depth {
        let mut next: u128 = 2;
        for s in SPEAKERS {
            let tables = 1u128.checked_shl(domain.side(s) as u32)?;
            next = next.checked_add(tables.checked_mul(t.checked_mul(t)?)?)?;
        }
        t = next;
    }
    Some(t)
}

fn table_from_code(code: u128, width: usize) -> Vec<bool> {
    (0..width).map(|i| (code >> i) & 1 == 1).collect()
}

fn level(domain: Domain, children: &[Arc<ProtocolNode>]) -> Vec<Arc<ProtocolNode>> {
    let mut out = vec![ProtocolNode::leaf(false), ProtocolNode::leaf(true)];
    for s in SPEAKERS {
        let width = domain.side(s);
        for code in 0..(1u128 << width) {
            let table = table_from_code(code, width);
            for zero in children {
                for one in children {
                    out.push(ProtocolNode::send(s, table.clone(), zero.clone(), one.clone()));
                }
            }
        }
    }
    out
}

/// Lazily yields every protocol tree of depth at most `max_depth`, each once.
///
/// Order: the two leaves, then Alice-rooted trees, then Bob-rooted trees; within
/// a speaker by message table (bit `i` of the code is the message of input `i`),
/// then by the zero child, then by the one child, children in the same order
/// one level down.
pub struct ProtocolEnumerator {
    domain: Domain,
    children: Vec<Arc<ProtocolNode>>,
    top: bool,
    next: u128,
    total: u128,
}

impl ProtocolEnumerator {
    pub fn total(&self) -> u128 {
        self.total
    }

    /// The protocol at position `index` of the enumeration order.
    pub fn get(&self, index: u128) -> Option<DeterministicProtocol> {
        if index >= self.total {
            return None;
        }
        let root = if !self.top {
            self.children[index as usize].clone()
        } else if index < 2 {
            ProtocolNode::leaf(index == 1)
        } else {
            let c = self.children.len() as u128;
            let mut rest = index - 2;
            let mut chosen = None;
            for s in SPEAKERS {
                let block = (1u128 << self.domain.side(s)) * c * c;
                if rest < block {
                    chosen = Some(s);
                    break;
                }
                rest -= block;
            }
            let s = chosen.expect("index below total");
            let code = rest / (c * c);
            let zero = &self.children[((rest / c) % c) as usize];
            let one = &self.children[(rest % c) as usize];
            ProtocolNode::send(s, table_from_code(code, self.domain.side(s)), zero.clone(), one.clone())
        };
        Some(DeterministicProtocol::new(self.domain, root).expect("well-formed by construction"))
    }
}

impl Iterator for ProtocolEnumerator {
    type Item = DeterministicProtocol;

    fn next(&mut self) -> Option<DeterministicProtocol> {
        let p = self.get(self.next)?;
        self.next += 1;
        Some(p)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = self.total - self.next;
        (usize::try_from(left).unwrap_or(usize::MAX), usize::try_from(left).ok())
    }
}

pub fn enumerate_protocols(domain: Domain, max_depth: usize) -> Result<ProtocolEnumerator> {
    check_guard(domain, max_depth)?;
    let total = count_protocols(domain, max_depth).expect("guarded sizes fit in u128");
    if max_depth == 0 {
        return Ok(ProtocolEnumerator {
            domain,
            children: level(domain, &[]),
            top: false,
            next: 0,
            total,
        });
    }
    let mut children = level(domain, &[]);
    for _ in 1..max_depth {
        children = level(domain, &children);
    }
    Ok(ProtocolEnumerator {
        domain,
        children,
        top: true,
        next: 0,
        total,
    })
}
