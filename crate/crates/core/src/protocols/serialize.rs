//! JSON tree format for protocols. See `docs/FORMATS.md`.
//!
//! A leaf is `{"leaf": 0}` or `{"leaf": 1}`; an internal node is
//! `{"speaker": "alice", "table": "0110", "children": [zero, one]}` where
//! `table[i]` is the message sent on input index `i`.

use std::sync::Arc;

use serde_json::{json, Map, Value};

use super::deterministic::{DeterministicProtocol, Domain, ProtocolNode, Speaker};
use super::guess::GuessProtocol;
use crate::error::{Error, Result};

/// Largest unfolded tree the serializer will write.
pub const MAX_SERIALIZED_NODES: u128 = 1 << 22;

fn bad(message: impl Into<String>) -> Error {
    Error::InvalidArgument(message.into())
}

pub fn node_to_json(node: &ProtocolNode) -> Value {
    match node {
        ProtocolNode::Leaf(b) => json!({ "leaf": u8::from(*b) }),
        ProtocolNode::Send {
            speaker,
            table,
            zero,
            one,
        } => {
            let table: String = table.iter().map(|&b| if b { '1' } else { '0' }).collect();
            json!({
                "speaker": speaker,
                "table": table,
                "children": [node_to_json(zero), node_to_json(one)],
            })
        }
    }
}

pub fn node_from_json(v: &Value) -> Result<Arc<ProtocolNode>> {
    let obj = v.as_object().ok_or_else(|| bad("protocol node must be an object"))?;
    if let Some(leaf) = obj.get("leaf") {
        return match leaf.as_u64() {
            Some(0) => Ok(ProtocolNode::leaf(false)),
            Some(1) => Ok(ProtocolNode::leaf(true)),
            _ => Err(bad(format!("leaf must be 0 or 1, got {leaf}"))),
        };
    }
    let speaker: Speaker = serde_json::from_value(obj.get("speaker").cloned().ok_or_else(|| bad("node without speaker"))?)?;
    let table = obj
        .get("table")
        .and_then(Value::as_str)
        .ok_or_else(|| bad("node without table string"))?
        .chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(bad(format!("illegal table symbol {other:?}"))),
        })
        .collect::<Result<Vec<bool>>>()?;
    let children = obj
        .get("children")
        .and_then(Value::as_array)
        .filter(|c| c.len() == 2)
        .ok_or_else(|| bad("node needs exactly two children"))?;
    Ok(ProtocolNode::send(
        speaker,
        table,
        node_from_json(&children[0])?,
        node_from_json(&children[1])?,
    ))
}

fn check_size(p: &DeterministicProtocol) -> Result<()> {
    if p.tree_size() > MAX_SERIALIZED_NODES {
        return Err(Error::Guard(format!(
            "protocol tree has {} nodes, serialization limit is {MAX_SERIALIZED_NODES}",
            p.tree_size()
        )));
    }
    Ok(())
}

fn read_domain(obj: &Map<String, Value>) -> Result<Domain> {
    let side = |k: &str| {
        obj.get(k)
            .and_then(Value::as_u64)
            .map(|v| v as usize)
            .ok_or_else(|| bad(format!("missing integer field {k:?}")))
    };
    Ok(Domain::new(side("rows")?, side("cols")?))
}

pub fn protocol_to_json(p: &DeterministicProtocol) -> Result<Value> {
    check_size(p)?;
    Ok(json!({
        "rows": p.domain().rows,
        "cols": p.domain().cols,
        "root": node_to_json(p.root()),
    }))
}

pub fn protocol_from_json(v: &Value) -> Result<DeterministicProtocol> {
    let obj = v.as_object().ok_or_else(|| bad("protocol file must be an object"))?;
    let domain = read_domain(obj)?;
    let root = obj.get("root").ok_or_else(|| bad("missing root"))?;
    DeterministicProtocol::new(domain, node_from_json(root)?)
}

/// Writes every member; fails with a guard error if the guess list or any
/// member tree is too large to write out.
pub fn guess_to_json(g: &GuessProtocol) -> Result<Value> {
    let members = g.members()?;
    let mut guesses = Vec::with_capacity(members.len());
    let mut total: u128 = 0;
    for p in &members {
        check_size(p)?;
        total = total.saturating_add(p.tree_size());
        if total > MAX_SERIALIZED_NODES {
            return Err(Error::Guard(format!(
                "guess protocol exceeds {MAX_SERIALIZED_NODES} serialized nodes"
            )));
        }
        guesses.push(node_to_json(p.root()));
    }
    Ok(json!({
        "rows": g.domain().rows,
        "cols": g.domain().cols,
        "guesses": guesses,
    }))
}

pub fn guess_from_json(v: &Value) -> Result<GuessProtocol> {
    let obj = v.as_object().ok_or_else(|| bad("guess protocol file must be an object"))?;
    let domain = read_domain(obj)?;
    let guesses = obj
        .get("guesses")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("missing guesses array"))?;
    let members = guesses
        .iter()
        .map(|n| DeterministicProtocol::new(domain, node_from_json(n)?))
        .collect::<Result<Vec<_>>>()?;
    GuessProtocol::new(members)
}

pub fn parse_guess(text: &str) -> Result<GuessProtocol> {
    guess_from_json(&serde_json::from_str(text)?)
}
