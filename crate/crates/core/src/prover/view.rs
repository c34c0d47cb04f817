//! JSON views of formulas, sequents and proof trees for clients. Formulas
//! travel both as printed text and as a tree whose nodes carry their
//! positions.

use serde_json::{json, Map, Value};

use super::sequent::Sequent;
use super::tree::{NodeId, ProofTree};
use crate::ast::{Formula, Kind, Position};
use crate::lang::{print_formula, PrintMode};

pub const API_VERSION: u32 = 1;

pub fn formula_json(f: &Formula) -> Value {
    json!({ "text": print_formula(f, PrintMode::Unicode), "tree": node(f, &Position::root()) })
}

fn node(f: &Formula, pos: &Position) -> Value {
    let mut m = Map::new();
    m.insert("tag".into(), json!(f.kind().tag()));
    m.insert("position".into(), json!(pos.to_string()));
    m.insert("text".into(), json!(print_formula(f, PrintMode::Unicode)));
    match f.kind() {
        Kind::Ident(n) | Kind::Apply(n) | Kind::Construct(n) | Kind::Destruct(n) => {
            m.insert("name".into(), json!(n));
        }
        Kind::Int(v) => {
            m.insert("value".into(), json!(v));
        }
        Kind::Bool(b) => {
            m.insert("value".into(), json!(b));
        }
        Kind::TypeSet(t) => {
            m.insert("set".into(), json!(t.to_string()));
        }
        Kind::Forall(bs) | Kind::Exists(bs) => {
            let bs: Vec<Value> =
                bs.iter().map(|b| json!({ "name": b.name, "type": b.ty.as_ref().map(|t| t.to_string()) })).collect();
            m.insert("binders".into(), Value::Array(bs));
        }
        _ => {}
    }
    if let Some(t) = f.ty() {
        m.insert("type".into(), json!(t.to_string()));
    }
    let children: Vec<Value> = f.children().iter().enumerate().map(|(i, c)| node(c, &pos.child(i))).collect();
    m.insert("children".into(), Value::Array(children));
    Value::Object(m)
}

pub fn sequent_json(s: &Sequent) -> Value {
    json!({
        "hyps": s.hyps().iter().map(formula_json).collect::<Vec<_>>(),
        "goal": formula_json(s.goal()),
        "text": s.to_string(),
    })
}

fn node_status(tree: &ProofTree, id: NodeId) -> &'static str {
    let n = tree.node(id).expect("listed");
    if n.rule.is_none() {
        return if n.stale { "STALE" } else { "PENDING" };
    }
    let mut stack = n.children.clone();
    while let Some(c) = stack.pop() {
        let c = tree.node(c).expect("child");
        if c.rule.is_none() {
            return "OPEN";
        }
        stack.extend(c.children.iter().copied());
    }
    "CLOSED"
}

/// The whole tree in pre-order.
pub fn tree_json(tree: &ProofTree) -> Value {
    let nodes: Vec<Value> = tree
        .preorder()
        .into_iter()
        .map(|id| {
            let n = tree.node(id).expect("listed");
            json!({
                "id": id,
                "parent": n.parent,
                "status": node_status(tree, id),
                "rule": n.rule.as_ref().map(|r| json!({
                    "label": r.label,
                    "reasoner": r.reasoner,
                    "contextDependent": r.context_dependent,
                    "input": r.input,
                })),
                "children": n.children,
                "sequent": sequent_json(&n.sequent),
            })
        })
        .collect();
    json!({
        "version": API_VERSION,
        "po": tree.po(),
        "status": tree.status(),
        "applications": tree.application_count(),
        "root": tree.root(),
        "nodes": nodes,
    })
}
