//! Stored proofs: a versioned JSON document holding a proof tree with
//! formulas in canonical prefix form, plus the signatures of every
//! extension the tree mentions.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::reasoner::ReasonerInput;
use super::sequent::Sequent;
use super::tree::{NodeId, ProofTree, RuleApplication};
use crate::ast::Formula;
use crate::factory::{first_conflict, ExtensionSignature, FormulaFactory};
use crate::lang::{from_sexpr, to_sexpr};
use crate::theory::RuleBase;

pub const PROOF_FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StoredProof {
    pub version: u32,
    pub po: String,
    /// Signatures of the extensions used anywhere in the tree.
    pub factory: Vec<ExtensionSignature>,
    /// Pre-order; the first node is the root.
    pub nodes: Vec<StoredNode>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StoredNode {
    pub id: NodeId,
    pub hyps: Vec<String>,
    pub goal: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rule: Option<StoredRule>,
    pub children: Vec<NodeId>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub stale: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StoredRule {
    pub reasoner: String,
    pub label: String,
    pub context_dependent: bool,
    pub input: ReasonerInput,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", content = "reason", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ReuseVerdict {
    Reusable,
    NeedsReplay,
    Incompatible(String),
}

impl std::fmt::Display for ReuseVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ReuseVerdict::Reusable => f.write_str("REUSABLE"),
            ReuseVerdict::NeedsReplay => f.write_str("NEEDS_REPLAY"),
            ReuseVerdict::Incompatible(r) => write!(f, "INCOMPATIBLE({r:?})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("corrupt proof: {0}")]
pub struct CorruptProof(pub String);

fn corrupt(e: impl std::fmt::Display) -> CorruptProof {
    CorruptProof(e.to_string())
}

impl StoredProof {
    pub fn from_tree(tree: &ProofTree) -> StoredProof {
        let order = tree.preorder();
        let mut used = BTreeSet::new();
        for id in &order {
            for f in tree.node(*id).expect("listed").sequent.formulas() {
                used.extend(f.used_extensions());
            }
        }
        let ff = tree.root_sequent().factory().clone();
        let mut factory_ff = ff.clone();
        for id in &order {
            factory_ff = crate::factory::factory_union(&factory_ff, tree.node(*id).expect("listed").sequent.factory())
                .unwrap_or(factory_ff);
        }
        let factory = used.iter().filter_map(|n| factory_ff.extension(n).cloned()).collect();
        let nodes = order
            .iter()
            .map(|id| {
                let n = tree.node(*id).expect("listed");
                StoredNode {
                    id: *id,
                    hyps: n.sequent.hyps().iter().map(to_sexpr).collect(),
                    goal: to_sexpr(n.sequent.goal()),
                    rule: n.rule.as_ref().map(|r| StoredRule {
                        reasoner: r.reasoner.clone(),
                        label: r.label.clone(),
                        context_dependent: r.context_dependent,
                        input: r.input.clone(),
                    }),
                    children: n.children.clone(),
                    stale: n.stale,
                }
            })
            .collect();
        StoredProof { version: PROOF_FORMAT_VERSION, po: tree.po().to_string(), factory, nodes }
    }

    /// Pretty JSON with a trailing newline; equal proofs give equal bytes.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("proofs serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<StoredProof, CorruptProof> {
        let p: StoredProof = serde_json::from_str(text).map_err(corrupt)?;
        if p.version != PROOF_FORMAT_VERSION {
            return Err(CorruptProof(format!("unsupported version {}", p.version)));
        }
        if p.nodes.is_empty() {
            return Err(CorruptProof("no root node".into()));
        }
        Ok(p)
    }

    /// The factory rebuilt from the stored signatures alone.
    pub fn snapshot_factory(&self) -> Result<Arc<FormulaFactory>, CorruptProof> {
        FormulaFactory::new(self.factory.iter().cloned()).map_err(corrupt)
    }

    fn sequent(&self, n: &StoredNode, ff: &Arc<FormulaFactory>) -> Result<Sequent, CorruptProof> {
        let hyps = n.hyps.iter().map(|h| from_sexpr(h, ff)).collect::<Result<Vec<Formula>, _>>().map_err(corrupt)?;
        let goal = from_sexpr(&n.goal, ff).map_err(corrupt)?;
        Sequent::new(hyps, goal).map_err(corrupt)
    }

    pub fn root_sequent(&self) -> Result<Sequent, CorruptProof> {
        self.sequent(&self.nodes[0], &self.snapshot_factory()?)
    }

    /// Rebuilds the stored tree as it was saved, without consulting any
    /// theory.
    pub fn to_tree(&self) -> Result<ProofTree, CorruptProof> {
        let ff = self.snapshot_factory()?;
        let by_id: BTreeMap<NodeId, &StoredNode> = self.nodes.iter().map(|n| (n.id, n)).collect();
        let mut tree = ProofTree::new(self.po.clone(), self.sequent(&self.nodes[0], &ff)?);
        let mut stack = vec![(self.nodes[0].id, tree.root())];
        while let Some((sid, tid)) = stack.pop() {
            let n = by_id.get(&sid).ok_or_else(|| CorruptProof(format!("missing node {sid}")))?;
            if n.stale {
                tree.mark_stale(tid);
            }
            let Some(r) = &n.rule else { continue };
            let kids = n
                .children
                .iter()
                .map(|c| {
                    let c = by_id.get(c).ok_or_else(|| CorruptProof(format!("missing node {c}")))?;
                    self.sequent(c, &ff)
                })
                .collect::<Result<Vec<_>, _>>()?;
            let app = RuleApplication {
                input: r.input.clone(),
                reasoner: r.reasoner.clone(),
                label: r.label.clone(),
                context_dependent: r.context_dependent,
            };
            let new = tree.attach(tid, app, kids);
            stack.extend(n.children.iter().copied().zip(new));
        }
        Ok(tree)
    }
}

/// Whether a stored proof of `seq` can be trusted against `rules`.
pub fn check_reusable(p: &StoredProof, seq: &Sequent, rules: &RuleBase) -> Result<ReuseVerdict, CorruptProof> {
    let snapshot = p.snapshot_factory()?;
    for current in [seq.factory(), rules.factory()] {
        if let Some(name) = first_conflict(&snapshot, current) {
            return Ok(ReuseVerdict::Incompatible(name));
        }
    }
    if p.root_sequent()? != *seq {
        return Ok(ReuseVerdict::Incompatible("root sequent".into()));
    }
    if p.nodes.iter().any(|n| n.rule.as_ref().is_some_and(|r| r.context_dependent)) {
        Ok(ReuseVerdict::NeedsReplay)
    } else {
        Ok(ReuseVerdict::Reusable)
    }
}

/// Re-applies every stored reasoner input to `seq` against `rules`. A node
/// whose input no longer applies, or yields a different number of
/// antecedents, is left pending and marked stale.
pub fn replay(p: &StoredProof, seq: &Sequent, rules: &RuleBase) -> Result<ProofTree, CorruptProof> {
    let by_id: BTreeMap<NodeId, &StoredNode> = p.nodes.iter().map(|n| (n.id, n)).collect();
    let mut tree = ProofTree::new(p.po.clone(), seq.clone());
    let mut stack = vec![(p.nodes[0].id, tree.root())];
    while let Some((sid, tid)) = stack.pop() {
        let n = by_id.get(&sid).ok_or_else(|| CorruptProof(format!("missing node {sid}")))?;
        let Some(r) = &n.rule else {
            if n.stale {
                tree.mark_stale(tid);
            }
            continue;
        };
        match tree.apply(tid, r.input.clone(), rules) {
            Ok(kids) if kids.len() == n.children.len() => {
                stack.extend(n.children.iter().copied().zip(kids));
            }
            Ok(_) => {
                tree.prune(tid).expect("node exists");
                tree.mark_stale(tid);
            }
            Err(_) => tree.mark_stale(tid),
        }
    }
    Ok(tree)
}
