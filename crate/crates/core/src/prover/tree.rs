use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::reasoner::{apply, ReasonerError, ReasonerInput};
use super::sequent::Sequent;
use crate::theory::RuleBase;

pub type NodeId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum ProofStatus {
    Open,
    Closed,
    Stale,
}

impl std::fmt::Display for ProofStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ProofStatus::Open => "OPEN",
            ProofStatus::Closed => "CLOSED",
            ProofStatus::Stale => "STALE",
        })
    }
}

/// One reasoner applied with one rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleApplication {
    pub input: ReasonerInput,
    pub reasoner: String,
    pub label: String,
    pub context_dependent: bool,
}

#[derive(Clone, Debug)]
pub struct ProofNode {
    pub sequent: Sequent,
    pub parent: Option<NodeId>,
    /// `None` while the node is pending.
    pub rule: Option<RuleApplication>,
    pub children: Vec<NodeId>,
    /// Set on a pending node whose stored rule no longer replays.
    pub stale: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProverError {
    #[error("no node {0}")]
    UnknownNode(NodeId),
    #[error("node {0} is not pending")]
    NotPending(NodeId),
    #[error(transparent)]
    Reasoner(#[from] ReasonerError),
}

#[derive(Clone, Debug)]
pub struct ProofTree {
    po: String,
    nodes: BTreeMap<NodeId, ProofNode>,
    next_id: NodeId,
}

impl ProofTree {
    /// A tree holding only its pending root, for the proof obligation `po`.
    pub fn new(po: impl Into<String>, root: Sequent) -> Self {
        let mut nodes = BTreeMap::new();
        nodes.insert(0, ProofNode { sequent: root, parent: None, rule: None, children: Vec::new(), stale: false });
        ProofTree { po: po.into(), nodes, next_id: 1 }
    }

    pub fn po(&self) -> &str {
        &self.po
    }

    pub fn root(&self) -> NodeId {
        0
    }

    pub fn root_sequent(&self) -> &Sequent {
        &self.nodes[&0].sequent
    }

    pub fn node(&self, id: NodeId) -> Option<&ProofNode> {
        self.nodes.get(&id)
    }

    pub fn nodes(&self) -> impl Iterator<Item = (NodeId, &ProofNode)> {
        self.nodes.iter().map(|(k, v)| (*k, v))
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Node ids in pre-order from the root.
    pub fn preorder(&self) -> Vec<NodeId> {
        let mut out = Vec::new();
        let mut stack = vec![0];
        while let Some(id) = stack.pop() {
            out.push(id);
            stack.extend(self.nodes[&id].children.iter().rev());
        }
        out
    }

    /// Pending leaves, leftmost first.
    pub fn pending(&self) -> Vec<NodeId> {
        self.preorder().into_iter().filter(|id| self.nodes[id].rule.is_none()).collect()
    }

    pub fn status(&self) -> ProofStatus {
        let pending = self.pending();
        if pending.iter().any(|id| self.nodes[id].stale) {
            ProofStatus::Stale
        } else if pending.is_empty() {
            ProofStatus::Closed
        } else {
            ProofStatus::Open
        }
    }

    pub fn application_count(&self) -> usize {
        self.nodes.values().filter(|n| n.rule.is_some()).count()
    }

    /// Applies one reasoner at a pending node and returns the new children.
    /// On failure the tree is unchanged.
    pub fn apply(&mut self, id: NodeId, input: ReasonerInput, rules: &RuleBase) -> Result<Vec<NodeId>, ProverError> {
        let node = self.nodes.get(&id).ok_or(ProverError::UnknownNode(id))?;
        if node.rule.is_some() {
            return Err(ProverError::NotPending(id));
        }
        let antecedents = apply(&node.sequent, &input, rules)?;
        let application = RuleApplication {
            reasoner: input.reasoner_id().to_string(),
            label: input.rule_label(&node.sequent),
            context_dependent: input.is_context_dependent(),
            input,
        };
        Ok(self.attach(id, application, antecedents))
    }

    pub(crate) fn attach(
        &mut self,
        id: NodeId,
        application: RuleApplication,
        antecedents: Vec<Sequent>,
    ) -> Vec<NodeId> {
        let mut children = Vec::new();
        for sequent in antecedents {
            let cid = self.next_id;
            self.next_id += 1;
            self.nodes
                .insert(cid, ProofNode { sequent, parent: Some(id), rule: None, children: Vec::new(), stale: false });
            children.push(cid);
        }
        let node = self.nodes.get_mut(&id).expect("node exists");
        node.rule = Some(application);
        node.children = children.clone();
        node.stale = false;
        children
    }

    /// Removes everything below `id` and makes it pending again.
    pub fn prune(&mut self, id: NodeId) -> Result<(), ProverError> {
        let node = self.nodes.get_mut(&id).ok_or(ProverError::UnknownNode(id))?;
        node.rule = None;
        node.stale = false;
        let mut stack = std::mem::take(&mut node.children);
        while let Some(c) = stack.pop() {
            if let Some(n) = self.nodes.remove(&c) {
                stack.extend(n.children);
            }
        }
        self.next_id = self.nodes.keys().max().map_or(0, |m| m + 1);
        Ok(())
    }

    pub(crate) fn mark_stale(&mut self, id: NodeId) {
        if let Some(n) = self.nodes.get_mut(&id) {
            n.stale = true;
        }
    }
}
