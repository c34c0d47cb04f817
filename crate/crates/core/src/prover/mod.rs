//! Sequents, proof trees, reasoners and tactics, and stored proofs.

mod reasoner;
mod sequent;
mod store;
mod tactics;
mod tree;
mod view;
mod wd;

pub use reasoner::{apply, ReasonerError, ReasonerInput};
pub use sequent::{Sequent, SequentSyntaxError};
pub use store::{
    check_reusable, replay, CorruptProof, ReuseVerdict, StoredNode, StoredProof, StoredRule, PROOF_FORMAT_VERSION,
};
pub use tactics::{
    applicable_rules, auto_all, auto_tactic, step_budget, Applicable, AutoKind, BudgetExceeded, Step, TacticReport,
    Target, DEFAULT_ORDER, DEFAULT_STEP_BUDGET,
};
pub use tree::{NodeId, ProofNode, ProofStatus, ProofTree, ProverError, RuleApplication};
pub use view::{formula_json, sequent_json, tree_json, API_VERSION};
pub use wd::{wd, wd_of_match};
