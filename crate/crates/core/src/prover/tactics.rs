//! Automatic tactics and the enumeration of applicable rules.
//!
//! Tactics only choose reasoner inputs; every step is one call to
//! [`ProofTree::apply`] and so one proof node.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::reasoner::{apply, ReasonerInput};
use super::sequent::Sequent;
use super::tree::{NodeId, ProofTree};
use crate::ast::{Formula, Kind, Position};
use crate::matcher::{match_pattern, Pattern};
use crate::theory::{Direction, RuleBase};

pub const DEFAULT_STEP_BUDGET: usize = 1000;

/// The step budget, overridden by `THEORIA_STEP_BUDGET`.
pub fn step_budget() -> usize {
    std::env::var("THEORIA_STEP_BUDGET").ok().and_then(|v| v.trim().parse().ok()).unwrap_or(DEFAULT_STEP_BUDGET)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AutoKind {
    Expand,
    Rewrite,
    Inference,
}

impl std::str::FromStr for AutoKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "expand" => Ok(AutoKind::Expand),
            "rewrite" => Ok(AutoKind::Rewrite),
            "inference" => Ok(AutoKind::Inference),
            other => Err(format!("unknown tactic `{other}`")),
        }
    }
}

/// The default order in which batch proving runs the tactics.
pub const DEFAULT_ORDER: [AutoKind; 3] = [AutoKind::Expand, AutoKind::Rewrite, AutoKind::Inference];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Step {
    pub node: NodeId,
    pub label: String,
    pub input: ReasonerInput,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TacticReport {
    pub applications: Vec<Step>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("step budget of {budget} exhausted after {} applications", .report.applications.len())]
pub struct BudgetExceeded {
    pub budget: usize,
    /// The steps made before the budget ran out; they stay in the tree.
    pub report: TacticReport,
}

fn core_steps() -> [ReasonerInput; 3] {
    [ReasonerInput::TrueGoal, ReasonerInput::Hyp, ReasonerInput::ConjSplit]
}

/// Targets in search order: the goal, then each hypothesis.
fn targets(seq: &Sequent) -> Vec<(Option<usize>, &Formula)> {
    let mut out = vec![(None, seq.goal())];
    out.extend(seq.hyps().iter().enumerate().map(|(i, h)| (Some(i), h)));
    out
}

fn expandable(f: &Formula, rules: &RuleBase) -> bool {
    matches!(f.kind(), Kind::Apply(n) if rules.operator(n).is_some())
}

/// Candidate inputs of one kind for `seq`, in rule order, then target
/// order, then leftmost-outermost position. Candidates may still fail.
fn candidates(seq: &Sequent, kind: AutoKind, rules: &RuleBase) -> Vec<ReasonerInput> {
    let mut out = Vec::new();
    match kind {
        AutoKind::Expand => {
            for (hyp, t) in targets(seq) {
                for position in t.positions() {
                    if expandable(t.at(&position).expect("own position"), rules) {
                        out.push(ReasonerInput::AutoExpand { hyp, position });
                    }
                }
            }
        }
        AutoKind::Rewrite => {
            for r in rules.rewrite_rules().filter(|r| r.automatic) {
                let pattern = Pattern::new(r.lhs.clone(), r.vars.keys().cloned(), r.type_params.iter().cloned());
                for (hyp, t) in targets(seq) {
                    for position in t.positions() {
                        if match_pattern(&pattern, t.at(&position).expect("own position")).is_some() {
                            out.push(ReasonerInput::AutoRewrite {
                                theory: r.theory.clone(),
                                rule: r.name.clone(),
                                hyp,
                                position,
                            });
                        }
                    }
                }
            }
        }
        AutoKind::Inference => {
            for r in rules.inference_rules().filter(|r| r.automatic) {
                let mk = |direction, hyp| ReasonerInput::AutoInference {
                    theory: r.theory.clone(),
                    rule: r.name.clone(),
                    direction,
                    hyp,
                };
                if r.applicability.allows(Direction::Backward) {
                    out.push(mk(Direction::Backward, None));
                }
                if r.applicability.allows(Direction::Forward) {
                    if r.givens.is_empty() {
                        out.push(mk(Direction::Forward, None));
                    }
                    for i in 0..seq.hyps().len() {
                        out.push(mk(Direction::Forward, Some(i)));
                    }
                }
            }
        }
    }
    out
}

/// An application that gives back the very same sequent does nothing.
fn progresses(seq: &Sequent, antecedents: &[Sequent]) -> bool {
    !(antecedents.len() == 1 && antecedents[0] == *seq)
}

/// The first input that makes progress at `seq`: the core closers, then
/// the automatic rules of `kind`.
fn first_step(seq: &Sequent, kind: AutoKind, rules: &RuleBase) -> Option<ReasonerInput> {
    core_steps()
        .into_iter()
        .chain(candidates(seq, kind, rules))
        .find(|input| apply(seq, input, rules).is_ok_and(|a| progresses(seq, &a)))
}

/// Repeatedly applies automatic rules of one kind to the pending leaves
/// until none applies or `budget` applications have been made.
pub fn auto_tactic(
    tree: &mut ProofTree,
    kind: AutoKind,
    rules: &RuleBase,
    budget: usize,
) -> Result<TacticReport, BudgetExceeded> {
    run(tree, &[kind], rules, budget)
}

/// Runs the tactics in `order` in rounds until a whole round makes no
/// progress. The budget covers every application of the run.
pub fn auto_all(
    tree: &mut ProofTree,
    order: &[AutoKind],
    rules: &RuleBase,
    budget: usize,
) -> Result<TacticReport, BudgetExceeded> {
    let mut report = TacticReport::default();
    loop {
        let before = report.applications.len();
        for &kind in order {
            let left = budget - report.applications.len();
            match run(tree, &[kind], rules, left) {
                Ok(r) => report.applications.extend(r.applications),
                Err(e) => {
                    report.applications.extend(e.report.applications);
                    return Err(BudgetExceeded { budget, report });
                }
            }
        }
        if report.applications.len() == before {
            return Ok(report);
        }
    }
}

fn run(
    tree: &mut ProofTree,
    kinds: &[AutoKind],
    rules: &RuleBase,
    budget: usize,
) -> Result<TacticReport, BudgetExceeded> {
    let mut report = TacticReport::default();
    let mut stuck: BTreeSet<NodeId> = BTreeSet::new();
    'search: loop {
        for id in tree.pending() {
            if stuck.contains(&id) {
                continue;
            }
            let seq = tree.node(id).expect("pending node").sequent.clone();
            let step = kinds.iter().find_map(|&k| first_step(&seq, k, rules));
            let Some(input) = step else {
                stuck.insert(id);
                continue;
            };
            if report.applications.len() >= budget {
                return Err(BudgetExceeded { budget, report });
            }
            tree.apply(id, input.clone(), rules).expect("step was checked");
            let label = tree.node(id).and_then(|n| n.rule.as_ref()).map(|r| r.label.clone()).unwrap_or_default();
            report.applications.push(Step { node: id, label, input });
            continue 'search;
        }
        return Ok(report);
    }
}

/// One way to apply a rule at a node, as offered to an interactive user.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Applicable {
    pub label: String,
    pub target: Target,
    pub input: ReasonerInput,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Target {
    Goal { position: Option<Position> },
    Hyp { index: usize, position: Option<Position> },
    Sequent,
}

/// Every rule application possible at `seq`: the core reasoners, rewrites
/// at every matching position of the goal and then each hypothesis,
/// backward and forward inferences, and definition expansions.
pub fn applicable_rules(seq: &Sequent, rules: &RuleBase) -> Vec<Applicable> {
    let mut inputs: Vec<ReasonerInput> = core_steps().into();
    for r in rules.rewrite_rules() {
        let pattern = Pattern::new(r.lhs.clone(), r.vars.keys().cloned(), r.type_params.iter().cloned());
        for (hyp, t) in targets(seq) {
            for position in t.positions() {
                if match_pattern(&pattern, t.at(&position).expect("own position")).is_some() {
                    inputs.push(ReasonerInput::ManualRewrite {
                        theory: r.theory.clone(),
                        rule: r.name.clone(),
                        hyp,
                        position,
                    });
                }
            }
        }
    }
    for r in rules.inference_rules() {
        let mk = |hyp| ReasonerInput::ManualInference { theory: r.theory.clone(), rule: r.name.clone(), hyp };
        inputs.push(mk(None));
        for i in 0..seq.hyps().len() {
            inputs.push(mk(Some(i)));
        }
    }
    for (hyp, t) in targets(seq) {
        for position in t.positions() {
            if expandable(t.at(&position).expect("own position"), rules) {
                inputs.push(ReasonerInput::ExpandDefinition { hyp, position });
            }
        }
    }
    inputs
        .into_iter()
        .filter(|input| apply(seq, input, rules).is_ok())
        .map(|input| Applicable { label: input.rule_label(seq), target: target_of(&input), input })
        .collect()
}

fn target_of(input: &ReasonerInput) -> Target {
    let at = |hyp: &Option<usize>, position: Option<Position>| match hyp {
        None => Target::Goal { position },
        Some(index) => Target::Hyp { index: *index, position },
    };
    match input {
        ReasonerInput::ManualRewrite { hyp, position, .. }
        | ReasonerInput::AutoRewrite { hyp, position, .. }
        | ReasonerInput::ExpandDefinition { hyp, position }
        | ReasonerInput::AutoExpand { hyp, position } => at(hyp, Some(position.clone())),
        ReasonerInput::ManualInference { hyp: Some(i), .. } | ReasonerInput::AutoInference { hyp: Some(i), .. } => {
            Target::Hyp { index: *i, position: None }
        }
        ReasonerInput::ManualInference { hyp: None, .. } | ReasonerInput::AutoInference { hyp: None, .. } => {
            Target::Goal { position: None }
        }
        ReasonerInput::TrueGoal | ReasonerInput::Hyp | ReasonerInput::ConjSplit => Target::Sequent,
    }
}
