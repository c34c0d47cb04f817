//! Single-rule reasoners. Each application of a reasoner to a sequent
//! yields the antecedent sequents that replace it.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::sequent::Sequent;
use super::wd::{close_over, wd, wd_of_match};
use crate::ast::{Formula, Kind, Position};
use crate::error::{AstError, SpecialisationError};
use crate::matcher::{match_pattern, Pattern};
use crate::theory::{expand_definition_formula, CompiledInference, CompiledRewrite, Direction, ExpandError, RuleBase};
use crate::typing::{specialise, Specialisation, TypeEnvironment};

/// What a proof node records about the reasoner that produced it: enough
/// to apply it again.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "reasoner")]
pub enum ReasonerInput {
    #[serde(rename = "core.trueGoal")]
    TrueGoal,
    #[serde(rename = "core.hyp")]
    Hyp,
    #[serde(rename = "core.conjSplit")]
    ConjSplit,
    #[serde(rename = "theory.manualRewrite")]
    ManualRewrite { theory: String, rule: String, hyp: Option<usize>, position: Position },
    /// `hyp` is the application hypothesis of a forward inference, or
    /// `None` for a backward one.
    #[serde(rename = "theory.manualInference")]
    ManualInference { theory: String, rule: String, hyp: Option<usize> },
    #[serde(rename = "theory.autoRewrite")]
    AutoRewrite { theory: String, rule: String, hyp: Option<usize>, position: Position },
    #[serde(rename = "theory.autoInference")]
    AutoInference { theory: String, rule: String, direction: Direction, hyp: Option<usize> },
    #[serde(rename = "theory.expandDefinition")]
    ExpandDefinition { hyp: Option<usize>, position: Position },
    #[serde(rename = "theory.autoExpand")]
    AutoExpand { hyp: Option<usize>, position: Position },
}

impl ReasonerInput {
    pub fn reasoner_id(&self) -> &'static str {
        match self {
            ReasonerInput::TrueGoal => "core.trueGoal",
            ReasonerInput::Hyp => "core.hyp",
            ReasonerInput::ConjSplit => "core.conjSplit",
            ReasonerInput::ManualRewrite { .. } => "theory.manualRewrite",
            ReasonerInput::ManualInference { .. } => "theory.manualInference",
            ReasonerInput::AutoRewrite { .. } => "theory.autoRewrite",
            ReasonerInput::AutoInference { .. } => "theory.autoInference",
            ReasonerInput::ExpandDefinition { .. } => "theory.expandDefinition",
            ReasonerInput::AutoExpand { .. } => "theory.autoExpand",
        }
    }

    /// Theory reasoners depend on rule bodies that may change after the
    /// proof was made.
    pub fn is_context_dependent(&self) -> bool {
        !matches!(self, ReasonerInput::TrueGoal | ReasonerInput::Hyp | ReasonerInput::ConjSplit)
    }

    /// The one rule this application uses, as `Theory.rule` for theory
    /// rules.
    pub fn rule_label(&self, seq: &Sequent) -> String {
        match self {
            ReasonerInput::TrueGoal => "trueGoal".into(),
            ReasonerInput::Hyp => "hyp".into(),
            ReasonerInput::ConjSplit => "conjSplit".into(),
            ReasonerInput::ManualRewrite { theory, rule, .. }
            | ReasonerInput::ManualInference { theory, rule, .. }
            | ReasonerInput::AutoRewrite { theory, rule, .. }
            | ReasonerInput::AutoInference { theory, rule, .. } => format!("{theory}.{rule}"),
            ReasonerInput::ExpandDefinition { hyp, position } | ReasonerInput::AutoExpand { hyp, position } => {
                let op = target(seq, *hyp)
                    .ok()
                    .and_then(|t| t.at(position))
                    .and_then(|f| match f.kind() {
                        Kind::Apply(n) => Some(n.clone()),
                        _ => None,
                    })
                    .unwrap_or_default();
                format!("expand {op}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReasonerError {
    #[error("rule `{0}` is not applicable")]
    RuleNotApplicable(String),
    #[error("no rule `{rule}` in theory `{theory}`")]
    UnknownRule { theory: String, rule: String },
    #[error("rule `{rule}` cannot be applied {direction:?}")]
    DirectionNotAllowed { rule: String, direction: Direction },
    #[error("invalid position {0}")]
    InvalidPosition(Position),
    #[error("no hypothesis {0}")]
    InvalidHypothesis(usize),
    #[error("`{0}` cannot be expanded")]
    NotExpandable(String),
    #[error(transparent)]
    Ast(#[from] AstError),
}

impl From<SpecialisationError> for ReasonerError {
    fn from(e: SpecialisationError) -> Self {
        ReasonerError::RuleNotApplicable(e.to_string())
    }
}

fn target(seq: &Sequent, hyp: Option<usize>) -> Result<&Formula, ReasonerError> {
    match hyp {
        None => Ok(seq.goal()),
        Some(i) => seq.hyps().get(i).ok_or(ReasonerError::InvalidHypothesis(i)),
    }
}

fn retarget(seq: &Sequent, hyp: Option<usize>, new: Formula, extra: Option<Formula>) -> Result<Sequent, AstError> {
    let s = match hyp {
        None => seq.with_goal(new)?,
        Some(i) => seq.with_hyp_replaced(i, new)?,
    };
    match extra {
        Some(h) if !h.is_true() => s.with_hyps([h]),
        _ => Ok(s),
    }
}

fn inst(f: &Formula, s: &Specialisation) -> Result<Formula, ReasonerError> {
    Ok(specialise(f, s, &TypeEnvironment::new())?)
}

/// Applies one reasoner to `seq`.
pub fn apply(seq: &Sequent, input: &ReasonerInput, rules: &RuleBase) -> Result<Vec<Sequent>, ReasonerError> {
    match input {
        ReasonerInput::TrueGoal => {
            if seq.goal().is_true() {
                Ok(Vec::new())
            } else {
                Err(ReasonerError::RuleNotApplicable("trueGoal".into()))
            }
        }
        ReasonerInput::Hyp => {
            if seq.hyps().contains(seq.goal()) {
                Ok(Vec::new())
            } else {
                Err(ReasonerError::RuleNotApplicable("hyp".into()))
            }
        }
        ReasonerInput::ConjSplit => match seq.goal().kind() {
            Kind::And => {
                Ok(seq.goal().children().iter().map(|c| seq.with_goal(c.clone())).collect::<Result<_, _>>()?)
            }
            _ => Err(ReasonerError::RuleNotApplicable("conjSplit".into())),
        },
        ReasonerInput::ManualRewrite { theory, rule, hyp, position } => {
            let r = rules.rewrite_rule(theory, rule).ok_or_else(|| unknown(theory, rule))?;
            rewrite(seq, r, *hyp, position, rules)
        }
        ReasonerInput::AutoRewrite { theory, rule, hyp, position } => {
            let r = rules.rewrite_rule(theory, rule).filter(|r| r.automatic).ok_or_else(|| unknown(theory, rule))?;
            rewrite(seq, r, *hyp, position, rules)
        }
        ReasonerInput::ManualInference { theory, rule, hyp } => {
            let r = rules.inference_rule(theory, rule).ok_or_else(|| unknown(theory, rule))?;
            let direction = if hyp.is_some() || (r.givens.is_empty() && !r.applicability.allows(Direction::Backward)) {
                Direction::Forward
            } else {
                Direction::Backward
            };
            inference(seq, r, direction, *hyp, rules)
        }
        ReasonerInput::AutoInference { theory, rule, direction, hyp } => {
            let r = rules.inference_rule(theory, rule).filter(|r| r.automatic).ok_or_else(|| unknown(theory, rule))?;
            inference(seq, r, *direction, *hyp, rules)
        }
        ReasonerInput::ExpandDefinition { hyp, position } | ReasonerInput::AutoExpand { hyp, position } => {
            expand(seq, *hyp, position, rules)
        }
    }
}

fn unknown(theory: &str, rule: &str) -> ReasonerError {
    ReasonerError::UnknownRule { theory: theory.into(), rule: rule.into() }
}

fn rewrite(
    seq: &Sequent,
    r: &CompiledRewrite,
    hyp: Option<usize>,
    position: &Position,
    rules: &RuleBase,
) -> Result<Vec<Sequent>, ReasonerError> {
    let t = target(seq, hyp)?;
    let sub = t.at(position).ok_or_else(|| ReasonerError::InvalidPosition(position.clone()))?;
    let pattern = Pattern::new(r.lhs.clone(), r.vars.keys().cloned(), r.type_params.iter().cloned());
    let s = match_pattern(&pattern, sub).ok_or_else(|| ReasonerError::RuleNotApplicable(r.name.clone()))?;
    let binders = t.binders_above(position);
    let conditional = !(r.cases.len() == 1 && r.cases[0].condition.is_true());

    let mut out = Vec::new();
    if let Some(w) = wd_of_match(&s, rules) {
        out.push(seq.with_goal(close_over(w, &binders))?);
    }
    let mut conditions = Vec::new();
    for case in &r.cases {
        let cond = inst(&case.condition, &s)?;
        if conditional && binders.iter().any(|b| cond.has_free(&b.name)) {
            return Err(ReasonerError::RuleNotApplicable(r.name.clone()));
        }
        let rhs = inst(&case.rhs, &s)?;
        let rewritten = t.replace_at(position, rhs)?;
        out.push(retarget(seq, hyp, rewritten, Some(cond.clone()))?);
        conditions.push(cond);
    }
    if !r.complete {
        let ff = seq.factory().clone();
        out.push(seq.with_goal(Formula::disj(&ff, conditions)?)?);
    }
    Ok(out)
}

fn inference(
    seq: &Sequent,
    r: &CompiledInference,
    direction: Direction,
    hyp: Option<usize>,
    rules: &RuleBase,
) -> Result<Vec<Sequent>, ReasonerError> {
    if !r.applicability.allows(direction) {
        return Err(ReasonerError::DirectionNotAllowed { rule: r.name.clone(), direction });
    }
    let not_applicable = || ReasonerError::RuleNotApplicable(r.name.clone());
    let pattern = |f: &Formula| Pattern::new(f.clone(), r.vars.keys().cloned(), r.type_params.iter().cloned());
    match direction {
        Direction::Backward => {
            if hyp.is_some() {
                return Err(not_applicable());
            }
            let s = match_pattern(&pattern(&r.infer), seq.goal()).ok_or_else(not_applicable)?;
            let mut out = Vec::new();
            if let Some(w) = wd_of_match(&s, rules) {
                out.push(seq.with_goal(w)?);
            }
            for g in &r.givens {
                out.push(seq.with_goal(inst(g, &s)?)?);
            }
            Ok(out)
        }
        Direction::Forward => {
            let s = match (hyp, r.givens.first()) {
                (Some(i), Some(first)) => {
                    let h = seq.hyps().get(i).ok_or(ReasonerError::InvalidHypothesis(i))?;
                    match_pattern(&pattern(first), h).ok_or_else(not_applicable)?
                }
                (None, None) => {
                    let closed = r.infer.free_idents().is_empty() && r.infer.types().iter().all(|t| !t.has_params());
                    if !closed {
                        return Err(not_applicable());
                    }
                    Specialisation::new()
                }
                _ => return Err(not_applicable()),
            };
            let mut out = Vec::new();
            if let Some(w) = wd_of_match(&s, rules) {
                out.push(seq.with_goal(w)?);
            }
            for g in r.givens.iter().skip(1) {
                let g = inst(g, &s)?;
                if !seq.hyps().contains(&g) {
                    out.push(seq.with_goal(g)?);
                }
            }
            out.push(seq.with_hyps([inst(&r.infer, &s)?])?);
            Ok(out)
        }
    }
}

fn expand(
    seq: &Sequent,
    hyp: Option<usize>,
    position: &Position,
    rules: &RuleBase,
) -> Result<Vec<Sequent>, ReasonerError> {
    let t = target(seq, hyp)?;
    let sub = t.at(position).ok_or_else(|| ReasonerError::InvalidPosition(position.clone()))?;
    let expanded = expand_definition_formula(sub, rules).map_err(|e| match e {
        ExpandError::NotExpandable(n) => ReasonerError::NotExpandable(n),
        ExpandError::Specialisation(e) => ReasonerError::NotExpandable(e.to_string()),
    })?;
    let mut out = Vec::new();
    let args: Vec<Formula> = sub.children().iter().map(|c| wd(c, rules)).filter(|w| !w.is_true()).collect();
    if !args.is_empty() {
        let w = Formula::conj(seq.factory(), args)?;
        out.push(seq.with_goal(close_over(w, &t.binders_above(position)))?);
    }
    out.push(retarget(seq, hyp, t.replace_at(position, expanded)?, None)?);
    Ok(out)
}
