use std::fmt;
use std::sync::Arc;

use crate::ast::{Formula, Type};
use crate::error::ParseError;
use crate::error::{AstError, TypeError};
use crate::factory::{factory_union, FormulaFactory};
use crate::lang::split_top;
use crate::lang::{parse_formula, SequentDecl};
use crate::typing::{typecheck_all, TypeEnvironment};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SequentSyntaxError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Type(#[from] TypeError),
}

/// Hypotheses ⊢ goal. Hypotheses keep their first-insertion order and hold
/// no duplicates.
#[derive(Clone, Debug)]
pub struct Sequent {
    hyps: Vec<Formula>,
    goal: Formula,
    factory: Arc<FormulaFactory>,
}

impl PartialEq for Sequent {
    fn eq(&self, other: &Self) -> bool {
        self.hyps == other.hyps && self.goal == other.goal
    }
}

impl Eq for Sequent {}

impl Sequent {
    pub fn new(hyps: impl IntoIterator<Item = Formula>, goal: Formula) -> Result<Sequent, AstError> {
        let mut factory = goal.factory().clone();
        let mut out: Vec<Formula> = Vec::new();
        for h in hyps {
            factory = factory_union(&factory, h.factory())?;
            if !out.contains(&h) {
                out.push(h);
            }
        }
        Ok(Sequent { hyps: out, goal, factory })
    }

    /// Types a parsed sequent declaration. Given sets become types; the
    /// remaining free identifiers are inferred.
    pub fn from_decl(decl: &SequentDecl) -> Result<Sequent, TypeError> {
        let mut env = TypeEnvironment::new();
        for s in &decl.sets {
            env = env.with_given_set(s.clone());
        }
        for (v, t) in &decl.vars {
            env = env.with_var(v.clone(), t.clone());
        }
        let mut fs: Vec<Formula> = decl.hyps.iter().map(|(_, h)| h.clone()).collect();
        fs.push(decl.goal.clone());
        let (mut typed, _) = typecheck_all(&fs, &env)?;
        let goal = typed.pop().expect("goal");
        Ok(Sequent::new(typed, goal)?)
    }

    /// Parses `h₁, …, hₙ ⊢ goal` (or `|-`), inferring the types of free
    /// identifiers.
    pub fn parse(text: &str, ff: &Arc<FormulaFactory>) -> Result<Sequent, SequentSyntaxError> {
        let (hyps, goal) = text.split_once('⊢').or_else(|| text.split_once("|-")).unwrap_or(("", text));
        let mut fs = Vec::new();
        for h in split_top(hyps).into_iter().filter(|h| !h.is_empty()) {
            fs.push(parse_formula(h, ff)?);
        }
        fs.push(parse_formula(goal.trim(), ff)?);
        let (mut typed, _) = typecheck_all(&fs, &TypeEnvironment::new())?;
        let goal = typed.pop().expect("goal");
        Ok(Sequent::new(typed, goal).map_err(TypeError::from)?)
    }

    pub fn hyps(&self) -> &[Formula] {
        &self.hyps
    }

    pub fn goal(&self) -> &Formula {
        &self.goal
    }

    pub fn factory(&self) -> &Arc<FormulaFactory> {
        &self.factory
    }

    pub fn with_goal(&self, goal: Formula) -> Result<Sequent, AstError> {
        Sequent::new(self.hyps.iter().cloned(), goal)
    }

    pub fn with_hyps(&self, extra: impl IntoIterator<Item = Formula>) -> Result<Sequent, AstError> {
        Sequent::new(self.hyps.iter().cloned().chain(extra), self.goal.clone())
    }

    /// Replaces hypothesis `i`, keeping its place.
    pub fn with_hyp_replaced(&self, i: usize, new: Formula) -> Result<Sequent, AstError> {
        let mut hyps = self.hyps.clone();
        hyps[i] = new;
        Sequent::new(hyps, self.goal.clone())
    }

    /// Every formula of the sequent, hypotheses first.
    pub fn formulas(&self) -> impl Iterator<Item = &Formula> {
        self.hyps.iter().chain(std::iter::once(&self.goal))
    }

    /// Types of the free identifiers, taken from their first typed
    /// occurrence.
    pub fn free_idents(&self) -> Vec<(String, Type)> {
        let mut out: Vec<(String, Type)> = Vec::new();
        for f in self.formulas() {
            for (n, t) in f.free_idents() {
                if let Some(t) = t {
                    if !out.iter().any(|(m, _)| *m == n) {
                        out.push((n, t));
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, h) in self.hyps.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{h}")?;
        }
        if !self.hyps.is_empty() {
            f.write_str(" ")?;
        }
        write!(f, "⊢ {}", self.goal)
    }
}
