//! Theories: datatypes, operators and rules that extend the core language.

mod compile;
mod validate;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::ast::{Formula, Type};
use crate::factory::{DatatypeSig, OperatorSig};

pub(crate) use compile::instantiate;
pub use compile::{
    compile, compile_factory, expand_definition_formula, generated_axioms, theory_extensions, CompiledDefinition,
    CompiledInference, CompiledOperator, CompiledRewrite, CompiledTheory, ExpandError, RuleBase, TheoryError,
};
pub use validate::{validate_theory, Diagnostic};

/// A parsed theory, in declaration order within each kind of item.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Theory {
    pub name: String,
    pub type_params: Vec<String>,
    pub imports: Vec<String>,
    pub axiomatic_types: Vec<String>,
    pub datatypes: Vec<DatatypeSig>,
    pub operators: Vec<OperatorDef>,
    pub rewrite_rules: Vec<RewriteRule>,
    pub inference_rules: Vec<InferenceRule>,
    pub axioms: Vec<Axiom>,
}

impl Theory {
    pub fn new(name: impl Into<String>) -> Self {
        Theory { name: name.into(), ..Default::default() }
    }

    pub fn operator(&self, name: &str) -> Option<&OperatorDef> {
        self.operators.iter().find(|o| o.sig.name == name)
    }

    pub fn rewrite_rule(&self, name: &str) -> Option<&RewriteRule> {
        self.rewrite_rules.iter().find(|r| r.name == name)
    }

    pub fn inference_rule(&self, name: &str) -> Option<&InferenceRule> {
        self.inference_rules.iter().find(|r| r.name == name)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OperatorDef {
    pub sig: OperatorSig,
    pub definition: Definition,
    /// Well-definedness condition over the arguments.
    pub wd: Option<Formula>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Definition {
    Direct(Formula),
    Inductive {
        scrutinee: String,
        cases: Vec<InductiveCase>,
    },
    /// No body; the named theory axioms characterise the operator.
    Axiomatic {
        axioms: Vec<String>,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct InductiveCase {
    pub constructor: String,
    pub vars: Vec<String>,
    pub body: Formula,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RewriteCase {
    pub condition: Formula,
    pub rhs: Formula,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RewriteRule {
    pub name: String,
    pub vars: Vec<(String, Type)>,
    pub lhs: Formula,
    pub cases: Vec<RewriteCase>,
    pub complete: bool,
    pub automatic: bool,
}

impl RewriteRule {
    pub fn is_conditional(&self) -> bool {
        !(self.cases.len() == 1 && self.cases[0].condition.is_true())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Applicability {
    Forward,
    Backward,
    #[default]
    Both,
}

impl Applicability {
    pub fn allows(self, direction: Direction) -> bool {
        matches!(
            (self, direction),
            (Applicability::Both, _)
                | (Applicability::Forward, Direction::Forward)
                | (Applicability::Backward, Direction::Backward)
        )
    }
}

impl fmt::Display for Applicability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Applicability::Forward => "forward",
            Applicability::Backward => "backward",
            Applicability::Both => "both",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Forward,
    Backward,
}

#[derive(Clone, Debug, PartialEq)]
pub struct InferenceRule {
    pub name: String,
    pub vars: Vec<(String, Type)>,
    pub givens: Vec<Formula>,
    pub infer: Formula,
    pub applicability: Applicability,
    pub automatic: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Axiom {
    pub name: String,
    pub predicate: Formula,
}
