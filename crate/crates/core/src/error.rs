use thiserror::Error;

use crate::ast::Position;

/// Errors raised while constructing formulas and factories.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum AstError {
    #[error("incompatible formula factories: conflicting definitions of `{0}`")]
    IncompatibleFactories(String),
    #[error("duplicate extension `{0}`")]
    DuplicateExtension(String),
    #[error("`{0}` is a reserved word")]
    ReservedName(String),
    #[error("invalid signature for `{name}`: {reason}")]
    InvalidSignature { name: String, reason: String },
    #[error("{node} expects {expected} operand(s), found {found}")]
    ArityMismatch { node: String, expected: String, found: usize },
    #[error("{node}: operand {index} must be {expected}")]
    KindMismatch { node: String, index: usize, expected: &'static str },
    #[error("unknown extension `{0}`")]
    UnknownExtension(String),
    #[error("invalid position {0}")]
    InvalidPosition(Position),
}

/// A source location, in code points.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SourceSpan {
    pub file: Option<String>,
    pub start: usize,
    pub end: usize,
}

impl std::fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.file {
            Some(file) => write!(f, "{file}:{}..{}", self.start, self.end),
            None => write!(f, "{}..{}", self.start, self.end),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at {span}: {message}")]
    Syntax { span: SourceSpan, message: String },
    #[error("unknown operator `{name}` at {span}")]
    UnknownOperator { name: String, span: SourceSpan },
    #[error("unknown type `{name}` at line {line}")]
    UnknownType { name: String, line: usize },
    #[error("duplicate name `{name}` at line {line}")]
    DuplicateName { name: String, line: usize },
    #[error("invalid notation for `{name}` at line {line}: {reason}")]
    InvalidNotation { name: String, line: usize, reason: String },
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
}

impl ParseError {
    pub(crate) fn syntax(start: usize, end: usize, message: impl Into<String>) -> Self {
        ParseError::Syntax { span: SourceSpan { file: None, start, end }, message: message.into() }
    }

    /// Re-anchors a formula-level error to a line of an enclosing file.
    pub(crate) fn at_line(self, line: usize) -> Self {
        match self {
            ParseError::Syntax { message, span } => {
                ParseError::Line { line, message: format!("{message} (column {})", span.start + 1) }
            }
            ParseError::UnknownOperator { name, .. } => {
                ParseError::Line { line, message: format!("unknown operator `{name}`") }
            }
            other => other,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TypeError {
    #[error("type error at {position}: expected {expected}, found {found}")]
    Mismatch { position: Position, expected: String, found: String },
    #[error("cannot infer the type at {position}")]
    UnresolvedTypeParam { position: Position },
    #[error("unknown type `{0}`")]
    UnknownType(String),
    #[error("type argument at {position} is not a type")]
    NotAType { position: Position },
    #[error(transparent)]
    Ast(#[from] AstError),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SpecialisationError {
    #[error("inconsistent specialisation of `{0}`")]
    InconsistentSpecialisation(String),
    #[error("type parameter `{0}` names a given type")]
    GivenTypeParameter(String),
    #[error(transparent)]
    Ast(#[from] AstError),
}
