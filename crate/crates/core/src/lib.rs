//! An extensible proof kernel for a small Event-B-style mathematical
//! language: typed formula trees, user theories that add datatypes,
//! operators and rules, and a sequent prover whose proofs can be stored and
//! checked for reuse.

pub mod ast;
pub mod error;
pub mod factory;
pub mod lang;
pub mod matcher;
pub mod prover;
pub mod theory;
pub mod typing;
pub mod workspace;

pub use ast::{Binder, Formula, Kind, Position, Type};
pub use error::{AstError, ParseError, SpecialisationError, TypeError};
pub use factory::{ExtensionSignature, FactoryId, FormulaFactory};
