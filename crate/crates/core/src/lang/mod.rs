//! Concrete syntax: lexing, parsing and printing of formulas.

mod lexer;
mod parser;
mod printer;
mod sequent_file;
mod sexpr;
mod theory_file;

pub use parser::{expr_to_type, parse_formula, parse_type};
pub use printer::{print_formula, PrintMode};
pub use sequent_file::{parse_sequents, print_sequents, sequent_uses, SequentDecl, SequentFile};
pub use sexpr::{from_sexpr, to_sexpr, type_from_sexpr, type_to_sexpr};
pub(crate) use theory_file::split_top;
pub use theory_file::{parse_theory, print_theory, theory_imports};
