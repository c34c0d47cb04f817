//! Pratt parser for formulas.
//!
//! Binding powers, loosest first: `⇔` `⇒` `∨` `∧` `¬` then comparisons
//! (including infix predicate operators), `∪ ∩`, infix expression
//! operators, `×`, `;`, `↦`, `‥`, `+ −`, `∗ ÷`, unary minus and atoms.
//! Quantifier bodies extend as far right as possible.

use std::sync::Arc;

use super::lexer::{tokenize, Tok, Token};
use crate::ast::{Binder, Formula, Kind, Type};
use crate::error::ParseError;
use crate::factory::{FormulaFactory, Notation, OperatorSig, Symbol};

pub(crate) const BP_EQUIV: u8 = 10;
pub(crate) const BP_IMPLIES: u8 = 20;
pub(crate) const BP_OR: u8 = 30;
pub(crate) const BP_AND: u8 = 40;
pub(crate) const BP_NOT: u8 = 45;
pub(crate) const BP_CMP: u8 = 60;
pub(crate) const BP_SETOP: u8 = 70;
pub(crate) const BP_USER: u8 = 80;
pub(crate) const BP_CPROD: u8 = 90;
pub(crate) const BP_COMP: u8 = 100;
pub(crate) const BP_MAPLET: u8 = 110;
pub(crate) const BP_RANGE: u8 = 120;
pub(crate) const BP_ADD: u8 = 130;
pub(crate) const BP_MUL: u8 = 140;
pub(crate) const BP_NEG: u8 = 150;
pub(crate) const BP_ATOM: u8 = 255;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Assoc {
    /// Same-tier chains need parentheses.
    None,
    /// Left-associative within a mixing group.
    Left(&'static str),
}

fn core_infix(sym: &str) -> Option<(u8, Assoc, Kind)> {
    Some(match sym {
        "⇔" => (BP_EQUIV, Assoc::None, Kind::Equiv),
        "⇒" => (BP_IMPLIES, Assoc::None, Kind::Implies),
        "∨" => (BP_OR, Assoc::Left("∨"), Kind::Or),
        "∧" => (BP_AND, Assoc::Left("∧"), Kind::And),
        "=" => (BP_CMP, Assoc::None, Kind::Equal),
        "≠" => (BP_CMP, Assoc::None, Kind::NotEqual),
        "∈" => (BP_CMP, Assoc::None, Kind::In),
        "⊆" => (BP_CMP, Assoc::None, Kind::Subset),
        "∪" => (BP_SETOP, Assoc::Left("∪"), Kind::Union),
        "∩" => (BP_SETOP, Assoc::Left("∩"), Kind::Inter),
        "×" => (BP_CPROD, Assoc::Left("×"), Kind::CProd),
        ";" => (BP_COMP, Assoc::Left(";"), Kind::Comp),
        "↦" => (BP_MAPLET, Assoc::Left("↦"), Kind::Maplet),
        "‥" => (BP_RANGE, Assoc::None, Kind::Range),
        "+" => (BP_ADD, Assoc::Left("additive"), Kind::Add),
        "−" => (BP_ADD, Assoc::Left("additive"), Kind::Sub),
        "∗" => (BP_MUL, Assoc::Left("multiplicative"), Kind::Mul),
        "÷" => (BP_MUL, Assoc::Left("multiplicative"), Kind::Div),
        _ => return None,
    })
}

enum Infix {
    Core { bp: u8, assoc: Assoc, kind: Kind, sym: &'static str },
    User { bp: u8, op: OperatorSig },
}

impl Infix {
    fn bp(&self) -> u8 {
        match self {
            Infix::Core { bp, .. } | Infix::User { bp, .. } => *bp,
        }
    }

    fn label(&self) -> String {
        match self {
            Infix::Core { sym, .. } => sym.to_string(),
            Infix::User { op, .. } => op.name.clone(),
        }
    }
}

pub(crate) struct Parser<'a> {
    toks: Vec<Token>,
    pos: usize,
    ff: &'a Arc<FormulaFactory>,
}

/// Parses a predicate or expression. The result is well-formed against
/// `ff` but carries types only where the text annotates them.
pub fn parse_formula(text: &str, ff: &Arc<FormulaFactory>) -> Result<Formula, ParseError> {
    let mut p = Parser::new(text, ff)?;
    let f = p.formula(0)?;
    p.expect_eof()?;
    Ok(f)
}

/// Parses a type written in expression syntax, e.g. `ℙ(ℤ × List(T))`.
pub fn parse_type(text: &str, ff: &Arc<FormulaFactory>) -> Result<Type, ParseError> {
    let mut p = Parser::new(text, ff)?;
    let start = p.peek_token().start;
    let f = p.formula(BP_CPROD)?;
    p.expect_eof()?;
    expr_to_type(&f).ok_or_else(|| ParseError::syntax(start, p.peek_token().end, "expected a type"))
}

/// Reads a type out of its carrier-set expression. Bare identifiers become
/// given types; the type checker re-resolves them against type parameters.
pub fn expr_to_type(f: &Formula) -> Option<Type> {
    match f.kind() {
        Kind::TypeSet(t) => Some(t.clone()),
        Kind::Ident(n) => Some(Type::Given(n.clone())),
        Kind::Pow => Some(Type::power(expr_to_type(&f.children()[0])?)),
        Kind::CProd => Some(Type::product(expr_to_type(&f.children()[0])?, expr_to_type(&f.children()[1])?)),
        _ => None,
    }
}

impl<'a> Parser<'a> {
    pub(crate) fn new(text: &str, ff: &'a Arc<FormulaFactory>) -> Result<Self, ParseError> {
        Ok(Parser { toks: tokenize(text, ff)?, pos: 0, ff })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_token(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn advance(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Sym(x) if *x == s)
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        if self.is_sym(s) {
            self.advance();
            true
        } else {
            false
        }
    }

    fn err_here(&self, message: impl Into<String>) -> ParseError {
        let t = self.peek_token();
        ParseError::syntax(t.start, t.end, message)
    }

    fn expect_sym(&mut self, s: &str) -> Result<(), ParseError> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            Err(self.err_here(format!("expected `{s}`, found {}", describe(self.peek()))))
        }
    }

    pub(crate) fn expect_eof(&self) -> Result<(), ParseError> {
        match self.peek() {
            Tok::Eof => Ok(()),
            t => Err(self.err_here(format!("unexpected {}", describe(t)))),
        }
    }

    fn build(&self, at: &Token, kind: Kind, children: Vec<Formula>, ty: Option<Type>) -> Result<Formula, ParseError> {
        Formula::build(self.ff, kind, children, ty).map_err(|e| ParseError::syntax(at.start, at.end, e.to_string()))
    }

    fn peek_infix(&self) -> Option<Infix> {
        match self.peek() {
            Tok::Sym(s) => core_infix(s).map(|(bp, assoc, kind)| Infix::Core { bp, assoc, kind, sym: s }),
            Tok::Ident(name) => self.user_infix(self.ff.operator(name)?),
            Tok::ExtSym(sym) => self.user_infix(self.ff.operator_for_token(sym)?),
            _ => None,
        }
    }

    fn user_infix(&self, op: &OperatorSig) -> Option<Infix> {
        if op.notation != Notation::Infix {
            return None;
        }
        let bp = if op.is_predicate() { BP_CMP } else { BP_USER };
        Some(Infix::User { bp, op: op.clone() })
    }

    fn same_user_op(&self, name: &str) -> bool {
        match self.peek() {
            Tok::Ident(n) => n == name,
            Tok::ExtSym(s) => self.ff.operator_for_token(s).is_some_and(|o| o.name == name),
            _ => false,
        }
    }

    pub(crate) fn formula(&mut self, min_bp: u8) -> Result<Formula, ParseError> {
        let mut lhs = self.nud()?;
        let mut last: Option<(u8, Option<&'static str>, String)> = None;
        while let Some(op) = self.peek_infix() {
            if op.bp() < min_bp {
                break;
            }
            if let Some((bp, group, label)) = &last {
                if *bp == op.bp() {
                    let chains = match (&op, group) {
                        (Infix::Core { assoc: Assoc::Left(g), .. }, Some(prev)) => g == prev,
                        _ => false,
                    };
                    if !chains {
                        return Err(self.err_here(format!("`{label}` and `{}` need parentheses", op.label())));
                    }
                }
            }
            let at = self.advance();
            match op {
                Infix::Core { bp, assoc, kind, .. } => {
                    let rhs = self.formula(bp + 1)?;
                    lhs = self.build(&at, kind, vec![lhs, rhs], None)?;
                    let group = match assoc {
                        Assoc::Left(g) => Some(g),
                        Assoc::None => None,
                    };
                    last = Some((bp, group, op_label(&at)));
                }
                Infix::User { bp, op } => {
                    let mut operands = vec![lhs, self.formula(bp + 1)?];
                    while self.same_user_op(&op.name) {
                        self.advance();
                        operands.push(self.formula(bp + 1)?);
                    }
                    if !op.associative && operands.len() != op.args.len() {
                        return Err(ParseError::syntax(
                            at.start,
                            at.end,
                            format!("`{}` takes {} operands, found {}", op.name, op.args.len(), operands.len()),
                        ));
                    }
                    lhs = self.build(&at, Kind::Apply(op.name.clone()), operands, None)?;
                    last = Some((bp, None, op.name.clone()));
                }
            }
        }
        Ok(lhs)
    }

    fn annotation(&mut self) -> Result<Option<Type>, ParseError> {
        if !self.eat_sym("⦂") {
            return Ok(None);
        }
        let start = self.peek_token().start;
        let f = self.formula(BP_CPROD)?;
        match expr_to_type(&f) {
            Some(t) => Ok(Some(t)),
            None => Err(ParseError::syntax(start, self.peek_token().start, "expected a type")),
        }
    }

    fn args(&mut self) -> Result<Vec<Formula>, ParseError> {
        self.expect_sym("(")?;
        let mut out = Vec::new();
        if self.eat_sym(")") {
            return Ok(out);
        }
        loop {
            out.push(self.formula(0)?);
            if self.eat_sym(")") {
                return Ok(out);
            }
            self.expect_sym(",")?;
        }
    }

    fn nud(&mut self) -> Result<Formula, ParseError> {
        let at = self.advance();
        let ff = self.ff;
        match at.tok.clone() {
            Tok::Sym("(") => {
                let f = self.formula(0)?;
                self.expect_sym(")")?;
                Ok(f)
            }
            Tok::Sym("⊤") => Ok(Formula::truth(ff)),
            Tok::Sym("⊥") => Ok(Formula::falsity(ff)),
            Tok::Sym("¬") => {
                let operand = self.formula(BP_NOT + 5)?;
                self.build(&at, Kind::Not, vec![operand], None)
            }
            Tok::Sym(q @ ("∀" | "∃")) => {
                let mut binders = Vec::new();
                loop {
                    let name = match self.advance().tok {
                        Tok::Ident(n) => n,
                        other => {
                            return Err(ParseError::syntax(
                                at.start,
                                at.end,
                                format!("expected a bound identifier, found {}", describe(&other)),
                            ))
                        }
                    };
                    let ty = self.annotation()?;
                    binders.push(Binder { name, ty });
                    if !self.eat_sym(",") {
                        break;
                    }
                }
                self.expect_sym("·")?;
                let body = self.formula(0)?;
                let kind = if q == "∀" { Kind::Forall(binders) } else { Kind::Exists(binders) };
                self.build(&at, kind, vec![body], None)
            }
            Tok::Int(n) => Ok(Formula::int(ff, n)),
            Tok::Sym("−") => {
                if let Tok::Int(n) = *self.peek() {
                    self.advance();
                    return Ok(Formula::int(ff, -n));
                }
                let operand = self.formula(BP_NEG)?;
                self.build(&at, Kind::Neg, vec![operand], None)
            }
            Tok::Sym("TRUE") => self.build(&at, Kind::Bool(true), vec![], Some(Type::Bool)),
            Tok::Sym("FALSE") => self.build(&at, Kind::Bool(false), vec![], Some(Type::Bool)),
            Tok::Sym("BOOL") => Ok(Formula::type_set(ff, Type::Bool)),
            Tok::Sym("ℤ") => Ok(Formula::type_set(ff, Type::Int)),
            Tok::Sym("∅") => {
                let ty = self.annotation()?;
                self.build(&at, Kind::Empty, vec![], ty)
            }
            Tok::Sym("ℙ") => {
                self.expect_sym("(")?;
                let inner = self.formula(0)?;
                self.expect_sym(")")?;
                self.build(&at, Kind::Pow, vec![inner], None)
            }
            Tok::Sym("{") => {
                let mut elems = vec![self.formula(0)?];
                while self.eat_sym(",") {
                    elems.push(self.formula(0)?);
                }
                self.expect_sym("}")?;
                self.build(&at, Kind::SetExt, elems, None)
            }
            Tok::Ident(name) => self.identifier(&at, name),
            Tok::ExtSym(sym) => {
                let op = ff
                    .operator_for_token(&sym)
                    .ok_or_else(|| ParseError::UnknownOperator {
                        name: sym.clone(),
                        span: crate::error::SourceSpan { file: None, start: at.start, end: at.end },
                    })?
                    .clone();
                self.operator_application(&at, &op)
            }
            other => Err(ParseError::syntax(at.start, at.end, format!("unexpected {}", describe(&other)))),
        }
    }

    fn operator_application(&mut self, at: &Token, op: &OperatorSig) -> Result<Formula, ParseError> {
        let args = if op.args.is_empty() {
            if self.is_sym("(") {
                self.args()?
            } else {
                Vec::new()
            }
        } else {
            self.args()?
        };
        self.build(at, Kind::Apply(op.name.clone()), args, None)
    }

    fn identifier(&mut self, at: &Token, name: String) -> Result<Formula, ParseError> {
        let ff = self.ff;
        match ff.symbol(&name).cloned() {
            Some(Symbol::Datatype(_)) => {
                let d = ff.datatype(&name).expect("symbol table is consistent");
                let arity = d.type_params.len();
                let mut args = Vec::new();
                if self.is_sym("(") {
                    for a in self.args()? {
                        args.push(expr_to_type(&a).ok_or_else(|| {
                            ParseError::syntax(at.start, at.end, format!("argument of `{name}` is not a type"))
                        })?);
                    }
                }
                if args.len() != arity {
                    return Err(ParseError::syntax(
                        at.start,
                        at.end,
                        format!("`{name}` takes {arity} type argument(s), found {}", args.len()),
                    ));
                }
                Ok(Formula::type_set(ff, Type::Datatype(name, args)))
            }
            Some(Symbol::AxiomaticType(_)) => Ok(Formula::type_set(ff, Type::Given(name))),
            Some(Symbol::Constructor { .. }) => {
                let (d, c) = ff.constructor(&name).expect("symbol table is consistent");
                let monomorphic = d.type_params.is_empty().then(|| d.generic_type());
                let args = if c.destructors.is_empty() {
                    if self.is_sym("(") {
                        self.args()?
                    } else {
                        Vec::new()
                    }
                } else {
                    self.args()?
                };
                let ty = if args.is_empty() { self.annotation()?.or(monomorphic) } else { None };
                self.build(at, Kind::Construct(name), args, ty)
            }
            Some(Symbol::Destructor { .. }) => {
                let args = self.args()?;
                self.build(at, Kind::Destruct(name), args, None)
            }
            Some(Symbol::Operator(_)) => {
                let op = ff.operator(&name).expect("symbol table is consistent").clone();
                if op.notation == Notation::Infix && !self.is_sym("(") {
                    return Err(ParseError::syntax(
                        at.start,
                        at.end,
                        format!("infix operator `{name}` is missing its left operand"),
                    ));
                }
                self.operator_application(at, &op)
            }
            None => {
                if self.is_sym("(") {
                    return Err(ParseError::UnknownOperator {
                        name,
                        span: crate::error::SourceSpan { file: None, start: at.start, end: at.end },
                    });
                }
                Ok(Formula::ident(ff, name, None))
            }
        }
    }
}

fn op_label(t: &Token) -> String {
    match &t.tok {
        Tok::Sym(s) => s.to_string(),
        Tok::Ident(s) | Tok::ExtSym(s) => s.clone(),
        other => describe(other),
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(n) => format!("identifier `{n}`"),
        Tok::Int(n) => format!("integer `{n}`"),
        Tok::Sym(s) => format!("`{s}`"),
        Tok::ExtSym(s) => format!("`{s}`"),
        Tok::Eof => "end of input".to_string(),
    }
}
