//! Canonical prefix serialization with explicit types, used by the proof
//! store.
//!
//! ```text
//! (eq (op list_length :int (cons nil :(data List int))) (int 0 :int))
//! ```

use std::sync::Arc;

use crate::ast::{Binder, Formula, Kind, Type};
use crate::error::ParseError;
use crate::factory::FormulaFactory;

pub fn type_to_sexpr(t: &Type) -> String {
    let mut out = String::new();
    write_type(t, &mut out);
    out
}

fn write_type(t: &Type, out: &mut String) {
    match t {
        Type::Int => out.push_str("int"),
        Type::Bool => out.push_str("bool"),
        Type::Param(n) => {
            out.push_str("(param ");
            out.push_str(n);
            out.push(')');
        }
        Type::Given(n) => {
            out.push_str("(given ");
            out.push_str(n);
            out.push(')');
        }
        Type::Power(a) => {
            out.push_str("(pow ");
            write_type(a, out);
            out.push(')');
        }
        Type::Product(a, b) => {
            out.push_str("(prod ");
            write_type(a, out);
            out.push(' ');
            write_type(b, out);
            out.push(')');
        }
        Type::Datatype(n, args) => {
            out.push_str("(data ");
            out.push_str(n);
            for a in args {
                out.push(' ');
                write_type(a, out);
            }
            out.push(')');
        }
    }
}

pub fn to_sexpr(f: &Formula) -> String {
    let mut out = String::new();
    write_formula(f, &mut out);
    out
}

fn write_formula(f: &Formula, out: &mut String) {
    out.push('(');
    out.push_str(f.kind().tag());
    match f.kind() {
        Kind::Ident(n) | Kind::Apply(n) | Kind::Construct(n) | Kind::Destruct(n) => {
            out.push(' ');
            out.push_str(n);
        }
        Kind::Int(n) => {
            out.push(' ');
            out.push_str(&n.to_string());
        }
        Kind::Bool(b) => out.push_str(if *b { " TRUE" } else { " FALSE" }),
        Kind::TypeSet(t) => {
            out.push(' ');
            write_type(t, out);
        }
        Kind::Forall(bs) | Kind::Exists(bs) => {
            out.push_str(" (");
            for (i, b) in bs.iter().enumerate() {
                if i > 0 {
                    out.push(' ');
                }
                out.push('(');
                out.push_str(&b.name);
                if let Some(t) = &b.ty {
                    out.push_str(" :");
                    write_type(t, out);
                }
                out.push(')');
            }
            out.push(')');
        }
        _ => {}
    }
    if let Some(t) = f.ty() {
        out.push_str(" :");
        write_type(t, out);
    }
    for c in f.children() {
        out.push(' ');
        write_formula(c, out);
    }
    out.push(')');
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Open,
    Close,
    Colon,
    Atom(String),
}

struct Reader {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Reader {
    fn new(text: &str) -> Self {
        let mut toks = Vec::new();
        let mut atom = String::new();
        let mut start = 0;
        for (i, c) in text.chars().enumerate() {
            let special = matches!(c, '(' | ')' | ':') || c.is_whitespace();
            if special && !atom.is_empty() {
                toks.push((start, Tok::Atom(std::mem::take(&mut atom))));
            }
            match c {
                '(' => toks.push((i, Tok::Open)),
                ')' => toks.push((i, Tok::Close)),
                ':' => toks.push((i, Tok::Colon)),
                c if c.is_whitespace() => {}
                c => {
                    if atom.is_empty() {
                        start = i;
                    }
                    atom.push(c);
                }
            }
        }
        if !atom.is_empty() {
            toks.push((start, Tok::Atom(atom)));
        }
        Reader { toks, pos: 0 }
    }

    fn err(&self, message: &str) -> ParseError {
        let at = self.toks.get(self.pos).map(|t| t.0).unwrap_or(0);
        ParseError::syntax(at, at + 1, message)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.1.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Tok) -> Result<(), ParseError> {
        if self.peek() == Some(&want) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected {want:?}")))
        }
    }

    fn atom(&mut self) -> Result<String, ParseError> {
        match self.next() {
            Some(Tok::Atom(a)) => Ok(a),
            _ => {
                self.pos -= 1;
                Err(self.err("expected an atom"))
            }
        }
    }

    fn ty(&mut self) -> Result<Type, ParseError> {
        if self.peek() != Some(&Tok::Open) {
            return match self.atom()?.as_str() {
                "int" => Ok(Type::Int),
                "bool" => Ok(Type::Bool),
                other => Err(self.err(&format!("unknown type `{other}`"))),
            };
        }
        self.expect(Tok::Open)?;
        let head = self.atom()?;
        let t = match head.as_str() {
            "param" => Type::Param(self.atom()?),
            "given" => Type::Given(self.atom()?),
            "pow" => Type::power(self.ty()?),
            "prod" => Type::product(self.ty()?, self.ty()?),
            "data" => {
                let n = self.atom()?;
                let mut args = Vec::new();
                while self.peek() != Some(&Tok::Close) {
                    args.push(self.ty()?);
                }
                Type::Datatype(n, args)
            }
            other => return Err(self.err(&format!("unknown type constructor `{other}`"))),
        };
        self.expect(Tok::Close)?;
        Ok(t)
    }

    fn annotation(&mut self) -> Result<Option<Type>, ParseError> {
        if self.peek() == Some(&Tok::Colon) {
            self.pos += 1;
            Ok(Some(self.ty()?))
        } else {
            Ok(None)
        }
    }

    fn formula(&mut self, ff: &Arc<FormulaFactory>) -> Result<Formula, ParseError> {
        self.expect(Tok::Open)?;
        let tag = self.atom()?;
        let kind = match tag.as_str() {
            "true" => Kind::True,
            "false" => Kind::False,
            "not" => Kind::Not,
            "and" => Kind::And,
            "or" => Kind::Or,
            "imp" => Kind::Implies,
            "equiv" => Kind::Equiv,
            "eq" => Kind::Equal,
            "neq" => Kind::NotEqual,
            "in" => Kind::In,
            "subset" => Kind::Subset,
            "empty" => Kind::Empty,
            "add" => Kind::Add,
            "sub" => Kind::Sub,
            "mul" => Kind::Mul,
            "div" => Kind::Div,
            "neg" => Kind::Neg,
            "range" => Kind::Range,
            "maplet" => Kind::Maplet,
            "setext" => Kind::SetExt,
            "pow" => Kind::Pow,
            "cprod" => Kind::CProd,
            "union" => Kind::Union,
            "inter" => Kind::Inter,
            "comp" => Kind::Comp,
            "id" => Kind::Ident(self.atom()?),
            "op" => Kind::Apply(self.atom()?),
            "cons" => Kind::Construct(self.atom()?),
            "dest" => Kind::Destruct(self.atom()?),
            "int" => {
                let a = self.atom()?;
                Kind::Int(a.parse().map_err(|_| self.err("malformed integer"))?)
            }
            "bool" => match self.atom()?.as_str() {
                "TRUE" => Kind::Bool(true),
                "FALSE" => Kind::Bool(false),
                _ => return Err(self.err("malformed boolean")),
            },
            "typeset" => Kind::TypeSet(self.ty()?),
            "forall" | "exists" => {
                self.expect(Tok::Open)?;
                let mut bs = Vec::new();
                while self.peek() == Some(&Tok::Open) {
                    self.pos += 1;
                    let name = self.atom()?;
                    let ty = self.annotation()?;
                    self.expect(Tok::Close)?;
                    bs.push(Binder { name, ty });
                }
                self.expect(Tok::Close)?;
                if tag == "forall" {
                    Kind::Forall(bs)
                } else {
                    Kind::Exists(bs)
                }
            }
            other => return Err(self.err(&format!("unknown node `{other}`"))),
        };
        let ty = self.annotation()?;
        let mut children = Vec::new();
        while self.peek() == Some(&Tok::Open) {
            children.push(self.formula(ff)?);
        }
        self.expect(Tok::Close)?;
        Formula::build(ff, kind, children, ty).map_err(|e| self.err(&e.to_string()))
    }
}

/// Reads a formula written by [`to_sexpr`], building it with `ff`.
pub fn from_sexpr(text: &str, ff: &Arc<FormulaFactory>) -> Result<Formula, ParseError> {
    let mut r = Reader::new(text);
    let f = r.formula(ff)?;
    if r.pos != r.toks.len() {
        return Err(r.err("trailing input"));
    }
    Ok(f)
}

pub fn type_from_sexpr(text: &str) -> Result<Type, ParseError> {
    let mut r = Reader::new(text);
    let t = r.ty()?;
    if r.pos != r.toks.len() {
        return Err(r.err("trailing input"));
    }
    Ok(t)
}
