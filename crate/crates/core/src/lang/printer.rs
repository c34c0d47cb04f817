use super::parser::*;
use crate::ast::{Formula, Kind, Type};
use crate::factory::Notation;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum PrintMode {
    /// Extension operators print by name.
    Ascii,
    /// Extension operators print with their declared symbol, if any.
    #[default]
    Unicode,
}

/// Renders a formula in concrete syntax that parses back to the same tree.
pub fn print_formula(f: &Formula, mode: PrintMode) -> String {
    let mut out = String::new();
    Printer { mode }.node(f, &mut out);
    out
}

struct Printer {
    mode: PrintMode,
}

const QUANTIFIER: u8 = 5;

fn tier(f: &Formula) -> u8 {
    match f.kind() {
        Kind::Equiv => BP_EQUIV,
        Kind::Implies => BP_IMPLIES,
        Kind::Or => BP_OR,
        Kind::And => BP_AND,
        Kind::Not => BP_NOT,
        Kind::Forall(_) | Kind::Exists(_) => QUANTIFIER,
        Kind::Equal | Kind::NotEqual | Kind::In | Kind::Subset => BP_CMP,
        Kind::Union | Kind::Inter => BP_SETOP,
        Kind::CProd => BP_CPROD,
        Kind::TypeSet(Type::Product(..)) => BP_CPROD,
        Kind::Comp => BP_COMP,
        Kind::Maplet => BP_MAPLET,
        Kind::Range => BP_RANGE,
        Kind::Add | Kind::Sub => BP_ADD,
        Kind::Mul | Kind::Div => BP_MUL,
        Kind::Neg => BP_NEG,
        Kind::Apply(op) => match f.factory().operator(op) {
            Some(sig) if sig.notation == Notation::Infix => {
                if sig.is_predicate() {
                    BP_CMP
                } else {
                    BP_USER
                }
            }
            _ => BP_ATOM,
        },
        _ => BP_ATOM,
    }
}

fn mix_group(k: &Kind) -> Option<&'static str> {
    match k {
        Kind::Add | Kind::Sub => Some("additive"),
        Kind::Mul | Kind::Div => Some("multiplicative"),
        Kind::Maplet => Some("↦"),
        Kind::CProd => Some("×"),
        Kind::Union => Some("∪"),
        Kind::Inter => Some("∩"),
        _ => None,
    }
}

fn core_token(k: &Kind) -> &'static str {
    match k {
        Kind::Equiv => "⇔",
        Kind::Implies => "⇒",
        Kind::Or => "∨",
        Kind::And => "∧",
        Kind::Equal => "=",
        Kind::NotEqual => "≠",
        Kind::In => "∈",
        Kind::Subset => "⊆",
        Kind::Union => "∪",
        Kind::Inter => "∩",
        Kind::CProd => "×",
        Kind::Comp => ";",
        Kind::Maplet => "↦",
        Kind::Range => "‥",
        Kind::Add => "+",
        Kind::Sub => "−",
        Kind::Mul => "∗",
        Kind::Div => "÷",
        _ => "?",
    }
}

impl Printer {
    fn wrapped(&self, f: &Formula, parens: bool, out: &mut String) {
        let parens = parens || tier(f) == QUANTIFIER;
        if parens {
            out.push('(');
        }
        self.node(f, out);
        if parens {
            out.push(')');
        }
    }

    fn joined(&self, items: &[Formula], sep: &str, out: &mut String) {
        for (i, c) in items.iter().enumerate() {
            if i > 0 {
                out.push_str(sep);
            }
            self.node(c, out);
        }
    }

    fn node(&self, f: &Formula, out: &mut String) {
        let p = tier(f);
        let ch = f.children();
        match f.kind() {
            Kind::True => out.push('⊤'),
            Kind::False => out.push('⊥'),
            Kind::Not => {
                out.push_str("¬ ");
                self.wrapped(&ch[0], tier(&ch[0]) < BP_NOT + 5, out);
            }
            Kind::Forall(bs) | Kind::Exists(bs) => {
                out.push(if matches!(f.kind(), Kind::Forall(_)) { '∀' } else { '∃' });
                for (i, b) in bs.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    out.push_str(&b.name);
                    if let Some(t) = &b.ty {
                        out.push_str(" ⦂ ");
                        out.push_str(&t.to_string());
                    }
                }
                out.push_str("· ");
                self.node(&ch[0], out);
            }
            Kind::And | Kind::Or | Kind::Comp => {
                for (i, c) in ch.iter().enumerate() {
                    if i > 0 {
                        out.push(' ');
                        out.push_str(core_token(f.kind()));
                        out.push(' ');
                    }
                    self.wrapped(c, tier(c) <= p, out);
                }
            }
            Kind::Equiv | Kind::Implies | Kind::Equal | Kind::NotEqual | Kind::In | Kind::Subset | Kind::Range => {
                self.wrapped(&ch[0], tier(&ch[0]) <= p, out);
                out.push(' ');
                out.push_str(core_token(f.kind()));
                out.push(' ');
                self.wrapped(&ch[1], tier(&ch[1]) <= p, out);
            }
            Kind::Add | Kind::Sub | Kind::Mul | Kind::Div | Kind::Maplet | Kind::CProd | Kind::Union | Kind::Inter => {
                let l = &ch[0];
                let left_parens = tier(l) < p || (tier(l) == p && mix_group(l.kind()) != mix_group(f.kind()));
                self.wrapped(l, left_parens, out);
                out.push(' ');
                out.push_str(core_token(f.kind()));
                out.push(' ');
                self.wrapped(&ch[1], tier(&ch[1]) <= p, out);
            }
            Kind::Neg => {
                out.push('−');
                let c = &ch[0];
                let parens = tier(c) < BP_NEG || matches!(c.kind(), Kind::Int(n) if *n >= 0);
                self.wrapped(c, parens, out);
            }
            Kind::Ident(n) => out.push_str(n),
            Kind::Int(n) => {
                if *n < 0 {
                    out.push('−');
                    out.push_str(&n.unsigned_abs().to_string());
                } else {
                    out.push_str(&n.to_string());
                }
            }
            Kind::Bool(b) => out.push_str(if *b { "TRUE" } else { "FALSE" }),
            Kind::TypeSet(t) => out.push_str(&t.to_string()),
            Kind::Empty => {
                out.push('∅');
                self.annotation(f, out);
            }
            Kind::SetExt => {
                out.push('{');
                self.joined(ch, ", ", out);
                out.push('}');
            }
            Kind::Pow => {
                out.push_str("ℙ(");
                self.node(&ch[0], out);
                out.push(')');
            }
            Kind::Apply(name) => {
                let sig = f.factory().operator(name);
                match sig {
                    Some(sig) if sig.notation == Notation::Infix => {
                        let tok = match self.mode {
                            PrintMode::Ascii => sig.name.as_str(),
                            PrintMode::Unicode => sig.display_token(),
                        };
                        for (i, c) in ch.iter().enumerate() {
                            if i > 0 {
                                out.push(' ');
                                out.push_str(tok);
                                out.push(' ');
                            }
                            self.wrapped(c, tier(c) <= p, out);
                        }
                    }
                    _ => self.application(name, ch, out),
                }
            }
            Kind::Construct(name) => {
                if ch.is_empty() {
                    out.push_str(name);
                    let polymorphic = f.factory().constructor(name).is_some_and(|(d, _)| !d.type_params.is_empty());
                    if polymorphic {
                        self.annotation(f, out);
                    }
                } else {
                    self.application(name, ch, out);
                }
            }
            Kind::Destruct(name) => self.application(name, ch, out),
        }
    }

    fn application(&self, name: &str, args: &[Formula], out: &mut String) {
        out.push_str(name);
        if !args.is_empty() {
            out.push('(');
            self.joined(args, ", ", out);
            out.push(')');
        }
    }

    fn annotation(&self, f: &Formula, out: &mut String) {
        if let Some(t) = f.ty() {
            out.push_str(" ⦂ ");
            out.push_str(&t.to_string());
        }
    }
}
