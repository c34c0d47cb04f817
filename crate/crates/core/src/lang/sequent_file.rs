//! The `.seq` format: a list of named sequents over imported theories.
//!
//! ```text
//! uses List, Logic
//!
//! sequent cons_not_empty
//!   vars a: ℤ
//!   hyp h1: a ∈ 0 ‥ 5
//!   goal ¬ list_isEmpty(cons(a, nil))
//! ```

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::sync::Arc;

use super::theory_file::{blocks, line_err, split_top};
use super::{parse_formula, parse_type, print_formula, PrintMode};
use crate::ast::{Formula, Type};
use crate::error::ParseError;
use crate::factory::FormulaFactory;

#[derive(Clone, Debug, PartialEq)]
pub struct SequentDecl {
    pub name: String,
    /// Given sets, usable as types in `vars` and the formulas.
    pub sets: Vec<String>,
    pub vars: Vec<(String, Type)>,
    pub hyps: Vec<(String, Formula)>,
    pub goal: Formula,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SequentFile {
    pub uses: Vec<String>,
    pub sequents: Vec<SequentDecl>,
}

fn name(s: &str, line: usize) -> Result<String, ParseError> {
    let mut chars = s.chars();
    let ok =
        chars.next().is_some_and(|c| c.is_alphabetic() || c == '_') && chars.all(|c| c.is_alphanumeric() || c == '_');
    if ok {
        Ok(s.to_string())
    } else {
        Err(line_err(line, format!("expected a name, found `{s}`")))
    }
}

/// Theory names on the `uses` line, without parsing any formula.
pub fn sequent_uses(text: &str) -> Result<Vec<String>, ParseError> {
    for b in blocks(text)? {
        if let Some(rest) = b.head.text.strip_prefix("uses ") {
            return split_top(rest).into_iter().map(|n| name(n, b.head.no)).collect();
        }
    }
    Ok(Vec::new())
}

/// Parses a sequent file. Formulas are built with `ff` and left untyped.
pub fn parse_sequents(text: &str, ff: &Arc<FormulaFactory>) -> Result<SequentFile, ParseError> {
    let mut out = SequentFile::default();
    let mut seen = BTreeSet::new();
    let formula = |t: &str, line: usize| parse_formula(t, ff).map_err(|e| e.at_line(line));
    for (i, b) in blocks(text)?.iter().enumerate() {
        let (head, line) = (b.head.text, b.head.no);
        if let Some(rest) = head.strip_prefix("uses ") {
            if i != 0 {
                return Err(line_err(line, "`uses` must come first"));
            }
            out.uses = split_top(rest).into_iter().map(|n| name(n, line)).collect::<Result<_, _>>()?;
            continue;
        }
        let Some(n) = head.strip_prefix("sequent ") else {
            return Err(line_err(line, format!("unexpected declaration `{head}`")));
        };
        let n = name(n.trim(), line)?;
        if !seen.insert(n.clone()) {
            return Err(ParseError::DuplicateName { name: n, line });
        }
        let mut sets = Vec::new();
        let mut vars = Vec::new();
        let mut hyps: Vec<(String, Formula)> = Vec::new();
        let mut goal = None;
        for l in &b.body {
            if goal.is_some() {
                return Err(line_err(l.no, "nothing may follow the goal"));
            }
            let (kw, rest) = l.text.split_once(' ').unwrap_or((l.text, ""));
            let rest = rest.trim();
            match kw {
                "sets" => {
                    for s in split_top(rest) {
                        sets.push(name(s, l.no)?);
                    }
                }
                "vars" => {
                    for item in split_top(rest) {
                        let (v, t) = item
                            .split_once(':')
                            .ok_or_else(|| line_err(l.no, format!("expected `name: type`, found `{item}`")))?;
                        let t = parse_type(t.trim(), ff).map_err(|e| e.at_line(l.no))?;
                        vars.push((name(v.trim(), l.no)?, t));
                    }
                }
                "hyp" => {
                    let (h, p) =
                        rest.split_once(':').ok_or_else(|| line_err(l.no, "expected `hyp name: predicate`"))?;
                    let h = name(h.trim(), l.no)?;
                    if hyps.iter().any(|(x, _)| *x == h) {
                        return Err(ParseError::DuplicateName { name: h, line: l.no });
                    }
                    hyps.push((h, formula(p.trim(), l.no)?));
                }
                "goal" => goal = Some(formula(rest, l.no)?),
                _ => return Err(line_err(l.no, format!("unexpected line `{}`", l.text))),
            }
        }
        let goal = goal.ok_or_else(|| line_err(line, format!("sequent `{n}` has no goal")))?;
        out.sequents.push(SequentDecl { name: n, sets, vars, hyps, goal });
    }
    Ok(out)
}

/// Prints a sequent file in the canonical layout accepted by
/// [`parse_sequents`].
pub fn print_sequents(file: &SequentFile) -> String {
    let mut out = String::new();
    if !file.uses.is_empty() {
        let _ = writeln!(out, "uses {}", file.uses.join(", "));
    }
    for s in &file.sequents {
        if !out.is_empty() {
            out.push('\n');
        }
        let _ = writeln!(out, "sequent {}", s.name);
        if !s.sets.is_empty() {
            let _ = writeln!(out, "  sets {}", s.sets.join(", "));
        }
        if !s.vars.is_empty() {
            let vars: Vec<String> = s.vars.iter().map(|(n, t)| format!("{n}: {t}")).collect();
            let _ = writeln!(out, "  vars {}", vars.join(", "));
        }
        for (h, p) in &s.hyps {
            let _ = writeln!(out, "  hyp {h}: {}", print_formula(p, PrintMode::Unicode));
        }
        let _ = writeln!(out, "  goal {}", print_formula(&s.goal, PrintMode::Unicode));
    }
    out
}
