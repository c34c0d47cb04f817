//! The line-oriented `.thy` theory format.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::sync::Arc;

use super::{parse_formula, parse_type, print_formula, PrintMode};
use crate::ast::{Formula, Type};
use crate::error::ParseError;
use crate::factory::{
    factory_union, ConstructorSig, DatatypeSig, ExtensionSignature, FormulaFactory, FormulaKind, Notation, OperatorSig,
};
use crate::theory::{
    Applicability, Axiom, Definition, InductiveCase, InferenceRule, OperatorDef, RewriteCase, RewriteRule, Theory,
};

pub(crate) struct Line<'a> {
    pub no: usize,
    pub text: &'a str,
}

pub(crate) struct Block<'a> {
    pub head: Line<'a>,
    pub body: Vec<Line<'a>>,
}

pub(crate) fn blocks(text: &str) -> Result<Vec<Block<'_>>, ParseError> {
    let mut out: Vec<Block> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with("//") {
            continue;
        }
        let indent = raw.len() - raw.trim_start().len();
        let line = Line { no: i + 1, text: trimmed };
        if indent == 0 {
            out.push(Block { head: line, body: Vec::new() });
        } else {
            match out.last_mut() {
                Some(b) => b.body.push(line),
                None => return Err(line_err(i + 1, "indented line outside any declaration")),
            }
        }
    }
    Ok(out)
}

pub(crate) fn line_err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Line { line, message: message.into() }
}

/// Splits on commas that are not nested in brackets.
pub(crate) fn split_top(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '{' => depth += 1,
            ')' | '}' => depth -= 1,
            ',' if depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    let last = s[start..].trim();
    if !last.is_empty() || !out.is_empty() {
        out.push(last);
    }
    out
}

fn is_name(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next().is_some_and(|c| c.is_alphabetic() || c == '_') && chars.all(|c| c.is_alphanumeric() || c == '_')
}

fn name(s: &str, line: usize) -> Result<String, ParseError> {
    if is_name(s) {
        Ok(s.to_string())
    } else {
        Err(line_err(line, format!("expected a name, found `{s}`")))
    }
}

/// Splits `name(inner) rest` into its parts; `inner` is `None` without
/// brackets.
fn split_call(s: &str, line: usize) -> Result<(&str, Option<&str>, &str), ParseError> {
    let end = s.find(|c: char| !(c.is_alphanumeric() || c == '_')).unwrap_or(s.len());
    let (head, rest) = s.split_at(end);
    if !rest.starts_with('(') {
        return Ok((head, None, rest.trim()));
    }
    let mut depth = 0;
    for (i, c) in rest.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 {
                    return Ok((head, Some(&rest[1..i]), rest[i + 1..].trim()));
                }
            }
            _ => {}
        }
    }
    Err(line_err(line, "unbalanced parentheses"))
}

/// Names of the theories listed on the `imports` line.
pub fn theory_imports(text: &str) -> Result<Vec<String>, ParseError> {
    for b in blocks(text)? {
        if let Some(rest) = b.head.text.strip_prefix("imports ") {
            return split_top(rest).into_iter().map(|n| name(n, b.head.no)).collect();
        }
    }
    Ok(Vec::new())
}

struct TheoryParser {
    theory: Theory,
    ff: Arc<FormulaFactory>,
    names: BTreeSet<String>,
}

impl TheoryParser {
    fn claim(&mut self, n: &str, line: usize) -> Result<(), ParseError> {
        if self.ff.symbol(n).is_some() || !self.names.insert(n.to_string()) {
            return Err(ParseError::DuplicateName { name: n.to_string(), line });
        }
        Ok(())
    }

    fn extend(&mut self, ext: ExtensionSignature, line: usize) -> Result<(), ParseError> {
        let name = ext.name().to_string();
        let exts = self.ff.extensions().filter(|e| e.name() != name).cloned().chain([ext]);
        self.ff = FormulaFactory::new(exts).map_err(|e| line_err(line, e.to_string()))?;
        Ok(())
    }

    fn ty(&self, text: &str, params: &[String], line: usize) -> Result<Type, ParseError> {
        let t = parse_type(text, &self.ff).map_err(|e| e.at_line(line))?;
        let mut unknown = None;
        let t = t.map(&|x| match x {
            Type::Given(n) if params.contains(n) => Some(Type::Param(n.clone())),
            _ => None,
        });
        t.collect_names(&mut |x| {
            if let Type::Given(n) = x {
                if !self.ff.is_axiomatic_type(n) {
                    unknown.get_or_insert(n.clone());
                }
            }
        });
        match unknown {
            Some(name) => Err(ParseError::UnknownType { name, line }),
            None => Ok(t),
        }
    }

    fn formula(&self, text: &str, line: usize) -> Result<Formula, ParseError> {
        parse_formula(text, &self.ff).map_err(|e| e.at_line(line))
    }

    fn typed_list(&self, text: &str, params: &[String], line: usize) -> Result<Vec<(String, Type)>, ParseError> {
        let mut out = Vec::new();
        for item in split_top(text) {
            let (n, t) =
                item.split_once(':').ok_or_else(|| line_err(line, format!("expected `name: type`, found `{item}`")))?;
            out.push((name(n.trim(), line)?, self.ty(t.trim(), params, line)?));
        }
        Ok(out)
    }

    fn datatype(&mut self, b: &Block) -> Result<(), ParseError> {
        let line = b.head.no;
        let rest = &b.head.text["datatype ".len()..];
        let (n, params, tail) = split_call(rest.trim(), line)?;
        if !tail.is_empty() {
            return Err(line_err(line, format!("unexpected `{tail}`")));
        }
        let n = name(n, line)?;
        self.claim(&n, line)?;
        let params: Vec<String> = match params {
            Some(p) => split_top(p).into_iter().map(|x| name(x, line)).collect::<Result<_, _>>()?,
            None => Vec::new(),
        };
        let mut sig = DatatypeSig { name: n.clone(), type_params: params.clone(), constructors: Vec::new() };
        // Register the bare type first so constructor fields may refer to it.
        self.extend(ExtensionSignature::Datatype(sig.clone()), line)?;
        for l in &b.body {
            let (cname, fields, tail) = split_call(l.text, l.no)?;
            if !tail.is_empty() {
                return Err(line_err(l.no, format!("unexpected `{tail}`")));
            }
            let cname = name(cname, l.no)?;
            self.claim(&cname, l.no)?;
            let destructors = match fields {
                Some(f) => self.typed_list(f, &params, l.no)?,
                None => Vec::new(),
            };
            for (d, _) in &destructors {
                self.claim(d, l.no)?;
            }
            sig.constructors.push(ConstructorSig { name: cname, destructors });
        }
        self.extend(ExtensionSignature::Datatype(sig.clone()), line)?;
        self.theory.datatypes.push(sig);
        Ok(())
    }

    fn operator(&mut self, b: &Block) -> Result<(), ParseError> {
        let line = b.head.no;
        let mut rest = b.head.text["operator ".len()..].trim();
        let mut symbol = None;
        if rest.ends_with('"') {
            let at = rest.rfind(" symbol \"").ok_or_else(|| line_err(line, "malformed symbol declaration"))?;
            let s = &rest[at + " symbol \"".len()..rest.len() - 1];
            symbol = Some(s.to_string());
            rest = rest[..at].trim_end();
        }
        let (mut infix, mut assoc, mut comm) = (false, false, false);
        loop {
            if let Some(r) = rest.strip_suffix(" infix") {
                infix = true;
                rest = r.trim_end();
            } else if let Some(r) = rest.strip_suffix(" assoc") {
                assoc = true;
                rest = r.trim_end();
            } else if let Some(r) = rest.strip_suffix(" comm") {
                comm = true;
                rest = r.trim_end();
            } else {
                break;
            }
        }
        let (n, args, tail) = split_call(rest, line)?;
        let n = name(n, line)?;
        self.claim(&n, line)?;
        let params = self.theory.type_params.clone();
        let args = match args {
            Some(a) => self.typed_list(a, &params, line)?,
            None => Vec::new(),
        };
        let (kind, result) = if tail == "predicate" {
            (FormulaKind::Predicate, None)
        } else if let Some(t) = tail.strip_prefix(':') {
            (FormulaKind::Expression, Some(self.ty(t.trim(), &params, line)?))
        } else {
            return Err(line_err(line, "expected `: type` or `predicate`"));
        };
        let sig = OperatorSig {
            name: n.clone(),
            notation: if infix { Notation::Infix } else { Notation::Prefix },
            kind,
            args,
            result,
            associative: assoc,
            commutative: comm,
            symbol,
        };
        self.extend(ExtensionSignature::Operator(sig.clone()), line).map_err(|e| match e {
            ParseError::Line { message, .. } => ParseError::InvalidNotation { name: n.clone(), line, reason: message },
            other => other,
        })?;

        let mut definition = None;
        let mut wd = None;
        let mut lines = b.body.iter().peekable();
        while let Some(l) = lines.next() {
            let (kw, arg) = l.text.split_once(' ').unwrap_or((l.text, ""));
            let arg = arg.trim();
            match kw {
                "direct" if definition.is_none() => {
                    definition = Some(Definition::Direct(self.formula(arg, l.no)?));
                }
                "inductive" if definition.is_none() => {
                    let scrutinee = name(arg, l.no)?;
                    let mut cases = Vec::new();
                    while let Some(c) = lines.next_if(|c| c.text.starts_with("case ")) {
                        let body = &c.text["case ".len()..];
                        let (pattern, expr) =
                            body.split_once(':').ok_or_else(|| line_err(c.no, "expected `case pattern: body`"))?;
                        let (cname, vars, tail) = split_call(pattern.trim(), c.no)?;
                        if !tail.is_empty() {
                            return Err(line_err(c.no, format!("unexpected `{tail}`")));
                        }
                        let vars = match vars {
                            Some(v) => split_top(v).into_iter().map(|x| name(x, c.no)).collect::<Result<_, _>>()?,
                            None => Vec::new(),
                        };
                        cases.push(InductiveCase {
                            constructor: name(cname, c.no)?,
                            vars,
                            body: self.formula(expr.trim(), c.no)?,
                        });
                    }
                    definition = Some(Definition::Inductive { scrutinee, cases });
                }
                "axioms" if definition.is_none() => {
                    let axioms = split_top(arg).into_iter().map(|x| name(x, l.no)).collect::<Result<_, _>>()?;
                    definition = Some(Definition::Axiomatic { axioms });
                }
                "wd" if wd.is_none() => wd = Some(self.formula(arg, l.no)?),
                _ => return Err(line_err(l.no, format!("unexpected `{kw}` in operator `{n}`"))),
            }
        }
        self.theory.operators.push(OperatorDef {
            sig,
            definition: definition.unwrap_or(Definition::Axiomatic { axioms: Vec::new() }),
            wd,
        });
        Ok(())
    }

    fn rule_flags<'t>(&self, text: &'t str, line: usize) -> Result<(String, Vec<&'t str>), ParseError> {
        let mut words = text.split_whitespace().skip(1);
        let n = name(words.next().unwrap_or(""), line)?;
        Ok((n, words.collect()))
    }

    fn rewrite(&mut self, b: &Block) -> Result<(), ParseError> {
        let line = b.head.no;
        let (n, flags) = self.rule_flags(b.head.text, line)?;
        self.claim(&n, line)?;
        let (mut automatic, mut complete) = (false, false);
        for f in flags {
            match f {
                "auto" => automatic = true,
                "complete" => complete = true,
                _ => return Err(line_err(line, format!("unknown rewrite flag `{f}`"))),
            }
        }
        let params = self.theory.type_params.clone();
        let mut vars = Vec::new();
        let mut lhs = None;
        let mut cases = Vec::new();
        let mut pending: Option<Formula> = None;
        for l in &b.body {
            let (kw, arg) = l.text.split_once(' ').unwrap_or((l.text, ""));
            let arg = arg.trim();
            match kw {
                "vars" => vars = self.typed_list(arg, &params, l.no)?,
                "lhs" if lhs.is_none() => lhs = Some(self.formula(arg, l.no)?),
                "when" if pending.is_none() => pending = Some(self.formula(arg, l.no)?),
                "rhs" => {
                    let condition = pending.take().unwrap_or_else(|| Formula::truth(&self.ff));
                    cases.push(RewriteCase { condition, rhs: self.formula(arg, l.no)? });
                }
                _ => return Err(line_err(l.no, format!("unexpected `{kw}` in rewrite rule `{n}`"))),
            }
        }
        if pending.is_some() {
            return Err(line_err(line, format!("rewrite rule `{n}` has a condition without `rhs`")));
        }
        let lhs = lhs.ok_or_else(|| line_err(line, format!("rewrite rule `{n}` has no `lhs`")))?;
        if cases.is_empty() {
            return Err(line_err(line, format!("rewrite rule `{n}` has no `rhs`")));
        }
        let mut rule = RewriteRule { name: n, vars, lhs, cases, complete, automatic };
        if !rule.is_conditional() {
            rule.complete = true;
        }
        self.theory.rewrite_rules.push(rule);
        Ok(())
    }

    fn inference(&mut self, b: &Block) -> Result<(), ParseError> {
        let line = b.head.no;
        let (n, flags) = self.rule_flags(b.head.text, line)?;
        self.claim(&n, line)?;
        let mut automatic = false;
        let mut applicability = Applicability::Both;
        for f in flags {
            match f {
                "auto" => automatic = true,
                "forward" => applicability = Applicability::Forward,
                "backward" => applicability = Applicability::Backward,
                "both" => applicability = Applicability::Both,
                _ => return Err(line_err(line, format!("unknown inference flag `{f}`"))),
            }
        }
        let params = self.theory.type_params.clone();
        let mut vars = Vec::new();
        let mut givens = Vec::new();
        let mut infer = None;
        for l in &b.body {
            let (kw, arg) = l.text.split_once(' ').unwrap_or((l.text, ""));
            let arg = arg.trim();
            match kw {
                "vars" => vars = self.typed_list(arg, &params, l.no)?,
                "given" => givens.push(self.formula(arg, l.no)?),
                "infer" if infer.is_none() => infer = Some(self.formula(arg, l.no)?),
                _ => return Err(line_err(l.no, format!("unexpected `{kw}` in inference rule `{n}`"))),
            }
        }
        let infer = infer.ok_or_else(|| line_err(line, format!("inference rule `{n}` has no `infer`")))?;
        self.theory.inference_rules.push(InferenceRule { name: n, vars, givens, infer, applicability, automatic });
        Ok(())
    }
}

/// Parses a theory against the union of the imported factories. Items may
/// only refer to items declared above them; an inductive operator may refer
/// to itself.
pub fn parse_theory(text: &str, imports: &[Arc<FormulaFactory>]) -> Result<Theory, ParseError> {
    let mut ff = FormulaFactory::core();
    for f in imports {
        ff = factory_union(&ff, f).map_err(|e| line_err(1, e.to_string()))?;
    }
    let blocks = blocks(text)?;
    let mut it = blocks.iter().peekable();
    let head = it.next().ok_or_else(|| line_err(1, "expected `theory <name>`"))?;
    let tname =
        head.head.text.strip_prefix("theory ").ok_or_else(|| line_err(head.head.no, "expected `theory <name>`"))?;
    let mut p = TheoryParser { theory: Theory::new(name(tname.trim(), head.head.no)?), ff, names: BTreeSet::new() };

    if let Some(b) = it.next_if(|b| b.head.text.starts_with("types ")) {
        for t in split_top(&b.head.text["types ".len()..]) {
            let t = name(t, b.head.no)?;
            p.claim(&t, b.head.no)?;
            p.theory.type_params.push(t);
        }
    }
    if let Some(b) = it.next_if(|b| b.head.text.starts_with("imports ")) {
        p.theory.imports = split_top(&b.head.text["imports ".len()..])
            .into_iter()
            .map(|n| name(n, b.head.no))
            .collect::<Result<_, _>>()?;
    }

    for b in it {
        let text = b.head.text;
        let line = b.head.no;
        if let Some(rest) = text.strip_prefix("axiomatic type ") {
            let n = name(rest.trim(), line)?;
            p.claim(&n, line)?;
            p.extend(ExtensionSignature::AxiomaticType { name: n.clone() }, line)?;
            p.theory.axiomatic_types.push(n);
        } else if text.starts_with("datatype ") {
            p.datatype(b)?;
        } else if text.starts_with("operator ") {
            p.operator(b)?;
        } else if text.starts_with("rewrite ") {
            p.rewrite(b)?;
        } else if text.starts_with("inference ") {
            p.inference(b)?;
        } else if let Some(rest) = text.strip_prefix("axiom ") {
            let (n, body) = rest.split_once(':').ok_or_else(|| line_err(line, "expected `axiom name: predicate`"))?;
            let n = name(n.trim(), line)?;
            p.claim(&n, line)?;
            let predicate = p.formula(body.trim(), line)?;
            p.theory.axioms.push(Axiom { name: n, predicate });
        } else {
            return Err(line_err(line, format!("unexpected declaration `{text}`")));
        }
        if !b.body.is_empty() && (text.starts_with("axiom ") || text.starts_with("axiomatic ")) {
            return Err(line_err(b.body[0].no, "unexpected indented line"));
        }
    }
    Ok(p.theory)
}

fn typed_list(items: &[(String, Type)]) -> String {
    items.iter().map(|(n, t)| format!("{n}: {t}")).collect::<Vec<_>>().join(", ")
}

fn f(x: &Formula) -> String {
    print_formula(x, PrintMode::Unicode)
}

/// Prints a theory in the canonical layout accepted by [`parse_theory`].
pub fn print_theory(t: &Theory) -> String {
    let mut out = format!("theory {}\n", t.name);
    if !t.type_params.is_empty() {
        let _ = writeln!(out, "types {}", t.type_params.join(", "));
    }
    if !t.imports.is_empty() {
        let _ = writeln!(out, "imports {}", t.imports.join(", "));
    }
    let mut items: Vec<String> = Vec::new();
    for a in &t.axiomatic_types {
        items.push(format!("axiomatic type {a}\n"));
    }
    for d in &t.datatypes {
        let mut s = format!("datatype {}", d.name);
        if !d.type_params.is_empty() {
            let _ = write!(s, "({})", d.type_params.join(", "));
        }
        s.push('\n');
        for c in &d.constructors {
            let _ = write!(s, "  {}", c.name);
            if !c.destructors.is_empty() {
                let _ = write!(s, "({})", typed_list(&c.destructors));
            }
            s.push('\n');
        }
        items.push(s);
    }
    for o in &t.operators {
        let sig = &o.sig;
        let mut s = format!("operator {}", sig.name);
        if !sig.args.is_empty() {
            let _ = write!(s, "({})", typed_list(&sig.args));
        }
        match &sig.result {
            Some(r) => {
                let _ = write!(s, ": {r}");
            }
            None => s.push_str(" predicate"),
        }
        if sig.notation == Notation::Infix {
            s.push_str(" infix");
        }
        if sig.associative {
            s.push_str(" assoc");
        }
        if sig.commutative {
            s.push_str(" comm");
        }
        if let Some(sym) = &sig.symbol {
            let _ = write!(s, " symbol \"{sym}\"");
        }
        s.push('\n');
        match &o.definition {
            Definition::Direct(body) => {
                let _ = writeln!(s, "  direct {}", f(body));
            }
            Definition::Inductive { scrutinee, cases } => {
                let _ = writeln!(s, "  inductive {scrutinee}");
                for c in cases {
                    let _ = write!(s, "    case {}", c.constructor);
                    if !c.vars.is_empty() {
                        let _ = write!(s, "({})", c.vars.join(", "));
                    }
                    let _ = writeln!(s, ": {}", f(&c.body));
                }
            }
            Definition::Axiomatic { axioms } => {
                if !axioms.is_empty() {
                    let _ = writeln!(s, "  axioms {}", axioms.join(", "));
                }
            }
        }
        if let Some(wd) = &o.wd {
            let _ = writeln!(s, "  wd {}", f(wd));
        }
        items.push(s);
    }
    for r in &t.rewrite_rules {
        let mut s = format!("rewrite {}", r.name);
        if r.automatic {
            s.push_str(" auto");
        }
        if r.complete && r.is_conditional() {
            s.push_str(" complete");
        }
        s.push('\n');
        if !r.vars.is_empty() {
            let _ = writeln!(s, "  vars {}", typed_list(&r.vars));
        }
        let _ = writeln!(s, "  lhs {}", f(&r.lhs));
        for c in &r.cases {
            if !c.condition.is_true() {
                let _ = writeln!(s, "  when {}", f(&c.condition));
            }
            let _ = writeln!(s, "  rhs {}", f(&c.rhs));
        }
        items.push(s);
    }
    for r in &t.inference_rules {
        let mut s = format!("inference {}", r.name);
        if r.automatic {
            s.push_str(" auto");
        }
        if r.applicability != Applicability::Both {
            let _ = write!(s, " {}", r.applicability);
        }
        s.push('\n');
        if !r.vars.is_empty() {
            let _ = writeln!(s, "  vars {}", typed_list(&r.vars));
        }
        for g in &r.givens {
            let _ = writeln!(s, "  given {}", f(g));
        }
        let _ = writeln!(s, "  infer {}", f(&r.infer));
        items.push(s);
    }
    for a in &t.axioms {
        items.push(format!("axiom {}: {}\n", a.name, f(&a.predicate)));
    }
    for item in items {
        out.push('\n');
        out.push_str(&item);
    }
    out
}
