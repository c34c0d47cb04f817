use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use super::compile::Typed;
use super::{Applicability, Definition, Theory};
use crate::ast::{Formula, Kind, Type};
use crate::error::TypeError;
use crate::typing::{typecheck, typecheck_all, TypeEnvironment};

/// A problem found by [`validate_theory`], naming the offending item.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Diagnostic {
    #[error("duplicate name `{0}`")]
    DuplicateName(String),
    #[error("`{item}`: {error}")]
    Type { item: String, error: TypeError },
    #[error("`{item}`: expected {expected}, found {found}")]
    TypeMismatch { item: String, expected: String, found: String },
    #[error("`{item}` uses undeclared variable `{variable}`")]
    UndeclaredVariable { item: String, variable: String },
    #[error("inductive definition of `{operator}` has no case for `{constructor}`")]
    IncompleteInduction { operator: String, constructor: String },
    #[error("inductive definition of `{operator}` has several cases for `{constructor}`")]
    DuplicateInductionCase { operator: String, constructor: String },
    #[error("inductive definition of `{operator}`: `{constructor}` is not a constructor of the scrutinee's type")]
    UnknownInductionCase { operator: String, constructor: String },
    #[error("inductive definition of `{operator}`: case `{constructor}` binds {found} variable(s) but the constructor has {expected}")]
    CaseArity { operator: String, constructor: String, expected: usize, found: usize },
    #[error("inductive definition of `{operator}`: invalid scrutinee `{scrutinee}`")]
    InvalidScrutinee { operator: String, scrutinee: String },
    #[error("rewrite rule `{rule}`: `{variable}` does not occur in the left-hand side")]
    UnboundRhsVariable { rule: String, variable: String },
    #[error("inference rule `{rule}`: `{variable}` is not bound when applied {direction}")]
    UnboundInferenceVariable { rule: String, variable: String, direction: &'static str },
    #[error("datatype `{0}` has no non-recursive constructor")]
    NoBaseConstructor(String),
    #[error("`{item}`: {reason}")]
    Invalid { item: String, reason: String },
}

fn invalid(item: &str, reason: impl Into<String>) -> Diagnostic {
    Diagnostic::Invalid { item: item.to_string(), reason: reason.into() }
}

/// Checks every structural and typing invariant of a theory. An empty
/// result means the theory compiles.
pub fn validate_theory(t: &Theory) -> Vec<Diagnostic> {
    check(t).0
}

fn free_names(fs: &[&Formula]) -> BTreeSet<String> {
    fs.iter().flat_map(|f| f.free_idents().into_keys()).collect()
}

fn undeclared(item: &str, fs: &[&Formula], declared: &BTreeSet<String>, out: &mut Vec<Diagnostic>) -> bool {
    let mut ok = true;
    for v in free_names(fs) {
        if !declared.contains(&v) {
            out.push(Diagnostic::UndeclaredVariable { item: item.to_string(), variable: v });
            ok = false;
        }
    }
    ok
}

fn type_error(item: &str, error: TypeError) -> Diagnostic {
    Diagnostic::Type { item: item.to_string(), error }
}

fn shape(f: &Formula) -> String {
    match f.ty() {
        Some(t) => t.to_string(),
        None => "a predicate".to_string(),
    }
}

pub(super) fn check(t: &Theory) -> (Vec<Diagnostic>, Typed) {
    let mut out = Vec::new();
    let mut typed = Typed::default();
    let base_env = TypeEnvironment { type_params: t.type_params.iter().cloned().collect(), ..Default::default() };

    let mut seen = BTreeSet::new();
    let mut names: Vec<&str> = t.type_params.iter().map(String::as_str).collect();
    names.extend(t.axiomatic_types.iter().map(String::as_str));
    for d in &t.datatypes {
        names.push(&d.name);
        for c in &d.constructors {
            names.push(&c.name);
            names.extend(c.destructors.iter().map(|(n, _)| n.as_str()));
        }
    }
    names.extend(t.operators.iter().map(|o| o.sig.name.as_str()));
    names.extend(t.rewrite_rules.iter().map(|r| r.name.as_str()));
    names.extend(t.inference_rules.iter().map(|r| r.name.as_str()));
    names.extend(t.axioms.iter().map(|a| a.name.as_str()));
    for n in names {
        if !seen.insert(n) {
            out.push(Diagnostic::DuplicateName(n.to_string()));
        }
    }

    for d in &t.datatypes {
        if d.constructors.is_empty() {
            out.push(invalid(&d.name, "datatype has no constructors"));
            continue;
        }
        let mentions_self = |ty: &Type| {
            let mut hit = false;
            ty.collect_names(&mut |x| hit |= matches!(x, Type::Datatype(n, _) if *n == d.name));
            hit
        };
        if d.constructors.iter().all(|c| c.destructors.iter().any(|(_, ty)| mentions_self(ty))) {
            out.push(Diagnostic::NoBaseConstructor(d.name.clone()));
        }
    }

    let axiom_names: BTreeSet<&str> = t.axioms.iter().map(|a| a.name.as_str()).collect();
    for op in &t.operators {
        let item = op.sig.name.as_str();
        let mut env = base_env.clone();
        for (n, ty) in &op.sig.args {
            if env.vars.insert(n.clone(), ty.clone()).is_some() {
                out.push(invalid(item, format!("duplicate argument `{n}`")));
            }
        }
        let args: BTreeSet<String> = env.vars.keys().cloned().collect();
        let check_body = |body: &Formula, env: &TypeEnvironment, out: &mut Vec<Diagnostic>| -> Option<Formula> {
            let typed = match typecheck(body, env) {
                Ok(f) => f,
                Err(e) => {
                    out.push(type_error(item, e));
                    return None;
                }
            };
            let want = op.sig.result.as_ref().map(|r| r.to_string()).unwrap_or_else(|| "a predicate".into());
            if typed.ty() != op.sig.result.as_ref() || typed.is_predicate() != op.sig.is_predicate() {
                out.push(Diagnostic::TypeMismatch { item: item.to_string(), expected: want, found: shape(&typed) });
                return None;
            }
            Some(typed)
        };
        match &op.definition {
            Definition::Direct(body) => {
                let mut refers_to_self = false;
                body.visit(&mut |n| refers_to_self |= matches!(n.kind(), Kind::Apply(x) if x == item));
                if refers_to_self {
                    out.push(invalid(item, "a direct definition cannot refer to itself"));
                } else if undeclared(item, &[body], &args, &mut out) {
                    if let Some(b) = check_body(body, &env, &mut out) {
                        typed.direct.insert(item.to_string(), b);
                    }
                }
            }
            Definition::Inductive { scrutinee, cases } => {
                let dt = op
                    .sig
                    .args
                    .iter()
                    .find(|(n, _)| n == scrutinee)
                    .and_then(|(_, ty)| match ty {
                        Type::Datatype(d, targs) => Some((d.clone(), targs.clone())),
                        _ => None,
                    })
                    .and_then(|(d, targs)| {
                        let sig = op_factory_datatype(t, cases, &d)?;
                        Some((sig, targs))
                    });
                let Some((dsig, targs)) = dt else {
                    out.push(Diagnostic::InvalidScrutinee { operator: item.to_string(), scrutinee: scrutinee.clone() });
                    continue;
                };
                let mut by_ctor: BTreeMap<&str, usize> = BTreeMap::new();
                for c in cases {
                    *by_ctor.entry(c.constructor.as_str()).or_default() += 1;
                }
                for c in &dsig.constructors {
                    match by_ctor.get(c.name.as_str()) {
                        None => out.push(Diagnostic::IncompleteInduction {
                            operator: item.to_string(),
                            constructor: c.name.clone(),
                        }),
                        Some(n) if *n > 1 => out.push(Diagnostic::DuplicateInductionCase {
                            operator: item.to_string(),
                            constructor: c.name.clone(),
                        }),
                        _ => {}
                    }
                }
                let inst: BTreeMap<&String, &Type> = dsig.type_params.iter().zip(&targs).collect();
                let mut typed_cases = BTreeMap::new();
                for case in cases {
                    let Some(ctor) = dsig.constructor(&case.constructor) else {
                        out.push(Diagnostic::UnknownInductionCase {
                            operator: item.to_string(),
                            constructor: case.constructor.clone(),
                        });
                        continue;
                    };
                    if ctor.destructors.len() != case.vars.len() {
                        out.push(Diagnostic::CaseArity {
                            operator: item.to_string(),
                            constructor: case.constructor.clone(),
                            expected: ctor.destructors.len(),
                            found: case.vars.len(),
                        });
                        continue;
                    }
                    let mut case_env = env.clone();
                    let mut declared = args.clone();
                    for (v, (_, dty)) in case.vars.iter().zip(&ctor.destructors) {
                        let ty = dty.map(&|x| match x {
                            Type::Param(p) => inst.get(p).map(|t| (*t).clone()),
                            _ => None,
                        });
                        if case_env.vars.insert(v.clone(), ty).is_some() {
                            out.push(invalid(item, format!("case variable `{v}` shadows another variable")));
                        }
                        declared.insert(v.clone());
                    }
                    if undeclared(item, &[&case.body], &declared, &mut out) {
                        if let Some(b) = check_body(&case.body, &case_env, &mut out) {
                            typed_cases.insert(case.constructor.clone(), (case.vars.clone(), b));
                        }
                    }
                }
                let index = op.sig.args.iter().position(|(n, _)| n == scrutinee).expect("scrutinee found above");
                typed.inductive.insert(item.to_string(), (index, typed_cases));
            }
            Definition::Axiomatic { axioms } => {
                for a in axioms {
                    if !axiom_names.contains(a.as_str()) {
                        out.push(invalid(item, format!("unknown axiom `{a}`")));
                    }
                }
            }
        }
        if let Some(wd) = &op.wd {
            if !wd.is_predicate() {
                out.push(invalid(item, "the well-definedness condition must be a predicate"));
            } else if undeclared(item, &[wd], &args, &mut out) {
                match typecheck(wd, &env) {
                    Ok(w) => {
                        typed.wd.insert(item.to_string(), w);
                    }
                    Err(e) => out.push(type_error(item, e)),
                }
            }
        }
    }

    for r in &t.rewrite_rules {
        let item = r.name.as_str();
        let mut env = base_env.clone();
        env.vars.extend(r.vars.iter().cloned());
        let declared: BTreeSet<String> = env.vars.keys().cloned().collect();
        if matches!(r.lhs.kind(), Kind::Ident(_)) {
            out.push(invalid(item, "the left-hand side must not be a variable"));
            continue;
        }
        let mut parts = vec![&r.lhs];
        for c in &r.cases {
            parts.push(&c.condition);
            parts.push(&c.rhs);
        }
        if !undeclared(item, &parts, &declared, &mut out) {
            continue;
        }
        let lhs_vars = r.lhs.free_idents();
        for c in &r.cases {
            for v in free_names(&[&c.condition, &c.rhs]) {
                if !lhs_vars.contains_key(&v) {
                    out.push(Diagnostic::UnboundRhsVariable { rule: item.to_string(), variable: v });
                }
            }
            if !c.condition.is_predicate() {
                out.push(invalid(item, "a condition must be a predicate"));
            }
        }
        let owned: Vec<Formula> = parts.iter().map(|f| (*f).clone()).collect();
        match typecheck_all(&owned, &env) {
            Ok((fs, _)) => {
                let lhs = &fs[0];
                let mut ok = true;
                for pair in fs[1..].chunks(2) {
                    let rhs = &pair[1];
                    if rhs.ty() != lhs.ty() || rhs.is_predicate() != lhs.is_predicate() {
                        out.push(Diagnostic::TypeMismatch {
                            item: item.to_string(),
                            expected: shape(lhs),
                            found: shape(rhs),
                        });
                        ok = false;
                    }
                }
                if ok {
                    typed.rewrites.insert(item.to_string(), fs);
                }
            }
            Err(e) => out.push(type_error(item, e)),
        }
    }

    for r in &t.inference_rules {
        let item = r.name.as_str();
        let mut env = base_env.clone();
        env.vars.extend(r.vars.iter().cloned());
        let declared: BTreeSet<String> = env.vars.keys().cloned().collect();
        let mut parts: Vec<&Formula> = r.givens.iter().collect();
        parts.push(&r.infer);
        if parts.iter().any(|f| !f.is_predicate()) {
            out.push(invalid(item, "givens and the inferred clause must be predicates"));
            continue;
        }
        if !undeclared(item, &parts, &declared, &mut out) {
            continue;
        }
        if r.applicability.allows(super::Direction::Backward) {
            let bound = r.infer.free_idents();
            for v in free_names(&r.givens.iter().collect::<Vec<_>>()) {
                if !bound.contains_key(&v) {
                    out.push(Diagnostic::UnboundInferenceVariable {
                        rule: item.to_string(),
                        variable: v,
                        direction: "backward",
                    });
                }
            }
        }
        if r.applicability != Applicability::Backward {
            let bound: BTreeSet<String> =
                r.givens.first().map(|g| g.free_idents().into_keys().collect()).unwrap_or_default();
            let mut rest: Vec<&Formula> = r.givens.iter().skip(1).collect();
            rest.push(&r.infer);
            for v in free_names(&rest) {
                if !bound.contains(&v) {
                    out.push(Diagnostic::UnboundInferenceVariable {
                        rule: item.to_string(),
                        variable: v,
                        direction: "forward",
                    });
                }
            }
        }
        let owned: Vec<Formula> = parts.iter().map(|f| (*f).clone()).collect();
        match typecheck_all(&owned, &env) {
            Ok((fs, _)) => {
                typed.inferences.insert(item.to_string(), fs);
            }
            Err(e) => out.push(type_error(item, e)),
        }
    }

    for a in &t.axioms {
        let item = a.name.as_str();
        if !a.predicate.is_predicate() {
            out.push(invalid(item, "an axiom must be a predicate"));
            continue;
        }
        if !undeclared(item, &[&a.predicate], &BTreeSet::new(), &mut out) {
            continue;
        }
        match typecheck(&a.predicate, &base_env) {
            Ok(f) => {
                typed.axioms.insert(item.to_string(), f);
            }
            Err(e) => out.push(type_error(item, e)),
        }
    }

    (out, typed)
}

/// The datatype signature an inductive definition ranges over, looked up
/// in the theory itself or in the factory of its case bodies.
fn op_factory_datatype(t: &Theory, cases: &[super::InductiveCase], name: &str) -> Option<crate::factory::DatatypeSig> {
    if let Some(d) = t.datatypes.iter().find(|d| d.name == name) {
        return Some(d.clone());
    }
    cases.first().and_then(|c| c.body.factory().datatype(name).cloned())
}
