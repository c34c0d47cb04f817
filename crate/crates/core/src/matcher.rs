//! Matching typed patterns against typed formulas.
//!
//! Type parameters of the pattern match any type; metavariables match any
//! expression of a compatible type. Operands of associative operators are
//! matched left to right: a metavariable operand takes the fewest subject
//! operands that let the rest of the pattern match, and the last operand
//! takes whatever remains. Only the first match found is returned.

use std::collections::BTreeSet;

use crate::ast::{Formula, Kind, Type};
use crate::typing::Specialisation;

#[derive(Clone, Debug)]
pub struct Pattern {
    formula: Formula,
    metavars: BTreeSet<String>,
    type_params: BTreeSet<String>,
}

impl Pattern {
    pub fn new(
        formula: Formula,
        metavars: impl IntoIterator<Item = String>,
        type_params: impl IntoIterator<Item = String>,
    ) -> Self {
        Pattern { formula, metavars: metavars.into_iter().collect(), type_params: type_params.into_iter().collect() }
    }

    /// A pattern whose metavariables are all of its free identifiers.
    pub fn over_free(formula: Formula, type_params: impl IntoIterator<Item = String>) -> Self {
        let metavars: Vec<String> = formula.free_idents().into_keys().collect();
        Pattern::new(formula, metavars, type_params)
    }

    pub fn formula(&self) -> &Formula {
        &self.formula
    }

    pub fn metavars(&self) -> &BTreeSet<String> {
        &self.metavars
    }

    pub fn type_params(&self) -> &BTreeSet<String> {
        &self.type_params
    }
}

/// Extends `s` so that `pattern` specialised by it equals `subject`.
/// On failure `s` may hold partial bindings.
pub fn match_type(pattern: &Type, subject: &Type, params: &BTreeSet<String>, s: &mut Specialisation) -> bool {
    match (pattern, subject) {
        (Type::Param(n), _) if params.contains(n) => match s.type_of(n) {
            Some(bound) => bound == subject,
            None => s.put_type(n.clone(), subject.clone()).is_ok(),
        },
        (Type::Int, Type::Int) | (Type::Bool, Type::Bool) => true,
        (Type::Param(a), Type::Param(b)) | (Type::Given(a), Type::Given(b)) => a == b,
        (Type::Power(a), Type::Power(b)) => match_type(a, b, params, s),
        (Type::Product(a1, b1), Type::Product(a2, b2)) => {
            match_type(a1, a2, params, s) && match_type(b1, b2, params, s)
        }
        (Type::Datatype(n1, a1), Type::Datatype(n2, a2)) => {
            n1 == n2 && a1.len() == a2.len() && a1.iter().zip(a2).all(|(x, y)| match_type(x, y, params, s))
        }
        _ => false,
    }
}

/// Matches a whole formula.
pub fn match_pattern(p: &Pattern, subject: &Formula) -> Option<Specialisation> {
    Matcher { p }.node(&p.formula, subject, &[], Specialisation::new())
}

/// Matches the operands of an associative pattern node against those of a
/// subject node of the same operator.
pub fn match_assoc(p: &Pattern, pattern_node: &Formula, subject: &Formula) -> Option<Specialisation> {
    if pattern_node.kind() != subject.kind() || !subject.kind().is_associative_in(subject.factory()) {
        return None;
    }
    let mut s = Specialisation::new();
    if let (Some(a), Some(b)) = (pattern_node.ty(), subject.ty()) {
        if !match_type(a, b, &p.type_params, &mut s) {
            return None;
        }
    }
    Matcher { p }.assoc(pattern_node.children(), subject, 0, 0, &[], s)
}

/// The node `kind(run…)` for a run of at least two operands taken from an
/// associative subject, with its type synthesised from the run.
pub fn assoc_run(subject: &Formula, run: &[Formula]) -> Option<Formula> {
    if run.len() == 1 {
        return Some(run[0].clone());
    }
    let ty = match subject.kind() {
        Kind::Comp => {
            let (a, _) = run.first()?.ty()?.relation_parts()?;
            let (_, b) = run.last()?.ty()?.relation_parts()?;
            Some(Type::relation(a.clone(), b.clone()))
        }
        Kind::And | Kind::Or => None,
        _ => run[0].ty().cloned(),
    };
    Formula::build(subject.factory(), subject.kind().clone(), run.to_vec(), ty).ok()
}

struct Matcher<'p> {
    p: &'p Pattern,
}

impl Matcher<'_> {
    fn is_free_metavar(&self, f: &Formula, bound: &[(String, String)]) -> bool {
        match f.kind() {
            Kind::Ident(n) => self.p.metavars.contains(n) && !bound.iter().any(|(pn, _)| pn == n),
            _ => false,
        }
    }

    fn node(
        &self,
        pf: &Formula,
        sf: &Formula,
        bound: &[(String, String)],
        mut s: Specialisation,
    ) -> Option<Specialisation> {
        match (pf.ty(), sf.ty()) {
            (Some(a), Some(b)) => {
                if !match_type(a, b, &self.p.type_params, &mut s) {
                    return None;
                }
            }
            (None, None) => {}
            _ => return None,
        }
        match pf.kind() {
            Kind::Ident(n) => {
                if let Some((_, sn)) = bound.iter().rev().find(|(pn, _)| pn == n) {
                    return (sf.ident_name() == Some(sn.as_str())).then_some(s);
                }
                if self.p.metavars.contains(n) {
                    if bound.iter().any(|(_, sn)| sf.has_free(sn)) {
                        return None;
                    }
                    return match s.var(n) {
                        Some(e) => (e == sf).then_some(s),
                        None => s.put_var(n.clone(), sf.clone()).ok().map(|_| s),
                    };
                }
                let captured = bound.iter().any(|(_, sn)| Some(sn.as_str()) == sf.ident_name());
                (sf.ident_name() == Some(n.as_str()) && !captured).then_some(s)
            }
            Kind::Forall(pbs) | Kind::Exists(pbs) => {
                let sbs = match (pf.kind(), sf.kind()) {
                    (Kind::Forall(_), Kind::Forall(b)) | (Kind::Exists(_), Kind::Exists(b)) => b,
                    _ => return None,
                };
                if pbs.len() != sbs.len() {
                    return None;
                }
                let mut inner = bound.to_vec();
                for (pb, sb) in pbs.iter().zip(sbs) {
                    match (&pb.ty, &sb.ty) {
                        (Some(a), Some(b)) => {
                            if !match_type(a, b, &self.p.type_params, &mut s) {
                                return None;
                            }
                        }
                        (None, None) => {}
                        _ => return None,
                    }
                    inner.push((pb.name.clone(), sb.name.clone()));
                }
                self.node(&pf.children()[0], &sf.children()[0], &inner, s)
            }
            Kind::TypeSet(t) => match sf.kind() {
                Kind::TypeSet(u) => match_type(t, u, &self.p.type_params, &mut s).then_some(s),
                _ => None,
            },
            kind => {
                if kind != sf.kind() {
                    return None;
                }
                if kind.is_associative_in(sf.factory()) {
                    return self.assoc(pf.children(), sf, 0, 0, bound, s);
                }
                if pf.children().len() != sf.children().len() {
                    return None;
                }
                for (pc, sc) in pf.children().iter().zip(sf.children()) {
                    s = self.node(pc, sc, bound, s)?;
                }
                Some(s)
            }
        }
    }

    fn assoc(
        &self,
        pats: &[Formula],
        subject: &Formula,
        pi: usize,
        si: usize,
        bound: &[(String, String)],
        s: Specialisation,
    ) -> Option<Specialisation> {
        let subs = subject.children();
        if pi == pats.len() {
            return (si == subs.len()).then_some(s);
        }
        let rest = pats.len() - pi - 1;
        let avail = subs.len() - si;
        if avail < 1 + rest {
            return None;
        }
        let p = &pats[pi];
        if !self.is_free_metavar(p, bound) {
            let s = self.node(p, &subs[si], bound, s)?;
            return self.assoc(pats, subject, pi + 1, si + 1, bound, s);
        }
        let max = avail - rest;
        let min = if rest == 0 { max } else { 1 };
        for k in min..=max {
            let Some(run) = assoc_run(subject, &subs[si..si + k]) else { continue };
            if let Some(s2) = self.node(p, &run, bound, s.clone()) {
                if let Some(done) = self.assoc(pats, subject, pi + 1, si + k, bound, s2) {
                    return Some(done);
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factory::FormulaFactory;
    use crate::lang::parse_formula;
    use crate::typing::{specialise, typecheck, TypeEnvironment};

    fn rel() -> Type {
        Type::relation(Type::Int, Type::Int)
    }

    fn typed(text: &str, env: &TypeEnvironment) -> Formula {
        typecheck(&parse_formula(text, &FormulaFactory::core()).unwrap(), env).unwrap()
    }

    fn env() -> TypeEnvironment {
        let mut e = TypeEnvironment::new();
        for v in ["f", "g", "h", "e"] {
            e = e.with_var(v, rel());
        }
        for v in ["x", "y", "c"] {
            e = e.with_var(v, Type::Int);
        }
        e
    }

    #[test]
    fn greedy_rows() {
        let env = env();
        let subject = typed("g;h;{y ↦ c}", &env);

        let p = Pattern::over_free(typed("f;{x ↦ c}", &env), []);
        let s = match_pattern(&p, &subject).unwrap();
        assert_eq!(s.var("f").unwrap().to_string(), "g ; h");
        assert_eq!(s.var("x").unwrap().to_string(), "y");
        assert_eq!(s.var("c").unwrap().to_string(), "c");
        assert_eq!(specialise(p.formula(), &s, &env).unwrap(), subject);

        let p = Pattern::over_free(typed("e;f", &env), []);
        let s = match_pattern(&p, &subject).unwrap();
        assert_eq!(s.var("e").unwrap().to_string(), "g");
        assert_eq!(s.var("f").unwrap().to_string(), "h ; {y ↦ c}");
    }

    #[test]
    fn type_parameters() {
        let params: BTreeSet<String> = ["S".to_string()].into();
        let mut s = Specialisation::new();
        let subject = Type::power(Type::Given("S".into()));
        assert!(match_type(&Type::Param("S".into()), &subject, &params, &mut s));
        assert_eq!(s.type_of("S"), Some(&subject));
    }

    #[test]
    fn conflicting_bindings_fail() {
        let env = env();
        let p = Pattern::over_free(typed("x + x", &env), []);
        assert!(match_pattern(&p, &typed("1 + 2", &env)).is_none());
        assert!(match_pattern(&p, &typed("2 + 2", &env)).is_some());
    }

    #[test]
    fn bound_variables_are_not_captured() {
        let env = env();
        let p = Pattern::over_free(typed("∀z· z = x", &env), []);
        assert!(match_pattern(&p, &typed("∀w ⦂ ℤ· w = w", &env)).is_none());
        let s = match_pattern(&p, &typed("∀w· w = y + 1", &env)).unwrap();
        assert_eq!(s.var("x").unwrap().to_string(), "y + 1");
    }
}
