//! Well-definedness conditions.

use crate::ast::{Binder, Formula, Kind};
use crate::theory::{instantiate, RuleBase};
use crate::typing::Specialisation;

/// The well-definedness predicate of `e`, with `⊤` conjuncts dropped and
/// duplicates removed. Operator conditions come from `rules`.
pub fn wd(e: &Formula, rules: &RuleBase) -> Formula {
    conj(e, conjuncts(e, rules))
}

/// The single conjunction of the well-definedness of every expression a
/// match instantiates, in metavariable name order.
pub fn wd_of_match(s: &Specialisation, rules: &RuleBase) -> Option<Formula> {
    let mut parts = Vec::new();
    let mut ff = None;
    for e in s.vars().values() {
        ff.get_or_insert_with(|| e.clone());
        push_all(&mut parts, conjuncts(e, rules));
    }
    let anchor = ff?;
    let w = conj(&anchor, parts);
    (!w.is_true()).then_some(w)
}

/// `∀binders· w`, keeping only the binders `w` mentions.
pub fn close_over(w: Formula, binders: &[Binder]) -> Formula {
    let used: Vec<Binder> = binders.iter().filter(|b| w.has_free(&b.name)).cloned().collect();
    if used.is_empty() {
        return w;
    }
    Formula::build(&w.factory().clone(), Kind::Forall(used), vec![w], None).expect("quantifier over a predicate")
}

fn conj(anchor: &Formula, parts: Vec<Formula>) -> Formula {
    Formula::conj(anchor.factory(), parts).expect("conjunction of predicates")
}

fn push_all(out: &mut Vec<Formula>, parts: Vec<Formula>) {
    for p in parts {
        if !p.is_true() && !out.contains(&p) {
            out.push(p);
        }
    }
}

fn conjuncts(e: &Formula, rules: &RuleBase) -> Vec<Formula> {
    let mut out = Vec::new();
    for c in e.children() {
        push_all(&mut out, conjuncts(c, rules));
    }
    match e.kind() {
        Kind::Div => {
            let ff = e.factory();
            let zero = Formula::int(ff, 0);
            let divisor = e.children()[1].clone();
            let ne = Formula::build(ff, Kind::NotEqual, vec![divisor, zero], None).expect("binary");
            push_all(&mut out, vec![ne]);
        }
        Kind::Apply(name) => {
            if let Some(op) = rules.operator(name) {
                if let Some(cond) = &op.wd {
                    if let Ok(w) = instantiate(op, e, cond, Vec::new()) {
                        push_all(&mut out, split(&w));
                    }
                }
            }
        }
        Kind::Forall(bs) | Kind::Exists(bs) => {
            if out.is_empty() {
                return out;
            }
            let body = conj(e, out);
            return vec![close_over(body, bs)];
        }
        _ => {}
    }
    out
}

fn split(p: &Formula) -> Vec<Formula> {
    match p.kind() {
        Kind::And => p.children().to_vec(),
        _ => vec![p.clone()],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factory::FormulaFactory;
    use crate::lang::parse_formula;
    use crate::typing::{typecheck, TypeEnvironment};

    fn typed(text: &str) -> Formula {
        typecheck(&parse_formula(text, &FormulaFactory::core()).unwrap(), &TypeEnvironment::new()).unwrap()
    }

    #[test]
    fn total_operators_are_well_defined() {
        assert!(wd(&typed("x + y"), &RuleBase::empty()).is_true());
    }

    #[test]
    fn division_needs_a_non_zero_divisor() {
        let rules = RuleBase::empty();
        let x = typed("x ÷ y");
        assert_eq!(wd(&x, &rules), typed("y ≠ 0"));
        assert_eq!(wd(&typed("(a ÷ b) ÷ c"), &rules), typed("b ≠ 0 ∧ c ≠ 0"));
        assert_eq!(wd(&typed("(a ÷ b) + (a ÷ b)"), &rules), typed("b ≠ 0"));
    }

    #[test]
    fn quantified_conditions_stay_under_their_binders() {
        let rules = RuleBase::empty();
        assert_eq!(wd(&typed("∀n· n ÷ n = 1"), &rules), typed("∀n· n ≠ 0"));
        assert_eq!(wd(&typed("∀n· n ÷ k = 1"), &rules), typed("k ≠ 0"));
    }
}
