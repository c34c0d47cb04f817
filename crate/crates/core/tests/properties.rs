mod support;

use proptest::prelude::*;

use support::*;
use theoria::factory::signature_equal;
use theoria::lang::parse_formula;
use theoria::matcher::{match_pattern, Pattern};
use theoria::typing::{specialise, typecheck, Specialisation, TypeEnvironment};
use theoria::{FormulaFactory, Type};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn specialisation_preserves_types(case in specialisation_case()) {
        prop_assert_eq!(check_specialisation(&case), Ok(()));
    }

    #[test]
    fn printing_round_trips(text in real_formula()) {
        let rules = fixture_rules(&["Real"]);
        prop_assert_eq!(check_round_trip(&text, rules.factory()), Ok(()));
    }

    #[test]
    fn well_definedness_comes_first(case in wd_case()) {
        let rules = fixture_rules(&["Logic"]);
        prop_assert_eq!(check_wd_first(&case, &rules), Ok(()));
    }

    #[test]
    fn signature_equality_is_reflexive_and_symmetric(a in signature(), b in signature()) {
        prop_assert!(signature_equal(&a, &a));
        prop_assert_eq!(signature_equal(&a, &b), signature_equal(&b, &a));
    }

    #[test]
    fn signature_equality_is_transitive(a in signature(), b in signature(), c in signature()) {
        if signature_equal(&a, &b) && signature_equal(&b, &c) {
            prop_assert!(signature_equal(&a, &c));
        }
    }

    #[test]
    fn matching_is_deterministic(
        p in proptest::sample::select(all_patterns()),
        s in proptest::sample::select(all_subjects()),
    ) {
        prop_assert_eq!(matcher_match(&p, &s), matcher_match(&p, &s));
    }

    #[test]
    fn composition_is_sequential_application(a in 0i64..5, b in 0i64..5) {
        let ff = FormulaFactory::core();
        let env = TypeEnvironment::new().with_var("x", Type::Int).with_var("y", Type::Int).with_var("z", Type::Int);
        let typed = |t: &str| typecheck(&parse_formula(t, &ff).unwrap(), &env).unwrap();
        let f = typed("x + y ∗ z");
        let mut first = Specialisation::new();
        first.put_var("x", typed(&format!("y + {a}"))).unwrap();
        let mut then = Specialisation::new();
        then.put_var("y", typed(&format!("z ∗ {b}"))).unwrap();
        let stepwise = specialise(&specialise(&f, &first, &env).unwrap(), &then, &env).unwrap();
        let composed = specialise(&f, &first.compose(&then).unwrap(), &env).unwrap();
        prop_assert_eq!(stepwise, composed);
    }
}

#[test]
fn greedy_matching_agrees_with_exhaustive_search() {
    let (bad, total) = greedy_discrepancies();
    assert!(total > 0);
    assert!(bad.is_empty(), "{} of {total} disagree, first: {}", bad.len(), bad[0]);
}

#[test]
fn commutativity_is_not_exploited() {
    let rules = fixture_rules(&["Real"]);
    let ff = rules.factory();
    let env = TypeEnvironment::new();
    let typed = |t: &str| typecheck(&parse_formula(t, ff).unwrap(), &env).unwrap();
    let p = Pattern::over_free(typed("x ⊕ zero"), []);
    assert!(match_pattern(&p, &typed("y ⊕ zero")).is_some());
    assert!(match_pattern(&p, &typed("zero ⊕ y")).is_none());
}
