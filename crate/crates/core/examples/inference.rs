//! Uses inference rules backwards on the goal and forwards on a hypothesis.

use theoria::prover::{apply, ReasonerInput, Sequent};
use theoria::workspace::Workspace;

fn main() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/workspace");
    let ws = Workspace::load(dir).unwrap();
    let rules = ws.rule_base(&["List".into(), "Logic".into()]).unwrap();
    let seq = |t: &str| Sequent::parse(t, rules.factory()).unwrap();
    let infer = |theory: &str, rule: &str, hyp| ReasonerInput::ManualInference {
        theory: theory.into(),
        rule: rule.into(),
        hyp,
    };

    let cases = [
        ("backward", seq("⊢ p + q = r + s"), infer("Logic", "add_congruence", None)),
        ("backward, no givens", seq("⊢ list_isEmpty(nil ⦂ List(ℤ))"), infer("List", "isEmpty_nil_inference", None)),
        ("forward", seq("l = cons(7, nil) ⊢ list_length(l) = 1"), infer("List", "length_cons_inference", Some(0))),
        ("forward, no match", seq("a ∈ ℤ ⊢ ⊥"), infer("Logic", "eq_sym", Some(0))),
    ];
    for (title, s, input) in cases {
        println!("{title}\n  {s}");
        match apply(&s, &input, &rules) {
            Ok(out) if out.is_empty() => println!("    closed"),
            Ok(out) => out.iter().for_each(|a| println!("    ↳ {a}")),
            Err(e) => println!("    error: {e}"),
        }
    }
}
