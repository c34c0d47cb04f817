//! Applies rewrite rules by hand: an unconditional rule, a complete
//! conditional rule, and a rule whose match needs a well-definedness goal.

use theoria::prover::{apply, ReasonerInput, Sequent};
use theoria::workspace::Workspace;

fn show(title: &str, seq: &Sequent, input: &ReasonerInput, rules: &theoria::theory::RuleBase) {
    println!("{title}\n  {seq}");
    match apply(seq, input, rules) {
        Ok(out) => {
            for s in out {
                println!("    ↳ {s}");
            }
        }
        Err(e) => println!("    error: {e}"),
    }
}

fn rewrite(theory: &str, rule: &str, position: &str) -> ReasonerInput {
    ReasonerInput::ManualRewrite {
        theory: theory.into(),
        rule: rule.into(),
        hyp: None,
        position: position.parse().unwrap(),
    }
}

fn main() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/workspace");
    let ws = Workspace::load(dir).unwrap();
    let rules = ws.rule_base(&["List".into(), "Logic".into()]).unwrap();
    let seq = |t: &str| Sequent::parse(t, rules.factory()).unwrap();

    show("unconditional", &seq("⊢ list_isEmpty(nil ⦂ List(ℤ))"), &rewrite("List", "isEmpty_nil_rewrite", ""), &rules);
    show(
        "complete conditional",
        &seq("k = cons(1, nil) ⊢ list_isEmpty(k)"),
        &rewrite("List", "isEmpty_rewrite", ""),
        &rules,
    );
    show("well-definedness first", &seq("⊢ (a ÷ b) + 0 = c"), &rewrite("Logic", "add_zero", "0"), &rules);
    show("wrong position", &seq("⊢ (a ÷ b) + 0 = c"), &rewrite("Logic", "add_zero", "1"), &rules);
}
