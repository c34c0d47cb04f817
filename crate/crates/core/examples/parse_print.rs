//! Parses formulas that use a theory's infix operators and prints them back
//! in both notations.

use theoria::lang::{parse_formula, print_formula, PrintMode};
use theoria::typing::{typecheck, TypeEnvironment};
use theoria::workspace::Workspace;

fn main() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/workspace");
    let ws = Workspace::load(dir).expect("fixture theories load");
    let rules = ws.rule_base(&["Real".to_string()]).expect("Real is defined");

    for text in ["x sum y ≺ one", "∀x ⦂ Real· ¬ x ≺ x", "minus(a ⊕ b) = div(a, one)"] {
        let parsed = parse_formula(text, rules.factory()).expect("well formed");
        let typed = typecheck(&parsed, &TypeEnvironment::new()).expect("well typed");
        println!("{text}");
        println!("  unicode: {}", print_formula(&typed, PrintMode::Unicode));
        println!("  ascii:   {}", print_formula(&typed, PrintMode::Ascii));
    }
}
