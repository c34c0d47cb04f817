//! Loads a directory of theories, lists what each one adds and reports the
//! axioms generated for axiomatic types. Also shows a rejected theory.

use theoria::lang::parse_theory;
use theoria::theory::validate_theory;
use theoria::workspace::Workspace;

fn main() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/workspace");
    let ws = Workspace::load(dir).expect("fixture theories load");
    for name in ws.theory_names() {
        let t = &ws.theory(name).unwrap().compiled;
        println!("theory {name}");
        for op in &t.operators {
            println!("  operator {}", op.sig.name);
        }
        for r in &t.rewrite_rules {
            println!("  rewrite {}{}", r.name, if r.automatic { " (auto)" } else { "" });
        }
        for r in &t.inference_rules {
            println!("  inference {}", r.name);
        }
        for a in &t.axioms {
            println!("  axiom {}: {}", a.name, a.predicate);
        }
    }

    let broken = "theory Broken\n\nrewrite lost\n  vars a: ℤ, b: ℤ\n  lhs a + 0\n  rhs b\n";
    let t = parse_theory(broken, &[]).unwrap();
    for d in validate_theory(&t) {
        println!("Broken: {d}");
    }
}
