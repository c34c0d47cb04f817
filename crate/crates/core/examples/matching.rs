//! Matches patterns against associative compositions. Metavariables take
//! the shortest run of operands that lets the rest of the pattern match.

use theoria::lang::parse_formula;
use theoria::matcher::{match_pattern, Pattern};
use theoria::typing::{typecheck, TypeEnvironment};
use theoria::{FormulaFactory, Type};

fn main() {
    let rel = Type::relation(Type::Int, Type::Int);
    let mut env = TypeEnvironment::new().with_var("x", Type::Int).with_var("y", Type::Int).with_var("c", Type::Int);
    for v in ["e", "f", "g", "h"] {
        env = env.with_var(v, rel.clone());
    }
    let ff = FormulaFactory::core();
    let typed = |t: &str| typecheck(&parse_formula(t, &ff).unwrap(), &env).unwrap();

    let subject = typed("g ; h ; {y ↦ c}");
    for pattern in ["f ; {x ↦ c}", "e ; f", "e ; {x ↦ x}"] {
        let p = Pattern::over_free(typed(pattern), []);
        match match_pattern(&p, &subject) {
            Some(s) => {
                let bindings: Vec<String> = s.vars().iter().map(|(k, v)| format!("{k} := {v}")).collect();
                println!("{pattern}  matches  {subject}  with {{{}}}", bindings.join(", "));
            }
            None => println!("{pattern}  does not match  {subject}"),
        }
    }
}
