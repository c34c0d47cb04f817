//! Factories built from different theories can be combined when every
//! extension they share has the same signature.

use theoria::factory::{factories_compatible, first_conflict};
use theoria::lang::parse_theory;
use theoria::theory::compile_factory;

fn main() {
    let build = |text: &str| compile_factory(&parse_theory(text, &[]).unwrap(), &[]).unwrap();
    let base = build("theory A\n\noperator inc(x: ℤ): ℤ\n  direct x + 1\n");
    let others = [
        ("same signature, other definition", "theory B\n\noperator inc(x: ℤ): ℤ\n  direct 1 + x\n"),
        ("other argument type", "theory C\n\noperator inc(x: BOOL): ℤ\n  direct 0\n"),
        ("unrelated extension", "theory D\n\naxiomatic type S\n"),
    ];
    for (title, text) in others {
        let other = build(text);
        match first_conflict(&base, &other) {
            None => println!("{title}: compatible ({})", factories_compatible(&base, &other)),
            Some(name) => println!("{title}: conflict on {name}"),
        }
    }
}
