//! Infers types, then substitutes a type parameter and a variable at the
//! same time. Bound variables are renamed rather than capturing.

use theoria::lang::parse_formula;
use theoria::typing::{apply_type, specialise, typecheck, Specialisation, TypeEnvironment};
use theoria::{FormulaFactory, Type};

fn main() {
    let ff = FormulaFactory::core();
    let env = TypeEnvironment::new().with_type_param("T").with_var("s", Type::power(Type::Param("T".into())));
    let f = typecheck(&parse_formula("∀y· y ∈ s ⇒ s ⊆ {y}", &ff).unwrap(), &env).unwrap();
    println!("formula:  {f}");

    let int_set = Type::power(Type::Int);
    let mut s = Specialisation::new();
    s.put_type("T", Type::Int).unwrap();
    let replacement = typecheck(&parse_formula("0 ‥ y", &ff).unwrap(), &TypeEnvironment::new()).unwrap();
    s.put_var("s", replacement).unwrap();

    let out = specialise(&f, &s, &env).unwrap();
    println!("T := ℤ, s := 0 ‥ y");
    println!("result:   {out}");
    println!(
        "type of s: {} becomes {}",
        Type::power(Type::Param("T".into())),
        apply_type(&Type::power(Type::Param("T".into())), &s)
    );
    assert_eq!(apply_type(&Type::power(Type::Param("T".into())), &s), int_set);
}
