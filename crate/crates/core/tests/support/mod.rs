//! Generators and independent oracles shared by the property suite and the
//! acceptance run.

#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::sync::Arc;

use proptest::prelude::*;
use proptest::strategy::{BoxedStrategy, Just, Strategy};

use theoria::factory::{
    ConstructorSig, DatatypeSig, ExtensionSignature, FormulaFactory, FormulaKind, Notation, OperatorSig,
};
use theoria::lang::{parse_formula, print_formula, PrintMode};
use theoria::matcher::{match_pattern, Pattern};
use theoria::prover::{apply, ReasonerInput, Sequent};
use theoria::theory::RuleBase;
use theoria::typing::{apply_type, specialise, specialise_env, typecheck, Specialisation, TypeEnvironment};
use theoria::workspace::Workspace;
use theoria::{Formula, Position, Type};

pub fn fixture(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(rel)
}

pub fn fixture_rules(uses: &[&str]) -> RuleBase {
    let ws = Workspace::load(fixture("workspace")).expect("fixture workspace loads");
    let uses: Vec<String> = uses.iter().map(|s| s.to_string()).collect();
    ws.rule_base(&uses).expect("fixture theories exist")
}

pub fn copy_dir(from: &Path, to: &Path) {
    std::fs::create_dir_all(to).unwrap();
    for entry in std::fs::read_dir(from).unwrap() {
        let entry = entry.unwrap();
        let target = to.join(entry.file_name());
        if entry.file_type().unwrap().is_dir() {
            copy_dir(&entry.path(), &target);
        } else {
            std::fs::copy(entry.path(), target).unwrap();
        }
    }
}

// Specialisation ------------------------------------------------------------

/// The shapes of expression the type-safety generator produces, over a
/// single type parameter `T`.
#[derive(Clone, Copy, Debug)]
enum Shape {
    Int,
    T,
    PowT,
    PowInt,
    PairTInt,
}

const SHAPES: [Shape; 5] = [Shape::Int, Shape::T, Shape::PowT, Shape::PowInt, Shape::PairTInt];

fn shape_type(s: Shape) -> Type {
    let t = Type::Param("T".into());
    match s {
        Shape::Int => Type::Int,
        Shape::T => t,
        Shape::PowT => Type::power(t),
        Shape::PowInt => Type::power(Type::Int),
        Shape::PairTInt => Type::product(t, Type::Int),
    }
}

/// Free variables of generated formulas and their types.
pub fn generic_vars() -> Vec<(&'static str, Type)> {
    vec![
        ("i1", shape_type(Shape::Int)),
        ("i2", shape_type(Shape::Int)),
        ("t1", shape_type(Shape::T)),
        ("t2", shape_type(Shape::T)),
        ("s1", shape_type(Shape::PowT)),
        ("p1", shape_type(Shape::PairTInt)),
    ]
}

pub fn generic_env() -> TypeEnvironment {
    let mut env = TypeEnvironment::new().with_type_param("T");
    for (v, t) in generic_vars() {
        env = env.with_var(v, t);
    }
    env
}

fn bin(a: BoxedStrategy<String>, b: BoxedStrategy<String>, op: &'static str) -> BoxedStrategy<String> {
    (a, b).prop_map(move |(a, b)| format!("({a} {op} {b})")).boxed()
}

fn shaped(s: Shape, depth: u32) -> BoxedStrategy<String> {
    let leaf: BoxedStrategy<String> = match s {
        Shape::Int => {
            prop_oneof![Just("i1".to_string()), Just("i2".to_string()), (0i64..10).prop_map(|n| n.to_string())].boxed()
        }
        Shape::T => prop_oneof![Just("t1".to_string()), Just("t2".to_string())].boxed(),
        Shape::PowT => prop_oneof![Just("s1".to_string()), Just("T".to_string())].boxed(),
        Shape::PowInt => prop_oneof![Just("ℤ".to_string()), Just("{i1}".to_string())].boxed(),
        Shape::PairTInt => Just("p1".to_string()).boxed(),
    };
    if depth == 0 {
        return leaf;
    }
    let d = depth - 1;
    let node: BoxedStrategy<String> = match s {
        Shape::Int => prop_oneof![
            bin(shaped(Shape::Int, d), shaped(Shape::Int, d), "+"),
            bin(shaped(Shape::Int, d), shaped(Shape::Int, d), "−"),
            bin(shaped(Shape::Int, d), shaped(Shape::Int, d), "∗"),
        ]
        .boxed(),
        Shape::T => leaf.clone(),
        Shape::PowT => prop_oneof![
            shaped(Shape::T, d).prop_map(|e| format!("{{{e}}}")),
            bin(shaped(Shape::PowT, d), shaped(Shape::PowT, d), "∪"),
            bin(shaped(Shape::PowT, d), shaped(Shape::PowT, d), "∩"),
        ]
        .boxed(),
        Shape::PowInt => prop_oneof![
            bin(shaped(Shape::Int, d), shaped(Shape::Int, d), "‥"),
            shaped(Shape::Int, d).prop_map(|e| format!("{{{e}}}")),
        ]
        .boxed(),
        Shape::PairTInt => bin(shaped(Shape::T, d), shaped(Shape::Int, d), "↦"),
    };
    prop_oneof![1 => leaf, 2 => node].boxed()
}

fn predicate(depth: u32) -> BoxedStrategy<String> {
    let atoms = prop_oneof![
        (0..SHAPES.len()).prop_flat_map(|i| {
            let s = SHAPES[i];
            (shaped(s, 2), shaped(s, 2)).prop_map(|(a, b)| format!("{a} = {b}"))
        }),
        (shaped(Shape::T, 1), shaped(Shape::PowT, 2)).prop_map(|(a, b)| format!("{a} ∈ {b}")),
        (shaped(Shape::PowInt, 2), shaped(Shape::PowInt, 2)).prop_map(|(a, b)| format!("{a} ⊆ {b}")),
    ]
    .boxed();
    if depth == 0 {
        return atoms;
    }
    let d = depth - 1;
    prop_oneof![
        2 => atoms,
        1 => (predicate(d), predicate(d)).prop_map(|(a, b)| format!("({a}) ∧ ({b})")),
        1 => (predicate(d), predicate(d)).prop_map(|(a, b)| format!("({a}) ⇒ ({b})")),
        1 => predicate(d).prop_map(|a| format!("¬ ({a})")),
        1 => (shaped(Shape::PowT, 1), predicate(d)).prop_map(|(s, p)| format!("∀u1· u1 ∈ {s} ∧ ({p})")),
        1 => (shaped(Shape::Int, 1), predicate(d)).prop_map(|(e, p)| format!("∃w1· w1 = {e} + w1 ∧ ({p})")),
    ]
    .boxed()
}

/// Concrete instances of `T`.
fn target_types() -> Vec<Type> {
    vec![
        Type::Int,
        Type::power(Type::Int),
        Type::product(Type::Int, Type::Int),
        Type::Param("U".into()),
        Type::Param("T".into()),
    ]
}

/// An expression of type `ty` over `u1 : ℤ` and `w1 : target`. The names
/// are chosen to collide with binders of the generated formulas.
fn concrete(ty: &Type, target: &Type, depth: u32) -> BoxedStrategy<String> {
    let mut options: Vec<BoxedStrategy<String>> = Vec::new();
    if ty == target {
        options.push(Just("w1".to_string()).boxed());
    }
    match ty {
        Type::Int => {
            options.push(Just("u1".to_string()).boxed());
            options.push((0i64..5).prop_map(|n| n.to_string()).boxed());
            if depth > 0 {
                options.push(bin(concrete(ty, target, depth - 1), concrete(ty, target, depth - 1), "+"));
            }
        }
        Type::Power(inner) if depth > 0 || options.is_empty() => {
            options.push(concrete(inner, target, depth.saturating_sub(1)).prop_map(|e| format!("{{{e}}}")).boxed());
        }
        Type::Product(a, b) if depth > 0 || options.is_empty() => {
            options.push(bin(
                concrete(a, target, depth.saturating_sub(1)),
                concrete(b, target, depth.saturating_sub(1)),
                "↦",
            ));
        }
        _ => {}
    }
    proptest::strategy::Union::new(options).boxed()
}

#[derive(Clone, Debug)]
pub struct SpecialisationCase {
    pub formula: String,
    /// The declared type of an expression case; `None` for predicates.
    pub shape: Option<Type>,
    pub target: Type,
    pub vars: Vec<(String, String)>,
}

pub fn specialisation_case() -> impl Strategy<Value = SpecialisationCase> {
    let formula = prop_oneof![
        (0..SHAPES.len()).prop_flat_map(|i| shaped(SHAPES[i], 3).prop_map(move |f| (f, Some(shape_type(SHAPES[i]))))),
        predicate(2).prop_map(|f| (f, None)),
    ];
    (formula, proptest::sample::select(target_types())).prop_flat_map(|((formula, shape), target)| {
        let mut s = Specialisation::new();
        s.put_type("T", target.clone()).unwrap();
        let replacements: Vec<BoxedStrategy<Option<(String, String)>>> = generic_vars()
            .into_iter()
            .map(|(v, t)| {
                let ty = apply_type(&t, &s);
                proptest::option::of(concrete(&ty, &target, 2).prop_map(move |e| (v.to_string(), e))).boxed()
            })
            .collect();
        let (formula, shape, target2) = (formula.clone(), shape.clone(), target.clone());
        replacements.prop_map(move |vs| SpecialisationCase {
            formula: formula.clone(),
            shape: shape.clone(),
            target: target2.clone(),
            vars: vs.into_iter().flatten().collect(),
        })
    })
}

fn replacement_env(target: &Type) -> TypeEnvironment {
    TypeEnvironment::new()
        .with_type_param("U")
        .with_type_param("T")
        .with_var("u1", Type::Int)
        .with_var("w1", target.clone())
}

/// Specialises a generated formula and checks that the output typechecks
/// with the type `apply_type` predicts.
pub fn check_specialisation(case: &SpecialisationCase) -> Result<(), String> {
    let ff = FormulaFactory::core();
    let env = generic_env();
    let f = parse_formula(&case.formula, &ff).map_err(|e| format!("{}: {e}", case.formula))?;
    let f = typecheck(&f, &env).map_err(|e| format!("{}: {e}", case.formula))?;
    if f.ty() != case.shape.as_ref() {
        return Err(format!("{}: generated with type {:?}, typed as {:?}", case.formula, case.shape, f.ty()));
    }
    let renv = replacement_env(&case.target);
    let mut s = Specialisation::new();
    s.put_type("T", case.target.clone()).map_err(|e| e.to_string())?;
    for (v, e) in &case.vars {
        let e =
            typecheck(&parse_formula(e, &ff).map_err(|x| x.to_string())?, &renv).map_err(|x| format!("{e}: {x}"))?;
        s.put_var(v.clone(), e).map_err(|x| x.to_string())?;
    }
    let out = specialise(&f, &s, &env).map_err(|e| format!("{}: {e}", case.formula))?;
    let mut out_env = specialise_env(&env, &s).with_type_param("U").with_var("u1", Type::Int);
    out_env = out_env.with_var("w1", case.target.clone());
    let checked = typecheck(&out, &out_env).map_err(|e| format!("{} ↦ {out}: {e}", case.formula))?;
    let expected = f.ty().map(|t| apply_type(t, &s));
    if checked.ty() != expected.as_ref() || out.ty() != expected.as_ref() {
        return Err(format!("{} ↦ {out}: type {:?}, expected {expected:?}", case.formula, checked.ty()));
    }
    for (v, _) in &case.vars {
        if out.free_idents().contains_key(v) && !["u1", "w1"].contains(&v.as_str()) {
            return Err(format!("{} ↦ {out}: {v} survived", case.formula));
        }
    }
    Ok(())
}

// Round trip ----------------------------------------------------------------

fn real_expr(depth: u32) -> BoxedStrategy<String> {
    let leaf = prop_oneof![
        Just("x".to_string()),
        Just("y".to_string()),
        Just("z".to_string()),
        Just("zero".to_string()),
        Just("one".to_string()),
    ]
    .boxed();
    if depth == 0 {
        return leaf;
    }
    let d = depth - 1;
    prop_oneof![
        2 => leaf,
        2 => (real_expr(d), real_expr(d), prop_oneof![Just("⊕"), Just("sum")])
            .prop_map(|(a, b, op)| format!("({a} {op} {b})")),
        1 => real_expr(d).prop_map(|a| format!("minus({a})")),
        1 => (real_expr(d), real_expr(d)).prop_map(|(a, b)| format!("div({a}, {b})")),
    ]
    .boxed()
}

fn real_predicate(depth: u32) -> BoxedStrategy<String> {
    let atom = prop_oneof![
        (real_expr(2), real_expr(2), prop_oneof![Just("≺"), Just("smr")])
            .prop_map(|(a, b, op)| format!("{a} {op} {b}")),
        (real_expr(2), real_expr(2)).prop_map(|(a, b)| format!("{a} = {b}")),
    ]
    .boxed();
    if depth == 0 {
        return atom;
    }
    let d = depth - 1;
    prop_oneof![
        2 => atom,
        1 => (real_predicate(d), real_predicate(d)).prop_map(|(a, b)| format!("({a}) ∧ ({b})")),
        1 => (real_predicate(d), real_predicate(d)).prop_map(|(a, b)| format!("({a}) ∨ ({b})")),
        1 => (real_predicate(d), real_predicate(d)).prop_map(|(a, b)| format!("({a}) ⇒ ({b})")),
        1 => real_predicate(d).prop_map(|a| format!("¬ ({a})")),
        1 => (real_expr(1), real_predicate(d)).prop_map(|(e, p)| format!("∀x· x ≺ {e} ∧ ({p})")),
    ]
    .boxed()
}

/// Formulas over the fixture `Real` theory, written with operator names
/// and symbols mixed.
pub fn real_formula() -> impl Strategy<Value = String> {
    real_predicate(2)
}

/// parse ∘ print is the identity on typed formulas in both print modes,
/// and print is stable.
pub fn check_round_trip(text: &str, ff: &Arc<FormulaFactory>) -> Result<(), String> {
    let real = Type::Given("Real".into());
    let env = TypeEnvironment::new().with_var("x", real.clone()).with_var("y", real.clone()).with_var("z", real);
    let f = typecheck(&parse_formula(text, ff).map_err(|e| format!("{text}: {e}"))?, &env)
        .map_err(|e| format!("{text}: {e}"))?;
    for mode in [PrintMode::Unicode, PrintMode::Ascii] {
        let printed = print_formula(&f, mode);
        let back = parse_formula(&printed, ff).map_err(|e| format!("{printed}: {e}"))?;
        let back = typecheck(&back, &env).map_err(|e| format!("{printed}: {e}"))?;
        if back != f {
            return Err(format!("{text} printed as {printed} reparses as {back}"));
        }
        if print_formula(&back, mode) != printed {
            return Err(format!("{printed} is not stable under printing"));
        }
    }
    Ok(())
}

// Associative matching --------------------------------------------------------

pub const METAVARS: [&str; 3] = ["X", "Y", "Z"];
pub const ALPHABET: [&str; 3] = ["a", "b", "c"];

fn words(alphabet: &[&'static str], len: usize) -> Vec<Vec<&'static str>> {
    let mut out: Vec<Vec<&'static str>> = vec![Vec::new()];
    for _ in 0..len {
        out = out.into_iter().flat_map(|w| alphabet.iter().map(move |c| [w.clone(), vec![*c]].concat())).collect();
    }
    out
}

/// Every associative pattern of two or three operands, each a metavariable
/// or a constant.
pub fn all_patterns() -> Vec<Vec<&'static str>> {
    let symbols: Vec<&'static str> = METAVARS.iter().chain(ALPHABET.iter()).copied().collect();
    (2..=3).flat_map(|n| words(&symbols, n)).collect()
}

/// Every subject of two to five operands over the alphabet.
pub fn all_subjects() -> Vec<Vec<&'static str>> {
    (2..=5).flat_map(|n| words(&ALPHABET, n)).collect()
}

/// Splits of `n` operands into `k` non-empty runs, ordered so that earlier
/// runs are as short as possible.
fn splits(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 1 {
        return if n >= 1 { vec![vec![n]] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in 1..n {
        for mut rest in splits(n - first, k - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// The bindings of the first split, in that order, under which the pattern
/// matches the subject; metavariables bind to runs.
pub fn oracle_match(pattern: &[&str], subject: &[&str]) -> Option<Vec<(String, String)>> {
    'split: for sizes in splits(subject.len(), pattern.len()) {
        let mut at = 0;
        let mut bound: Vec<(String, String)> = Vec::new();
        for (p, k) in pattern.iter().zip(&sizes) {
            let run = subject[at..at + k].join(" ; ");
            at += k;
            if METAVARS.contains(p) {
                match bound.iter().find(|(v, _)| v == p) {
                    Some((_, r)) if *r != run => continue 'split,
                    Some(_) => {}
                    None => bound.push((p.to_string(), run)),
                }
            } else if *k != 1 || run != *p {
                continue 'split;
            }
        }
        bound.sort();
        return Some(bound);
    }
    None
}

fn relation_env() -> TypeEnvironment {
    let rel = Type::relation(Type::Int, Type::Int);
    let mut env = TypeEnvironment::new();
    for v in METAVARS.iter().chain(ALPHABET.iter()) {
        env = env.with_var(*v, rel.clone());
    }
    env
}

fn relation_word(w: &[&str]) -> Formula {
    let ff = FormulaFactory::core();
    typecheck(&parse_formula(&w.join(" ; "), &ff).unwrap(), &relation_env()).unwrap()
}

fn run_matcher(pattern: &Pattern, subject: &Formula) -> Option<Vec<(String, String)>> {
    let s = match_pattern(pattern, subject)?;
    Some(s.vars().iter().map(|(k, v)| (k.clone(), v.to_string())).collect())
}

fn word_pattern(w: &[&str]) -> Pattern {
    Pattern::new(relation_word(w), METAVARS.iter().map(|s| s.to_string()), [])
}

pub fn matcher_match(pattern: &[&str], subject: &[&str]) -> Option<Vec<(String, String)>> {
    run_matcher(&word_pattern(pattern), &relation_word(subject))
}

/// Pattern/subject pairs on which the matcher and the oracle disagree,
/// together with the number of pairs compared.
pub fn greedy_discrepancies() -> (Vec<String>, usize) {
    let mut bad = Vec::new();
    let mut total = 0;
    let subjects: Vec<(Vec<&str>, Formula)> = all_subjects()
        .into_iter()
        .map(|s| {
            let f = relation_word(&s);
            (s, f)
        })
        .collect();
    for p in all_patterns() {
        let pattern = word_pattern(&p);
        for (s, subject) in &subjects {
            total += 1;
            let expected = oracle_match(&p, s);
            let got = run_matcher(&pattern, subject);
            if expected != got {
                bad.push(format!("{} vs {}: oracle {expected:?}, matcher {got:?}", p.join(" ; "), s.join(" ; ")));
            }
        }
    }
    (bad, total)
}

// Signatures ----------------------------------------------------------------

pub fn small_type() -> impl Strategy<Value = Type> {
    prop_oneof![Just(Type::Int), Just(Type::Bool), Just(Type::Param("T".into())), Just(Type::power(Type::Int)),]
}

/// Signatures drawn from a small pool so that equal pairs are frequent.
pub fn signature() -> impl Strategy<Value = ExtensionSignature> {
    let op = (
        prop_oneof![Just("f"), Just("g")],
        proptest::collection::vec(small_type(), 0..2),
        proptest::option::of(small_type()),
        any::<bool>(),
    )
        .prop_map(|(name, tys, result, assoc)| {
            let args: Vec<(String, Type)> = tys.into_iter().enumerate().map(|(i, t)| (format!("x{i}"), t)).collect();
            ExtensionSignature::Operator(OperatorSig {
                name: name.into(),
                notation: Notation::Prefix,
                kind: if result.is_some() { FormulaKind::Expression } else { FormulaKind::Predicate },
                args,
                result,
                associative: assoc,
                commutative: false,
                symbol: None,
            })
        });
    let dt = (prop_oneof![Just("D"), Just("f")], proptest::collection::vec(small_type(), 0..2), any::<bool>())
        .prop_map(|(name, fields, two)| {
            let mut constructors = vec![ConstructorSig {
                name: "mk".into(),
                destructors: fields.into_iter().enumerate().map(|(i, t)| (format!("d{i}"), t)).collect(),
            }];
            if two {
                constructors.push(ConstructorSig { name: "none".into(), destructors: Vec::new() });
            }
            ExtensionSignature::Datatype(DatatypeSig { name: name.into(), type_params: vec!["T".into()], constructors })
        });
    let ax = prop_oneof![Just("S"), Just("f")].prop_map(|n| ExtensionSignature::AxiomaticType { name: n.into() });
    prop_oneof![op, dt, ax]
}

// Well-definedness ------------------------------------------------------------

/// An integer expression tree, kept alongside its text so that the oracle
/// does not depend on the library's traversal.
#[derive(Clone, Debug)]
pub enum IntExpr {
    Var(&'static str),
    Lit(i64),
    Div(Box<IntExpr>, Box<IntExpr>),
    Sub(Box<IntExpr>, Box<IntExpr>),
    Mul(Box<IntExpr>, Box<IntExpr>),
}

impl IntExpr {
    pub fn text(&self) -> String {
        match self {
            IntExpr::Var(v) => v.to_string(),
            IntExpr::Lit(n) => n.to_string(),
            IntExpr::Div(a, b) => format!("({} ÷ {})", a.text(), b.text()),
            IntExpr::Sub(a, b) => format!("({} − {})", a.text(), b.text()),
            IntExpr::Mul(a, b) => format!("({} ∗ {})", a.text(), b.text()),
        }
    }

    /// Divisors in evaluation order, left operand first, each after the
    /// conditions of its own operands.
    pub fn divisors(&self, out: &mut Vec<String>) {
        match self {
            IntExpr::Var(_) | IntExpr::Lit(_) => {}
            IntExpr::Div(a, b) => {
                a.divisors(out);
                b.divisors(out);
                let d = b.text();
                if !out.contains(&d) {
                    out.push(d);
                }
            }
            IntExpr::Sub(a, b) | IntExpr::Mul(a, b) => {
                a.divisors(out);
                b.divisors(out);
            }
        }
    }
}

pub fn int_expr() -> impl Strategy<Value = IntExpr> {
    let leaf = prop_oneof![
        prop_oneof![Just("p"), Just("q"), Just("r")].prop_map(IntExpr::Var),
        (1i64..4).prop_map(IntExpr::Lit),
    ];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            2 => (inner.clone(), inner.clone()).prop_map(|(a, b)| IntExpr::Div(Box::new(a), Box::new(b))),
            1 => (inner.clone(), inner.clone()).prop_map(|(a, b)| IntExpr::Sub(Box::new(a), Box::new(b))),
            1 => (inner.clone(), inner).prop_map(|(a, b)| IntExpr::Mul(Box::new(a), Box::new(b))),
        ]
    })
}

/// A rule application whose match binds every metavariable to one of the
/// generated expressions, listed in metavariable name order.
#[derive(Clone, Debug)]
pub enum WdCase {
    /// `Logic.add_zero` on `n + 0` in the goal `n + 0 = r`.
    AddZero(IntExpr),
    /// `Logic.add_congruence` backwards on `a + b = c + d`.
    Congruence([IntExpr; 4]),
}

pub fn wd_case() -> impl Strategy<Value = WdCase> {
    let with_division = || (int_expr(), int_expr()).prop_map(|(a, b)| IntExpr::Div(Box::new(a), Box::new(b)));
    prop_oneof![
        with_division().prop_map(WdCase::AddZero),
        (with_division(), int_expr(), int_expr(), int_expr()).prop_map(|(a, b, c, d)| WdCase::Congruence([a, b, c, d])),
    ]
}

/// Applies the rule and checks that the first antecedent is exactly the
/// conjunction of the instantiation conditions.
pub fn check_wd_first(case: &WdCase, rules: &RuleBase) -> Result<(), String> {
    let (goal, input, exprs) = match case {
        WdCase::AddZero(e) => (
            format!("{} + 0 = r", e.text()),
            ReasonerInput::ManualRewrite {
                theory: "Logic".into(),
                rule: "add_zero".into(),
                hyp: None,
                position: "0".parse::<Position>().unwrap(),
            },
            vec![e.clone()],
        ),
        WdCase::Congruence([a, b, c, d]) => (
            format!("{} + {} = {} + {}", a.text(), b.text(), c.text(), d.text()),
            ReasonerInput::ManualInference { theory: "Logic".into(), rule: "add_congruence".into(), hyp: None },
            vec![a.clone(), b.clone(), c.clone(), d.clone()],
        ),
    };
    let mut divisors = Vec::new();
    for e in &exprs {
        e.divisors(&mut divisors);
    }
    let oracle = divisors.iter().map(|d| format!("{d} ≠ 0")).collect::<Vec<_>>().join(" ∧ ");
    let ff = rules.factory();
    let expected = Sequent::parse(&format!("⊢ {oracle}"), ff).map_err(|e| format!("{oracle}: {e}"))?;
    let seq = Sequent::parse(&format!("⊢ {goal}"), ff).map_err(|e| format!("{goal}: {e}"))?;
    let out = apply(&seq, &input, rules).map_err(|e| format!("{goal}: {e}"))?;
    match out.first() {
        Some(first) if first.goal() == expected.goal() && first.hyps().is_empty() => Ok(()),
        Some(first) => Err(format!("{goal}: first antecedent {first}, expected {expected}")),
        None => Err(format!("{goal}: no antecedents")),
    }
}

pub fn typed_core(text: &str) -> Formula {
    typecheck(&parse_formula(text, &FormulaFactory::core()).unwrap(), &TypeEnvironment::new()).unwrap()
}
