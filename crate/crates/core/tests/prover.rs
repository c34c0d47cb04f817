use std::path::{Path, PathBuf};

use theoria::lang::parse_theory;
use theoria::prover::{
    applicable_rules, apply, auto_all, auto_tactic, check_reusable, replay, wd, AutoKind, ProofStatus, ProofTree,
    ProverError, ReasonerError, ReasonerInput, ReuseVerdict, Sequent, StoredProof, DEFAULT_ORDER,
};
use theoria::theory::{compile, Direction, RuleBase};
use theoria::workspace::Workspace;
use theoria::Position;

fn fixture(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(rel)
}

fn rules(uses: &[&str]) -> RuleBase {
    let ws = Workspace::load(fixture("workspace")).unwrap();
    let uses: Vec<String> = uses.iter().map(|s| s.to_string()).collect();
    ws.rule_base(&uses).unwrap()
}

fn seq(text: &str, rules: &RuleBase) -> Sequent {
    Sequent::parse(text, rules.factory()).unwrap()
}

fn pos(p: &str) -> Position {
    p.parse().unwrap()
}

fn rewrite(theory: &str, rule: &str, hyp: Option<usize>, position: &str) -> ReasonerInput {
    ReasonerInput::ManualRewrite { theory: theory.into(), rule: rule.into(), hyp, position: pos(position) }
}

fn infer(theory: &str, rule: &str, hyp: Option<usize>) -> ReasonerInput {
    ReasonerInput::ManualInference { theory: theory.into(), rule: rule.into(), hyp }
}

fn texts(seqs: &[Sequent]) -> Vec<String> {
    seqs.iter().map(|s| s.to_string()).collect()
}

#[test]
fn unconditional_rewrite_at_the_root() {
    let r = rules(&["List", "Logic"]);
    let s = seq("⊢ list_isEmpty(nil ⦂ List(ℤ))", &r);
    let out = apply(&s, &rewrite("List", "isEmpty_nil_rewrite", None, ""), &r).unwrap();
    assert_eq!(texts(&out), ["⊢ ⊤"]);
}

#[test]
fn complete_conditional_rewrite_has_one_antecedent_per_case() {
    let r = rules(&["List", "Logic"]);
    let s = seq("k = cons(1, nil) ⊢ list_isEmpty(k)", &r);
    let out = apply(&s, &rewrite("List", "isEmpty_rewrite", None, ""), &r).unwrap();
    assert_eq!(
        texts(&out),
        ["k = cons(1, nil ⦂ List(ℤ)), k = nil ⦂ List(ℤ) ⊢ ⊤", "k = cons(1, nil ⦂ List(ℤ)), k ≠ nil ⦂ List(ℤ) ⊢ ⊥",]
    );
}

fn partial_division_theory() -> RuleBase {
    let text = "theory Partial

rewrite div_self
  vars n: ℤ
  lhs n ÷ n
  when n ≠ 0
  rhs 1
  when n = 0
  rhs 0
";
    let t = parse_theory(text, &[]).unwrap();
    RuleBase::new(vec![std::sync::Arc::new(compile(&t, &[]).unwrap())]).unwrap()
}

#[test]
fn incomplete_conditional_rewrite_adds_a_completeness_goal() {
    let r = partial_division_theory();
    let s = seq("⊢ (a ÷ b) ÷ (a ÷ b) = 1", &r);
    let input = ReasonerInput::ManualRewrite {
        theory: "Partial".into(),
        rule: "div_self".into(),
        hyp: None,
        position: pos("0"),
    };
    let out = apply(&s, &input, &r).unwrap();
    assert_eq!(texts(&out), ["⊢ b ≠ 0", "a ÷ b ≠ 0 ⊢ 1 = 1", "a ÷ b = 0 ⊢ 0 = 1", "⊢ a ÷ b ≠ 0 ∨ a ÷ b = 0",]);
}

#[test]
fn conditions_may_not_mention_bound_variables() {
    let r = partial_division_theory();
    let s = seq("⊢ ∀m· m ÷ m = 1", &r);
    let input = ReasonerInput::ManualRewrite {
        theory: "Partial".into(),
        rule: "div_self".into(),
        hyp: None,
        position: pos("0.0"),
    };
    assert!(matches!(apply(&s, &input, &r), Err(ReasonerError::RuleNotApplicable(_))));
}

#[test]
fn positions_outside_the_formula_are_rejected() {
    let r = rules(&["List", "Logic"]);
    let s = seq("⊢ list_isEmpty(nil ⦂ List(ℤ))", &r);
    let err = apply(&s, &rewrite("List", "isEmpty_nil_rewrite", None, "3.1"), &r).unwrap_err();
    assert_eq!(err, ReasonerError::InvalidPosition(pos("3.1")));
}

#[test]
fn rewriting_a_hypothesis_keeps_the_goal() {
    let r = rules(&["Logic"]);
    let s = seq("x + 0 = y ⊢ y = x", &r);
    let out = apply(&s, &rewrite("Logic", "add_zero", Some(0), "0"), &r).unwrap();
    assert_eq!(texts(&out), ["x = y ⊢ y = x"]);
}

#[test]
fn well_definedness_comes_first() {
    let r = rules(&["Logic"]);
    let s = seq("⊢ (a ÷ b) + 0 = c ÷ d", &r);
    let out = apply(&s, &rewrite("Logic", "add_zero", None, "0"), &r).unwrap();
    assert_eq!(texts(&out), ["⊢ b ≠ 0", "⊢ a ÷ b = c ÷ d"]);

    let s = seq("⊢ ∀x· (a ÷ x) + 0 = x", &r);
    let out = apply(&s, &rewrite("Logic", "add_zero", None, "0.0"), &r).unwrap();
    assert_eq!(texts(&out), ["⊢ ∀x ⦂ ℤ· x ≠ 0", "⊢ ∀x ⦂ ℤ· a ÷ x = x"]);
}

#[test]
fn operator_well_definedness_is_instantiated() {
    let r = rules(&["Real"]);
    let s = seq("⊢ div(a, b) = one", &r);
    assert_eq!(wd(s.goal(), &r).to_string(), "b ≠ zero");
}

#[test]
fn backward_inference_without_givens_closes() {
    let r = rules(&["List", "Logic"]);
    let s = seq("⊢ list_isEmpty(nil ⦂ List(ℤ))", &r);
    let mut tree = ProofTree::new("t", s);
    let kids = tree.apply(0, infer("List", "isEmpty_nil_inference", None), &r).unwrap();
    assert!(kids.is_empty());
    assert_eq!(tree.status(), ProofStatus::Closed);
}

#[test]
fn backward_inference_yields_one_goal_per_given() {
    let r = rules(&["Logic"]);
    let s = seq("⊢ p + q = r + t", &r);
    let out = apply(&s, &infer("Logic", "add_congruence", None), &r).unwrap();
    assert_eq!(texts(&out), ["⊢ p = r", "⊢ q = t"]);
}

#[test]
fn forward_inference_adds_a_hypothesis() {
    let r = rules(&["Logic"]);
    let s = seq("a = b + 1 ⊢ ⊥", &r);
    let out = apply(&s, &infer("Logic", "eq_sym", Some(0)), &r).unwrap();
    assert_eq!(texts(&out), ["a = b + 1, b + 1 = a ⊢ ⊥"]);
}

#[test]
fn forward_inference_needs_a_matching_hypothesis() {
    let r = rules(&["Logic"]);
    let s = seq("a ∈ ℤ ⊢ ⊥", &r);
    let err = apply(&s, &infer("Logic", "eq_sym", Some(0)), &r).unwrap_err();
    assert!(matches!(err, ReasonerError::RuleNotApplicable(_)));
}

#[test]
fn directions_are_checked() {
    let r = rules(&["Logic", "List"]);
    let s = seq("a = b ⊢ a + b = b + a", &r);
    let err = apply(&s, &infer("Logic", "add_congruence", Some(0)), &r).unwrap_err();
    assert_eq!(
        err,
        ReasonerError::DirectionNotAllowed { rule: "add_congruence".into(), direction: Direction::Forward }
    );
    let s = seq("l = cons(1, nil) ⊢ ⊥", &r);
    let out = apply(&s, &infer("List", "length_cons_inference", Some(0)), &r).unwrap();
    assert_eq!(texts(&out), ["l = cons(1, nil ⦂ List(ℤ)), list_length(l) = 1 + list_length(nil ⦂ List(ℤ)) ⊢ ⊥"]);
    let err = apply(&s, &infer("List", "length_cons_inference", None), &r).unwrap_err();
    assert!(matches!(err, ReasonerError::DirectionNotAllowed { .. }));
}

#[test]
fn expanding_definitions() {
    let r = rules(&["List", "Real"]);
    let s = seq("⊢ list_length(nil ⦂ List(ℤ)) = 0", &r);
    let expand = |p: &str| ReasonerInput::ExpandDefinition { hyp: None, position: pos(p) };
    assert_eq!(texts(&apply(&s, &expand("0"), &r).unwrap()), ["⊢ 0 = 0"]);

    let s = seq("⊢ a ⊕ b = b ⊕ a", &r);
    assert_eq!(apply(&s, &expand("0"), &r).unwrap_err(), ReasonerError::NotExpandable("sum".into()));

    let s = seq("⊢ ∀l· list_length(cons(1, l)) = 1 + list_length(l)", &r);
    assert_eq!(
        texts(&apply(&s, &expand("0.0"), &r).unwrap()),
        ["⊢ ∀l ⦂ List(ℤ)· 1 + list_length(l) = 1 + list_length(l)"]
    );
}

#[test]
fn auto_tactics_record_one_rule_per_node() {
    let r = rules(&["List", "Logic"]);
    let s = seq("⊢ ¬ list_isEmpty(cons(a + 0, nil))", &r);
    let mut tree = ProofTree::new("t", s);
    let report = auto_tactic(&mut tree, AutoKind::Rewrite, &r, 100).unwrap();
    let labels: Vec<&str> = report.applications.iter().map(|a| a.label.as_str()).collect();
    assert_eq!(labels, ["List.isEmpty_cons_rewrite", "Logic.not_false", "trueGoal"]);
    assert_eq!(tree.status(), ProofStatus::Closed);
    assert_eq!(tree.application_count(), report.applications.len());
}

#[test]
fn auto_tactics_without_rules_do_nothing() {
    let r = RuleBase::empty();
    let s = seq("⊢ a = b + 1", &r);
    let mut tree = ProofTree::new("t", s);
    let report = auto_tactic(&mut tree, AutoKind::Rewrite, &r, 100).unwrap();
    assert!(report.applications.is_empty());
    assert_eq!(tree.len(), 1);
}

#[test]
fn looping_rules_hit_the_budget() {
    let ws = Workspace::load(fixture("loop")).unwrap();
    let r = ws.rule_base(&["Loop".to_string()]).unwrap();
    let s = seq("⊢ f(1) = 2", &r);
    let mut tree = ProofTree::new("t", s);
    let err = auto_all(&mut tree, &DEFAULT_ORDER, &r, 25).unwrap_err();
    assert_eq!(err.report.applications.len(), 25);
    assert_eq!(tree.application_count(), 25);
}

#[test]
fn pruning() {
    let r = rules(&["List", "Logic"]);
    let s = seq("⊢ ¬ list_isEmpty(cons(a + 0, nil))", &r);
    let mut tree = ProofTree::new("t", s);
    auto_tactic(&mut tree, AutoKind::Rewrite, &r, 100).unwrap();
    let before: Vec<String> = tree.nodes().map(|(_, n)| n.sequent.to_string()).collect();

    tree.prune(1).unwrap();
    assert_eq!(tree.status(), ProofStatus::Open);
    assert_eq!(tree.len(), 2);
    auto_tactic(&mut tree, AutoKind::Rewrite, &r, 100).unwrap();
    let after: Vec<String> = tree.nodes().map(|(_, n)| n.sequent.to_string()).collect();
    assert_eq!(before, after);

    tree.prune(0).unwrap();
    assert_eq!(tree.len(), 1);
    assert_eq!(tree.pending(), [0]);
    assert_eq!(tree.prune(42), Err(ProverError::UnknownNode(42)));
}

#[test]
fn applicable_rules_lists_positions() {
    let r = rules(&["List", "Logic"]);
    let s = seq("⊢ list_isEmpty(nil ⦂ List(ℤ))", &r);
    let found = applicable_rules(&s, &r);
    assert!(found.iter().any(|a| a.input == rewrite("List", "isEmpty_nil_rewrite", None, "")));
    assert!(found.iter().any(|a| a.input == infer("List", "isEmpty_nil_inference", None)));
    assert!(applicable_rules(&seq("⊢ a = b + 1", &r), &RuleBase::empty()).is_empty());
}

fn real_proof(r: &RuleBase) -> ProofTree {
    let s = seq("⊢ minus(zero) = zero", r);
    let mut tree = ProofTree::new("minus_zero", s);
    tree.apply(0, rewrite("Real", "minus_eq", None, ""), r).unwrap();
    auto_all(&mut tree, &DEFAULT_ORDER, r, 100).unwrap();
    tree
}

#[test]
fn stored_proofs_round_trip() {
    let r = rules(&["Real", "Logic"]);
    let tree = real_proof(&r);
    assert_eq!(tree.status(), ProofStatus::Closed);
    let stored = StoredProof::from_tree(&tree);
    let again = StoredProof::from_json(&stored.to_json()).unwrap();
    assert_eq!(again, stored);
    let names: Vec<&str> = stored.factory.iter().map(|e| e.name()).collect();
    assert_eq!(names, ["Real", "minus", "sum", "zero"]);
    let rebuilt = again.to_tree().unwrap();
    assert_eq!(StoredProof::from_tree(&rebuilt), stored);
}

#[test]
fn reuse_verdicts() {
    let r = rules(&["Real", "Logic"]);
    let tree = real_proof(&r);
    let stored = StoredProof::from_tree(&tree);
    let root = tree.root_sequent().clone();
    assert_eq!(check_reusable(&stored, &root, &r).unwrap(), ReuseVerdict::NeedsReplay);

    let core = RuleBase::empty();
    let s = seq("⊢ x = 1 ∧ ⊤", &core);
    let mut t = ProofTree::new("c", s.clone());
    t.apply(0, ReasonerInput::ConjSplit, &core).unwrap();
    t.apply(2, ReasonerInput::TrueGoal, &core).unwrap();
    assert_eq!(check_reusable(&StoredProof::from_tree(&t), &s, &core).unwrap(), ReuseVerdict::Reusable);

    let other = seq("⊢ minus(one) = zero", &r);
    assert_eq!(check_reusable(&stored, &other, &r).unwrap(), ReuseVerdict::Incompatible("root sequent".into()));
}

#[test]
fn replay_of_an_unchanged_theory_is_isomorphic() {
    let r = rules(&["Real", "Logic"]);
    let tree = real_proof(&r);
    let stored = StoredProof::from_tree(&tree);
    let again = replay(&stored, tree.root_sequent(), &r).unwrap();
    assert_eq!(again.status(), ProofStatus::Closed);
    assert_eq!(StoredProof::from_tree(&again), stored);
}

#[test]
fn replay_marks_vanished_rules_stale() {
    let r = rules(&["Real", "Logic"]);
    let tree = real_proof(&r);
    let mut stored = StoredProof::from_tree(&tree);
    if let Some(rule) = &mut stored.nodes[0].rule {
        if let ReasonerInput::ManualRewrite { rule, .. } = &mut rule.input {
            *rule = "minus_equation".into();
        }
    }
    let again = replay(&stored, tree.root_sequent(), &r).unwrap();
    assert_eq!(again.status(), ProofStatus::Stale);
    assert_eq!(again.len(), 1);
}

#[test]
fn replay_marks_failed_matches_stale() {
    let r = rules(&["Real", "Logic"]);
    let tree = real_proof(&r);
    let mut stored = StoredProof::from_tree(&tree);
    if let Some(rule) = &mut stored.nodes[0].rule {
        if let ReasonerInput::ManualRewrite { position, .. } = &mut rule.input {
            *position = pos("0");
        }
    }
    let again = replay(&stored, tree.root_sequent(), &r).unwrap();
    assert_eq!(again.pending(), [0]);
    assert_eq!(again.status(), ProofStatus::Stale);
}

#[test]
fn formulas_share_one_factory_per_sequent() {
    let r = rules(&["List", "Logic"]);
    let s = seq("⊢ list_length(cons(1, nil)) = 1", &r);
    let mut tree = ProofTree::new("t", s);
    auto_all(&mut tree, &DEFAULT_ORDER, &r, 100).unwrap();
    assert_eq!(tree.status(), ProofStatus::Closed);
    for (_, n) in tree.nodes() {
        for f in n.sequent.formulas() {
            assert!(theoria::factory::factories_compatible(f.factory(), n.sequent.factory()));
        }
    }
}

#[test]
fn committed_fixture_proof_is_current() {
    let r = rules(&["Real", "Logic"]);
    let fresh = StoredProof::from_tree(&real_proof(&r)).to_json();
    let path = fixture("workspace/real.minus_zero.prf.json");
    if std::env::var_os("THEORIA_BLESS").is_some() {
        std::fs::write(&path, &fresh).unwrap();
    }
    assert_eq!(std::fs::read_to_string(&path).unwrap(), fresh);
}
