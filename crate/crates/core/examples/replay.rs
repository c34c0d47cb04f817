//! Stores a proof, then checks it against the unchanged theory and against
//! an edited copy in which the rule it used has been renamed.

use theoria::lang::parse_theory;
use theoria::prover::{
    auto_all, check_reusable, replay, ProofTree, ReasonerInput, Sequent, StoredProof, DEFAULT_ORDER,
};
use theoria::theory::{compile, RuleBase};
use theoria::workspace::Workspace;

fn main() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/workspace");
    let ws = Workspace::load(dir).unwrap();
    let rules = ws.rule_base(&["Real".into(), "Logic".into()]).unwrap();
    let root = Sequent::parse("⊢ minus(zero) = zero", rules.factory()).unwrap();

    let mut tree = ProofTree::new("minus_zero", root.clone());
    let minus_eq = ReasonerInput::ManualRewrite {
        theory: "Real".into(),
        rule: "minus_eq".into(),
        hyp: None,
        position: "".parse().unwrap(),
    };
    tree.apply(tree.root(), minus_eq, &rules).unwrap();
    auto_all(&mut tree, &DEFAULT_ORDER, &rules, 100).unwrap();
    let stored = StoredProof::from_tree(&tree);
    println!("stored proof: {} nodes, {}", stored.nodes.len(), tree.status());

    let verdict = check_reusable(&stored, &root, &rules).unwrap();
    println!("unchanged theory: {verdict}, replays {}", replay(&stored, &root, &rules).unwrap().status());

    let text = std::fs::read_to_string(ws.theory("Real").unwrap().path.clone()).unwrap();
    let edited = parse_theory(&text.replace("rewrite minus_eq", "rewrite minus_equation"), &[]).unwrap();
    let logic = ws.theory("Logic").unwrap().compiled.clone();
    let edited = RuleBase::new(vec![std::sync::Arc::new(compile(&edited, &[]).unwrap()), logic]).unwrap();
    let verdict = check_reusable(&stored, &root, &edited).unwrap();
    println!("renamed rule: {verdict}, replays {}", replay(&stored, &root, &edited).unwrap().status());
}
