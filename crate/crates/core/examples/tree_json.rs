//! The JSON a client sees for a proof tree and for the rules applicable at
//! a node.

use theoria::prover::{applicable_rules, tree_json, ProofTree, Sequent};
use theoria::workspace::Workspace;

fn main() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/workspace");
    let ws = Workspace::load(dir).unwrap();
    let rules = ws.rule_base(&["List".into(), "Logic".into()]).unwrap();
    let seq = Sequent::parse("⊢ list_isEmpty(nil ⦂ List(ℤ))", rules.factory()).unwrap();

    for a in applicable_rules(&seq, &rules) {
        println!("{}  {}", a.label, serde_json::to_string(&a.target).unwrap());
    }
    let tree = ProofTree::new("nil_is_empty", seq);
    println!("{}", serde_json::to_string_pretty(&tree_json(&tree)).unwrap());
}
