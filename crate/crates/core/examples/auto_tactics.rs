//! Runs the automatic tactics over every obligation of a sequent file and
//! prints the resulting trees, one rule per node.

use theoria::prover::{auto_all, ProofTree, DEFAULT_ORDER};
use theoria::workspace::Workspace;

fn print_node(tree: &ProofTree, id: usize, depth: usize) {
    let n = tree.node(id).unwrap();
    let rule = n.rule.as_ref().map(|r| r.label.as_str()).unwrap_or("pending");
    println!("{}{}   [{rule}]", "  ".repeat(depth + 1), n.sequent);
    for c in &n.children {
        print_node(tree, *c, depth + 1);
    }
}

fn main() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/workspace");
    let ws = Workspace::load(dir).unwrap();
    let (rules, sequents) = ws.load_sequents(&ws.root().join("list.seq")).unwrap();
    for (name, seq) in sequents {
        let mut tree = ProofTree::new(name.clone(), seq);
        let report = auto_all(&mut tree, &DEFAULT_ORDER, &rules, 100).expect("terminates");
        println!("{name}: {} after {} steps", tree.status(), report.applications.len());
        print_node(&tree, tree.root(), 0);
    }
}
