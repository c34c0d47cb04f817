use std::fs;
use std::path::{Path, PathBuf};

use theoria::lang::{parse_sequents, parse_theory, print_sequents, print_theory, sequent_uses};
use theoria::workspace::Workspace;

fn fixture(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(rel)
}

#[test]
fn theory_files_are_canonical() {
    let ws = Workspace::load(fixture("workspace")).unwrap();
    assert!(ws.problems().is_empty(), "{:?}", ws.problems());
    for name in ws.theory_names() {
        let t = ws.theory(name).unwrap();
        let text = fs::read_to_string(&t.path).unwrap();
        let factories: Vec<_> =
            t.theory.imports.iter().map(|i| ws.theory(i).unwrap().compiled.factory.clone()).collect();
        let parsed = parse_theory(&text, &factories).unwrap();
        assert_eq!(print_theory(&parsed), text, "{name}");
    }
}

#[test]
fn sequent_files_are_canonical() {
    let ws = Workspace::load(fixture("workspace")).unwrap();
    for path in ws.sequent_files().unwrap() {
        let text = fs::read_to_string(&path).unwrap();
        let rules = ws.rule_base(&sequent_uses(&text).unwrap()).unwrap();
        let parsed = parse_sequents(&text, rules.factory()).unwrap();
        assert_eq!(print_sequents(&parsed), text, "{}", path.display());
        ws.load_sequents(&path).unwrap();
    }
}
