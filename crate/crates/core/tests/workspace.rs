mod support;

use std::path::Path;

use support::{copy_dir, fixture};
use theoria::prover::ProofStatus;
use theoria::workspace::{cmd_check, cmd_prove, proof_path, prove_file, ProveOptions, Workspace};

fn auto() -> ProveOptions {
    ProveOptions { auto: true, budget: 50, ..ProveOptions::default() }
}

#[test]
fn theories_load_in_import_order() {
    let ws = Workspace::load(fixture("workspace")).unwrap();
    assert_eq!(ws.theory_names(), ["List", "Logic", "Real"]);
    assert!(ws.problems().is_empty());
    assert!(ws.rule_base(&["Nope".into()]).is_err());
}

#[test]
fn check_reports_per_theory() {
    let mut out = Vec::new();
    assert_eq!(cmd_check(&[fixture("workspace")], &mut out), 0);
    let text = String::from_utf8(out).unwrap();
    assert_eq!(text.lines().count(), 3);
    assert!(text.lines().all(|l| l.ends_with(" ok")));
}

#[test]
fn proofs_are_persisted_beside_the_sequent_file() {
    let dir = tempfile::tempdir().unwrap();
    copy_dir(&fixture("workspace"), dir.path());
    let seq = dir.path().join("list.seq");
    let reports = prove_file(&seq, &auto()).unwrap();
    assert!(reports.iter().all(|r| r.status == ProofStatus::Closed && r.persisted));
    for r in &reports {
        assert!(proof_path(&seq, &r.name).exists());
    }
    let again = prove_file(&seq, &ProveOptions { replay: true, ..auto() }).unwrap();
    assert_eq!(
        again.iter().map(|r| r.applications).collect::<Vec<_>>(),
        reports.iter().map(|r| r.applications).collect::<Vec<_>>()
    );
    let no_leftovers =
        std::fs::read_dir(dir.path()).unwrap().all(|e| !e.unwrap().file_name().to_string_lossy().ends_with(".tmp"));
    assert!(no_leftovers);
}

#[test]
fn open_obligations_are_not_persisted_without_progress() {
    let dir = tempfile::tempdir().unwrap();
    copy_dir(&fixture("workspace"), dir.path());
    let seq = dir.path().join("list.seq");
    let reports = prove_file(&seq, &ProveOptions::default()).unwrap();
    assert!(reports.iter().all(|r| r.status == ProofStatus::Open && !r.persisted));
}

fn exit_codes_after(dir: &Path) -> (i32, Vec<i32>) {
    let check = cmd_check(&[dir.to_path_buf()], &mut Vec::new());
    let proves = ["list.seq", "real.seq"]
        .iter()
        .map(|s| cmd_prove(&dir.join(s), &ProveOptions { replay: true, ..auto() }, &mut Vec::new()))
        .collect();
    (check, proves)
}

/// Deleting any single line of any fixture file still yields one of the
/// three documented exit statuses, and a broken theory is reported.
#[test]
fn exit_statuses_under_line_deletion() {
    let names = ["List.thy", "Logic.thy", "Real.thy", "list.seq", "real.seq"];
    let mut mutants = 0;
    let mut seen = std::collections::BTreeSet::new();
    for name in names {
        let original = std::fs::read_to_string(fixture("workspace").join(name)).unwrap();
        let lines: Vec<&str> = original.lines().collect();
        for skip in 0..lines.len() {
            if lines[skip].trim().is_empty() {
                continue;
            }
            let dir = tempfile::tempdir().unwrap();
            copy_dir(&fixture("workspace"), dir.path());
            let mutated: Vec<&str> = lines.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, l)| *l).collect();
            std::fs::write(dir.path().join(name), mutated.join("\n") + "\n").unwrap();
            let (check, proves) = exit_codes_after(dir.path());
            assert!([0, 1, 2].contains(&check), "{name} without line {}: check {check}", skip + 1);
            seen.insert(check);
            for p in proves {
                assert!([0, 1, 2].contains(&p), "{name} without line {}: prove {p}", skip + 1);
                seen.insert(p);
            }
            mutants += 1;
        }
    }
    assert!(mutants > 50);
    assert_eq!(seen.into_iter().collect::<Vec<_>>(), [0, 1, 2]);
}

#[test]
fn unreadable_inputs_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(cmd_check(&[dir.path().join("absent.thy")], &mut Vec::new()), 2);
    assert_eq!(cmd_prove(&dir.path().join("absent.seq"), &auto(), &mut Vec::new()), 2);
}

#[test]
fn unknown_theories_in_uses_fail() {
    let dir = tempfile::tempdir().unwrap();
    copy_dir(&fixture("workspace"), dir.path());
    let seq = dir.path().join("odd.seq");
    std::fs::write(&seq, "uses Geometry\n\nsequent s\n  goal 1 = 1\n").unwrap();
    let mut out = Vec::new();
    assert_eq!(cmd_prove(&seq, &auto(), &mut out), 2);
    assert!(String::from_utf8(out).unwrap().contains("Geometry"));
}
