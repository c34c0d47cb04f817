//! Checks a theory directory and batch-proves its sequent files, first
//! with the automatic tactics and then by replaying the stored proofs.

use theoria::workspace::{cmd_check, cmd_prove, ProveOptions};

fn main() {
    let src = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/workspace");
    let dir = std::env::temp_dir().join(format!("theoria-batch-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    for entry in std::fs::read_dir(src).unwrap() {
        let entry = entry.unwrap();
        std::fs::copy(entry.path(), dir.join(entry.file_name())).unwrap();
    }
    let mut out = std::io::stdout();

    println!("$ theoria check");
    cmd_check(std::slice::from_ref(&dir), &mut out);

    let auto = ProveOptions { auto: true, ..ProveOptions::default() };
    println!("\n$ theoria prove --auto list.seq");
    cmd_prove(&dir.join("list.seq"), &auto, &mut out);

    let replay = ProveOptions { replay: true, ..auto };
    println!("\n$ theoria prove --replay --auto real.seq");
    cmd_prove(&dir.join("real.seq"), &replay, &mut out);

    std::fs::remove_dir_all(&dir).unwrap();
}
