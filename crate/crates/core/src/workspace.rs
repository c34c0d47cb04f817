//! A directory of `.thy` theories and `.seq` sequent files, plus the batch
//! commands run over it.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use thiserror::Error;

use crate::lang::{parse_sequents, parse_theory, sequent_uses, theory_imports};
use crate::prover::{
    auto_all, check_reusable, replay, AutoKind, ProofStatus, ProofTree, ReuseVerdict, Sequent, StoredProof,
    DEFAULT_ORDER,
};
use crate::theory::{compile, validate_theory, CompiledTheory, RuleBase, Theory};

#[derive(Debug, Error)]
pub enum WorkspaceError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {message}")]
    Invalid { path: PathBuf, message: String },
    #[error("unknown theory `{0}`")]
    UnknownTheory(String),
}

impl WorkspaceError {
    /// IO problems map to exit status 2, everything else to 1.
    pub fn is_io(&self) -> bool {
        matches!(self, WorkspaceError::Io { .. })
    }
}

fn io(path: &Path) -> impl FnOnce(std::io::Error) -> WorkspaceError + '_ {
    move |source| WorkspaceError::Io { path: path.to_path_buf(), source }
}

fn invalid(path: &Path, message: impl ToString) -> WorkspaceError {
    WorkspaceError::Invalid { path: path.to_path_buf(), message: message.to_string() }
}

#[derive(Clone, Debug)]
pub struct LoadedTheory {
    pub path: PathBuf,
    pub theory: Theory,
    pub compiled: Arc<CompiledTheory>,
}

/// The theories found under a root directory, compiled in import order.
#[derive(Clone, Debug)]
pub struct Workspace {
    root: PathBuf,
    theories: BTreeMap<String, LoadedTheory>,
    /// Theory names, every theory after its imports.
    order: Vec<String>,
    /// Theories that failed to load, with the reason.
    problems: Vec<(PathBuf, String)>,
}

fn files_with_ext(dir: &Path, ext: &str) -> Result<Vec<PathBuf>, WorkspaceError> {
    let mut out = Vec::new();
    let mut dirs = vec![dir.to_path_buf()];
    while let Some(d) = dirs.pop() {
        for entry in fs::read_dir(&d).map_err(io(&d))? {
            let p = entry.map_err(io(&d))?.path();
            if p.is_dir() {
                dirs.push(p);
            } else if p.extension().is_some_and(|e| e == ext) {
                out.push(p);
            }
        }
    }
    out.sort();
    Ok(out)
}

impl Workspace {
    /// Loads every `.thy` file below `root`. Theories that fail to parse or
    /// validate, and theories importing them, are left out and recorded in
    /// [`Workspace::problems`].
    pub fn load(root: impl AsRef<Path>) -> Result<Workspace, WorkspaceError> {
        let root = root.as_ref().to_path_buf();
        let mut texts: BTreeMap<String, (PathBuf, String, Vec<String>)> = BTreeMap::new();
        let mut problems = Vec::new();
        for path in files_with_ext(&root, "thy")? {
            let text = fs::read_to_string(&path).map_err(io(&path))?;
            let name = text.lines().find_map(|l| l.trim().strip_prefix("theory ").map(|n| n.trim().to_string()));
            let (Some(name), Ok(imports)) = (name, theory_imports(&text)) else {
                problems.push((path, "expected `theory <name>` and a well-formed header".into()));
                continue;
            };
            if texts.contains_key(&name) {
                problems.push((path, format!("theory `{name}` is defined twice")));
                continue;
            }
            texts.insert(name, (path, text, imports));
        }

        let mut ws = Workspace { root, theories: BTreeMap::new(), order: Vec::new(), problems };
        let mut visiting = BTreeSet::new();
        let names: Vec<String> = texts.keys().cloned().collect();
        for n in names {
            ws.visit(&n, &texts, &mut visiting);
        }
        Ok(ws)
    }

    fn visit(
        &mut self,
        name: &str,
        texts: &BTreeMap<String, (PathBuf, String, Vec<String>)>,
        visiting: &mut BTreeSet<String>,
    ) -> bool {
        if self.theories.contains_key(name) {
            return true;
        }
        let Some((path, text, imports)) = texts.get(name) else { return false };
        if self.problems.iter().any(|(p, _)| p == path) {
            return false;
        }
        if !visiting.insert(name.to_string()) {
            self.problems.push((path.clone(), format!("import cycle through `{name}`")));
            return false;
        }
        let mut factories = Vec::new();
        for i in imports {
            if !self.visit(i, texts, visiting) {
                self.problems.push((path.clone(), format!("import `{i}` is missing or invalid")));
                return false;
            }
            factories.extend(self.closure(std::slice::from_ref(i)).iter().map(|t| t.factory.clone()));
        }
        let loaded = parse_theory(text, &factories).map_err(|e| e.to_string()).and_then(|t| {
            let diagnostics = validate_theory(&t);
            if !diagnostics.is_empty() {
                let d: Vec<String> = diagnostics.iter().map(|d| d.to_string()).collect();
                return Err(d.join("; "));
            }
            let c = compile(&t, &factories).map_err(|e| e.to_string())?;
            Ok((t, c))
        });
        match loaded {
            Ok((theory, compiled)) => {
                self.theories.insert(
                    name.to_string(),
                    LoadedTheory { path: path.clone(), theory, compiled: Arc::new(compiled) },
                );
                self.order.push(name.to_string());
                true
            }
            Err(message) => {
                self.problems.push((path.clone(), message));
                false
            }
        }
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn theory(&self, name: &str) -> Option<&LoadedTheory> {
        self.theories.get(name)
    }

    /// Theory names, every theory after its imports.
    pub fn theory_names(&self) -> &[String] {
        &self.order
    }

    pub fn problems(&self) -> &[(PathBuf, String)] {
        &self.problems
    }

    /// The named theories and everything they import, in import order.
    fn closure(&self, names: &[String]) -> Vec<Arc<CompiledTheory>> {
        let mut want = BTreeSet::new();
        let mut stack: Vec<String> = names.to_vec();
        while let Some(n) = stack.pop() {
            if let Some(t) = self.theories.get(&n) {
                if want.insert(n) {
                    stack.extend(t.theory.imports.iter().cloned());
                }
            }
        }
        self.order.iter().filter(|n| want.contains(*n)).map(|n| self.theories[n].compiled.clone()).collect()
    }

    /// The rule base of `uses` and their imports.
    pub fn rule_base(&self, uses: &[String]) -> Result<RuleBase, WorkspaceError> {
        for u in uses {
            if !self.theories.contains_key(u) {
                return Err(WorkspaceError::UnknownTheory(u.clone()));
            }
        }
        RuleBase::new(self.closure(uses)).map_err(|e| invalid(&self.root, e))
    }

    /// The `.seq` files below the root.
    pub fn sequent_files(&self) -> Result<Vec<PathBuf>, WorkspaceError> {
        files_with_ext(&self.root, "seq")
    }

    /// The typed sequents of a `.seq` file and the rule base they use.
    pub fn load_sequents(&self, path: &Path) -> Result<(RuleBase, Vec<(String, Sequent)>), WorkspaceError> {
        let text = fs::read_to_string(path).map_err(io(path))?;
        let uses = sequent_uses(&text).map_err(|e| invalid(path, e))?;
        let rules = self.rule_base(&uses)?;
        let file = parse_sequents(&text, rules.factory()).map_err(|e| invalid(path, e))?;
        let mut out = Vec::new();
        for d in &file.sequents {
            let s = Sequent::from_decl(d).map_err(|e| invalid(path, format!("sequent `{}`: {e}", d.name)))?;
            out.push((d.name.clone(), s));
        }
        Ok((rules, out))
    }
}

/// `<dir>/<stem>.<po>.prf.json` beside the sequent file.
pub fn proof_path(seq_file: &Path, po: &str) -> PathBuf {
    let stem = seq_file.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    seq_file.with_file_name(format!("{stem}.{po}.prf.json"))
}

/// Writes through a temporary file so readers never see a partial proof.
pub fn save_proof(path: &Path, proof: &StoredProof) -> std::io::Result<()> {
    let tmp = path.with_extension("json.tmp");
    fs::write(&tmp, proof.to_json())?;
    fs::rename(&tmp, path)
}

pub fn load_proof(path: &Path) -> Result<Option<StoredProof>, WorkspaceError> {
    match fs::read_to_string(path) {
        Ok(text) => StoredProof::from_json(&text).map(Some).map_err(|e| invalid(path, e)),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
        Err(e) => Err(io(path)(e)),
    }
}

/// Checks the theory files at `paths` (files or directories). Imports are
/// resolved among the theories in the same directory. Returns the exit
/// status: 0 when every theory is valid, 1 on diagnostics, 2 on IO errors.
pub fn cmd_check(paths: &[PathBuf], out: &mut impl Write) -> i32 {
    let mut status = 0;
    for path in paths {
        let (dir, only) = if path.is_dir() {
            (path.clone(), None)
        } else {
            if let Err(e) = fs::metadata(path) {
                let _ = writeln!(out, "{}: {e}", path.display());
                status = 2;
                continue;
            }
            let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
            (dir.to_path_buf(), Some(path.clone()))
        };
        let ws = match Workspace::load(&dir) {
            Ok(ws) => ws,
            Err(e) => {
                let _ = writeln!(out, "{e}");
                status = 2;
                continue;
            }
        };
        let same = |p: &Path| only.as_ref().is_none_or(|o| same_file(o, p));
        for (p, message) in ws.problems().iter().filter(|(p, _)| same(p)) {
            let _ = writeln!(out, "{}: {message}", p.display());
            status = status.max(1);
        }
        for n in ws.theory_names() {
            let t = &ws.theories[n];
            if same(&t.path) {
                let _ = writeln!(out, "{}: theory {n} ok", t.path.display());
            }
        }
    }
    status
}

fn same_file(a: &Path, b: &Path) -> bool {
    match (fs::canonicalize(a), fs::canonicalize(b)) {
        (Ok(x), Ok(y)) => x == y,
        _ => a == b,
    }
}

#[derive(Clone, Debug)]
pub struct ProveOptions {
    pub auto: bool,
    pub replay: bool,
    pub order: Vec<AutoKind>,
    pub budget: usize,
    /// Directory holding the theories; defaults to the sequent file's.
    pub theories: Option<PathBuf>,
}

impl Default for ProveOptions {
    fn default() -> Self {
        ProveOptions {
            auto: false,
            replay: false,
            order: DEFAULT_ORDER.to_vec(),
            budget: crate::prover::step_budget(),
            theories: None,
        }
    }
}

/// What batch proving did to one proof obligation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoReport {
    pub name: String,
    pub verdict: Option<ReuseVerdict>,
    pub status: ProofStatus,
    pub applications: usize,
    pub budget_exceeded: bool,
    pub persisted: bool,
}

impl std::fmt::Display for PoReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: ", self.name)?;
        if let Some(v) = &self.verdict {
            write!(f, "{v} ")?;
        }
        write!(f, "{} ({} applications)", self.status, self.applications)?;
        if self.budget_exceeded {
            f.write_str(" step budget exhausted")?;
        }
        Ok(())
    }
}

/// Proves every obligation of one sequent file, persisting the proofs.
pub fn prove_file(seq_file: &Path, opts: &ProveOptions) -> Result<Vec<PoReport>, WorkspaceError> {
    let dir = match &opts.theories {
        Some(d) => d.clone(),
        None => seq_file.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new(".")).to_path_buf(),
    };
    fs::metadata(seq_file).map_err(io(seq_file))?;
    let ws = Workspace::load(&dir)?;
    let (rules, sequents) = ws.load_sequents(seq_file)?;
    let mut reports = Vec::new();
    for (name, seq) in sequents {
        let path = proof_path(seq_file, &name);
        let mut verdict = None;
        let mut tree = ProofTree::new(name.clone(), seq.clone());
        if opts.replay {
            if let Some(stored) = load_proof(&path)? {
                let v = check_reusable(&stored, &seq, &rules).map_err(|e| invalid(&path, e))?;
                if !matches!(v, ReuseVerdict::Incompatible(_)) {
                    tree = replay(&stored, &seq, &rules).map_err(|e| invalid(&path, e))?;
                }
                verdict = Some(v);
            }
        }
        let mut budget_exceeded = false;
        if opts.auto && tree.status() != ProofStatus::Stale {
            budget_exceeded = auto_all(&mut tree, &opts.order, &rules, opts.budget).is_err();
        }
        let incompatible = matches!(verdict, Some(ReuseVerdict::Incompatible(_)));
        let persist = !incompatible && tree.status() != ProofStatus::Stale && tree.application_count() > 0;
        if persist {
            save_proof(&path, &StoredProof::from_tree(&tree)).map_err(io(&path))?;
        }
        reports.push(PoReport {
            name,
            verdict,
            status: tree.status(),
            applications: tree.application_count(),
            budget_exceeded,
            persisted: persist,
        });
    }
    Ok(reports)
}

/// Batch proving with a printed report. Exit status: 0 when every
/// obligation is closed, 1 otherwise, 2 on IO or parse failure.
pub fn cmd_prove(seq_file: &Path, opts: &ProveOptions, out: &mut impl Write) -> i32 {
    match prove_file(seq_file, opts) {
        Ok(reports) => {
            for r in &reports {
                let _ = writeln!(out, "{r}");
            }
            let closed = reports.iter().filter(|r| r.status == ProofStatus::Closed).count();
            let _ = writeln!(out, "{closed}/{} closed", reports.len());
            if closed == reports.len() {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let _ = writeln!(out, "{e}");
            2
        }
    }
}
