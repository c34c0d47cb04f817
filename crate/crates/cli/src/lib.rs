//! The HTTP service behind `theoria serve`: a JSON view of the proof
//! obligations of a workspace, with interactive rule application.
//!
//! Each proof obligation has its own lock, so reads run concurrently and
//! mutations of one obligation are serialised. A mutation is computed on a
//! copy of the tree and written to disk before the copy replaces the
//! original; a failed mutation leaves both untouched.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path as UrlPath, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::Deserialize;
use serde_json::{json, Value};
use tokio::sync::RwLock;

use theoria::prover::{
    applicable_rules, auto_all, check_reusable, replay, sequent_json, step_budget, tree_json, AutoKind, ProofTree,
    ProverError, ReasonerInput, ReuseVerdict, StoredProof, API_VERSION, DEFAULT_ORDER,
};
use theoria::theory::RuleBase;
use theoria::workspace::{load_proof, proof_path, save_proof, Workspace, WorkspaceError};

/// One proof obligation and its current tree.
struct Po {
    file: PathBuf,
    name: String,
    rules: RuleBase,
    verdict: Option<ReuseVerdict>,
    tree: RwLock<ProofTree>,
}

impl Po {
    fn proof_path(&self) -> PathBuf {
        proof_path(&self.file, &self.name)
    }
}

pub struct AppState {
    root: PathBuf,
    pos: RwLock<BTreeMap<String, Arc<Po>>>,
}

/// Obligations are identified by `<file stem>.<name>`.
fn po_id(file: &Path, name: &str) -> String {
    let stem = file.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    format!("{stem}.{name}")
}

/// Loads every sequent file below `root`, resuming from stored proofs that
/// are still compatible.
fn load_index(root: &Path) -> Result<BTreeMap<String, Arc<Po>>, WorkspaceError> {
    let ws = Workspace::load(root)?;
    let mut out = BTreeMap::new();
    for file in ws.sequent_files()? {
        let (rules, sequents) = ws.load_sequents(&file)?;
        for (name, seq) in sequents {
            let mut tree = ProofTree::new(name.clone(), seq.clone());
            let mut verdict = None;
            if let Ok(Some(stored)) = load_proof(&proof_path(&file, &name)) {
                if let Ok(v) = check_reusable(&stored, &seq, &rules) {
                    if !matches!(v, ReuseVerdict::Incompatible(_)) {
                        if let Ok(t) = replay(&stored, &seq, &rules) {
                            tree = t;
                        }
                    }
                    verdict = Some(v);
                }
            }
            let id = po_id(&file, &name);
            out.insert(
                id,
                Arc::new(Po { file: file.clone(), name, rules: rules.clone(), verdict, tree: RwLock::new(tree) }),
            );
        }
    }
    Ok(out)
}

impl AppState {
    pub fn load(root: impl Into<PathBuf>) -> Result<Arc<AppState>, WorkspaceError> {
        let root = root.into();
        let pos = load_index(&root)?;
        Ok(Arc::new(AppState { root, pos: RwLock::new(pos) }))
    }

    async fn po(&self, id: &str) -> Result<Arc<Po>, ApiError> {
        self.pos.read().await.get(id).cloned().ok_or_else(|| ApiError::not_found(format!("no proof obligation `{id}`")))
    }
}

pub struct ApiError {
    status: StatusCode,
    kind: &'static str,
    message: String,
}

impl ApiError {
    fn not_found(message: String) -> Self {
        ApiError { status: StatusCode::NOT_FOUND, kind: "NotFound", message }
    }

    fn internal(message: impl ToString) -> Self {
        ApiError { status: StatusCode::INTERNAL_SERVER_ERROR, kind: "Internal", message: message.to_string() }
    }
}

impl From<ProverError> for ApiError {
    fn from(e: ProverError) -> Self {
        let (status, kind) = match &e {
            ProverError::UnknownNode(_) => (StatusCode::NOT_FOUND, "UnknownNode"),
            ProverError::NotPending(_) => (StatusCode::CONFLICT, "NotPending"),
            ProverError::Reasoner(r) => (StatusCode::UNPROCESSABLE_ENTITY, reasoner_error_kind(r)),
        };
        ApiError { status, kind, message: e.to_string() }
    }
}

fn reasoner_error_kind(e: &theoria::prover::ReasonerError) -> &'static str {
    use theoria::prover::ReasonerError::*;
    match e {
        RuleNotApplicable(_) => "RuleNotApplicable",
        UnknownRule { .. } => "UnknownRule",
        DirectionNotAllowed { .. } => "DirectionNotAllowed",
        InvalidPosition(_) => "InvalidPosition",
        InvalidHypothesis(_) => "InvalidHypothesis",
        NotExpandable(_) => "NotExpandable",
        Ast(_) => "RuleNotApplicable",
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = json!({ "version": API_VERSION, "error": self.kind, "message": self.message });
        (self.status, Json(body)).into_response()
    }
}

type ApiResult = Result<Json<Value>, ApiError>;

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/pos", get(list_pos))
        .route("/pos/{id}/tree", get(get_tree))
        .route("/pos/{id}/nodes/{node}/applicable", get(get_applicable))
        .route("/pos/{id}/apply", post(post_apply))
        .route("/pos/{id}/auto", post(post_auto))
        .route("/pos/{id}/prune", post(post_prune))
        .route("/replay", post(post_replay))
        .with_state(state)
}

async fn list_pos(State(state): State<Arc<AppState>>) -> ApiResult {
    let pos = state.pos.read().await;
    let mut out = Vec::new();
    for (id, po) in pos.iter() {
        let tree = po.tree.read().await;
        out.push(json!({
            "id": id,
            "name": po.name,
            "file": po.file.strip_prefix(&state.root).unwrap_or(&po.file),
            "status": tree.status(),
            "applications": tree.application_count(),
            "verdict": po.verdict,
        }));
    }
    Ok(Json(json!({ "version": API_VERSION, "pos": out })))
}

async fn get_tree(State(state): State<Arc<AppState>>, UrlPath(id): UrlPath<String>) -> ApiResult {
    let po = state.po(&id).await?;
    let tree = po.tree.read().await;
    Ok(Json(tree_json(&tree)))
}

async fn get_applicable(
    State(state): State<Arc<AppState>>,
    UrlPath((id, node)): UrlPath<(String, usize)>,
) -> ApiResult {
    let po = state.po(&id).await?;
    let tree = po.tree.read().await;
    let n = tree.node(node).ok_or(ProverError::UnknownNode(node))?;
    let options = if n.rule.is_none() { applicable_rules(&n.sequent, &po.rules) } else { Vec::new() };
    Ok(Json(json!({
        "version": API_VERSION,
        "node": node,
        "sequent": sequent_json(&n.sequent),
        "applicable": options,
    })))
}

/// Runs `change` on a copy of the tree and persists the result before
/// publishing it.
async fn mutate<T>(
    po: &Po,
    change: impl FnOnce(&mut ProofTree) -> Result<T, ApiError>,
) -> Result<(T, Value), ApiError> {
    let mut guard = po.tree.write().await;
    let mut copy = guard.clone();
    let out = change(&mut copy)?;
    save_proof(&po.proof_path(), &StoredProof::from_tree(&copy)).map_err(ApiError::internal)?;
    *guard = copy;
    Ok((out, tree_json(&guard)))
}

#[derive(Deserialize)]
struct ApplyBody {
    node: usize,
    input: ReasonerInput,
}

async fn post_apply(
    State(state): State<Arc<AppState>>,
    UrlPath(id): UrlPath<String>,
    Json(body): Json<ApplyBody>,
) -> ApiResult {
    let po = state.po(&id).await?;
    let (_, tree) = mutate(&po, |t| Ok(t.apply(body.node, body.input, &po.rules)?)).await?;
    Ok(Json(tree))
}

#[derive(Deserialize, Default)]
#[serde(default)]
struct AutoBody {
    order: Option<Vec<AutoKind>>,
    budget: Option<usize>,
}

async fn post_auto(State(state): State<Arc<AppState>>, UrlPath(id): UrlPath<String>, body: Bytes) -> ApiResult {
    let po = state.po(&id).await?;
    let body: AutoBody = if body.iter().all(u8::is_ascii_whitespace) {
        AutoBody::default()
    } else {
        serde_json::from_slice(&body).map_err(|e| ApiError {
            status: StatusCode::BAD_REQUEST,
            kind: "InvalidBody",
            message: e.to_string(),
        })?
    };
    let order = body.order.unwrap_or_else(|| DEFAULT_ORDER.to_vec());
    let budget = body.budget.unwrap_or_else(step_budget);
    let ((steps, exceeded), tree) = mutate(&po, |t| {
        Ok(match auto_all(t, &order, &po.rules, budget) {
            Ok(r) => (r.applications.len(), false),
            Err(e) => (e.report.applications.len(), true),
        })
    })
    .await?;
    Ok(Json(json!({ "version": API_VERSION, "steps": steps, "budgetExceeded": exceeded, "tree": tree })))
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase")]
struct PruneBody {
    node_id: usize,
}

async fn post_prune(
    State(state): State<Arc<AppState>>,
    UrlPath(id): UrlPath<String>,
    Json(body): Json<PruneBody>,
) -> ApiResult {
    let po = state.po(&id).await?;
    let (_, tree) = mutate(&po, |t| Ok(t.prune(body.node_id)?)).await?;
    Ok(Json(tree))
}

/// Reloads the theories and sequent files from disk and replays every
/// stored proof against them.
async fn post_replay(State(state): State<Arc<AppState>>) -> ApiResult {
    let root = state.root.clone();
    let fresh =
        tokio::task::spawn_blocking(move || load_index(&root)).await.map_err(ApiError::internal)?.map_err(|e| {
            ApiError { status: StatusCode::UNPROCESSABLE_ENTITY, kind: "InvalidWorkspace", message: e.to_string() }
        })?;
    let mut report = Vec::new();
    for (id, po) in &fresh {
        let tree = po.tree.read().await;
        report.push(json!({ "id": id, "verdict": po.verdict, "status": tree.status() }));
    }
    *state.pos.write().await = fresh;
    Ok(Json(json!({ "version": API_VERSION, "pos": report })))
}
