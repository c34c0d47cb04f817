use std::path::{Path, PathBuf};

use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

use theoria::workspace::{cmd_prove, proof_path, ProveOptions};
use theoria_cli::{router, AppState};

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures/workspace")
}

fn copy_fixtures() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    for entry in std::fs::read_dir(fixtures()).unwrap() {
        let entry = entry.unwrap();
        std::fs::copy(entry.path(), dir.path().join(entry.file_name())).unwrap();
    }
    dir
}

fn app(dir: &Path) -> Router {
    router(AppState::load(dir).unwrap())
}

async fn call(app: &Router, method: &str, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let req = Request::builder().method(method).uri(uri).header("content-type", "application/json");
    let req = match body {
        Some(b) => req.body(Body::from(b.to_string())).unwrap(),
        None => req.body(Body::empty()).unwrap(),
    };
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    let value = if bytes.is_empty() { Value::Null } else { serde_json::from_slice(&bytes).unwrap() };
    (status, value)
}

fn rewrite(theory: &str, rule: &str, position: &str) -> Value {
    json!({ "reasoner": "theory.manualRewrite", "theory": theory, "rule": rule, "hyp": null, "position": position })
}

#[tokio::test]
async fn lists_proof_obligations() {
    let dir = copy_fixtures();
    let app = app(dir.path());
    let (status, body) = call(&app, "GET", "/pos", None).await;
    assert_eq!(status, StatusCode::OK);
    let ids: Vec<&str> = body["pos"].as_array().unwrap().iter().map(|p| p["id"].as_str().unwrap()).collect();
    assert_eq!(ids, ["list.cons_not_empty", "list.length_one", "list.nil_is_empty", "real.minus_zero"]);
    let real = &body["pos"][3];
    assert_eq!(real["status"], "CLOSED");
    assert_eq!(real["verdict"]["verdict"], "NEEDS_REPLAY");
    assert_eq!(body["pos"][0]["status"], "OPEN");
}

#[tokio::test]
async fn applies_a_rule_picked_from_the_applicable_list() {
    let dir = copy_fixtures();
    let app = app(dir.path());
    let (status, body) = call(&app, "GET", "/pos/list.nil_is_empty/nodes/0/applicable", None).await;
    assert_eq!(status, StatusCode::OK);
    let choice = body["applicable"]
        .as_array()
        .unwrap()
        .iter()
        .find(|a| a["label"] == "List.isEmpty_nil_rewrite")
        .unwrap()
        .clone();
    assert_eq!(choice["target"], json!({ "kind": "goal", "position": "ε" }));

    let (status, tree) =
        call(&app, "POST", "/pos/list.nil_is_empty/apply", Some(json!({ "node": 0, "input": choice["input"] }))).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(tree["nodes"][1]["sequent"]["text"], "⊢ ⊤");
    let (_, tree) = call(
        &app,
        "POST",
        "/pos/list.nil_is_empty/apply",
        Some(json!({ "node": 1, "input": { "reasoner": "core.trueGoal" } })),
    )
    .await;
    assert_eq!(tree["status"], "CLOSED");
    assert_eq!(tree["nodes"][0]["rule"]["label"], "List.isEmpty_nil_rewrite");
    assert!(proof_path(&dir.path().join("list.seq"), "nil_is_empty").exists());
}

#[tokio::test]
async fn failed_applications_leave_the_stored_proof_alone() {
    let dir = copy_fixtures();
    let app = app(dir.path());
    let stored = proof_path(&dir.path().join("real.seq"), "minus_zero");
    call(&app, "POST", "/pos/real.minus_zero/prune", Some(json!({ "nodeId": 1 }))).await;
    let before = std::fs::read(&stored).unwrap();

    let (status, body) = call(
        &app,
        "POST",
        "/pos/real.minus_zero/apply",
        Some(json!({ "node": 1, "input": rewrite("Real", "minus_eq", "") })),
    )
    .await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(body["error"], "RuleNotApplicable");
    assert_eq!(std::fs::read(&stored).unwrap(), before);

    let (status, body) = call(
        &app,
        "POST",
        "/pos/real.minus_zero/apply",
        Some(json!({ "node": 0, "input": rewrite("Real", "minus_eq", "") })),
    )
    .await;
    assert_eq!(status, StatusCode::CONFLICT);
    assert_eq!(body["error"], "NotPending");
    let (status, _) = call(
        &app,
        "POST",
        "/pos/real.minus_zero/apply",
        Some(json!({ "node": 9, "input": rewrite("Real", "minus_eq", "") })),
    )
    .await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert_eq!(std::fs::read(&stored).unwrap(), before);
}

#[tokio::test]
async fn prune_then_reapply_restores_the_tree() {
    let dir = copy_fixtures();
    let app = app(dir.path());
    let (_, closed) = call(&app, "GET", "/pos/real.minus_zero/tree", None).await;
    let (status, pruned) = call(&app, "POST", "/pos/real.minus_zero/prune", Some(json!({ "nodeId": 0 }))).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(pruned["nodes"].as_array().unwrap().len(), 1);
    assert_eq!(pruned["nodes"][0]["status"], "PENDING");

    call(
        &app,
        "POST",
        "/pos/real.minus_zero/apply",
        Some(json!({ "node": 0, "input": rewrite("Real", "minus_eq", "") })),
    )
    .await;
    let (_, auto) = call(&app, "POST", "/pos/real.minus_zero/auto", None).await;
    assert_eq!(auto["budgetExceeded"], false);
    assert_eq!(auto["tree"], closed);
    let stored = std::fs::read_to_string(proof_path(&dir.path().join("real.seq"), "minus_zero")).unwrap();
    assert_eq!(stored, std::fs::read_to_string(fixtures().join("real.minus_zero.prf.json")).unwrap());
}

#[tokio::test]
async fn auto_matches_batch_proving() {
    let api_dir = copy_fixtures();
    let app = app(api_dir.path());
    for po in ["nil_is_empty", "cons_not_empty", "length_one"] {
        let (_, body) = call(&app, "POST", &format!("/pos/list.{po}/auto"), Some(json!({}))).await;
        assert_eq!(body["tree"]["status"], "CLOSED");
    }
    let cli_dir = copy_fixtures();
    let seq = cli_dir.path().join("list.seq");
    assert_eq!(cmd_prove(&seq, &ProveOptions { auto: true, ..ProveOptions::default() }, &mut Vec::new()), 0);
    for po in ["nil_is_empty", "cons_not_empty", "length_one"] {
        let api = std::fs::read(proof_path(&api_dir.path().join("list.seq"), po)).unwrap();
        let cli = std::fs::read(proof_path(&seq, po)).unwrap();
        assert_eq!(api, cli, "{po}");
    }
}

#[tokio::test]
async fn auto_reports_an_exhausted_budget() {
    let dir = copy_fixtures();
    let app = app(dir.path());
    let (status, body) =
        call(&app, "POST", "/pos/list.length_one/auto", Some(json!({ "budget": 1, "order": ["expand"] }))).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["budgetExceeded"], true);
    assert_eq!(body["steps"], 1);
}

#[tokio::test]
async fn replay_picks_up_edited_theories() {
    let dir = copy_fixtures();
    let app = app(dir.path());
    let thy = dir.path().join("Real.thy");
    let text = std::fs::read_to_string(&thy).unwrap();
    std::fs::write(&thy, text.replace("rewrite minus_eq", "rewrite minus_equation")).unwrap();
    let (status, body) = call(&app, "POST", "/replay", None).await;
    assert_eq!(status, StatusCode::OK);
    let real = body["pos"].as_array().unwrap().iter().find(|p| p["id"] == "real.minus_zero").unwrap();
    assert_eq!(real["status"], "STALE");
    let (_, tree) = call(&app, "GET", "/pos/real.minus_zero/tree", None).await;
    assert_eq!(tree["nodes"][0]["status"], "STALE");
}

#[tokio::test]
async fn unknown_obligations_are_not_found() {
    let dir = copy_fixtures();
    let app = app(dir.path());
    let (status, body) = call(&app, "GET", "/pos/nope/tree", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert_eq!(body["error"], "NotFound");
}

#[tokio::test(flavor = "multi_thread", worker_threads = 4)]
async fn concurrent_mutations_are_serialised() {
    let dir = copy_fixtures();
    let app = app(dir.path());
    let mut tasks = Vec::new();
    for _ in 0..8 {
        let app = app.clone();
        tasks.push(tokio::spawn(async move { call(&app, "POST", "/pos/list.length_one/auto", Some(json!({}))).await }));
    }
    let mut steps = 0;
    for t in tasks {
        let (status, body) = t.await.unwrap();
        assert_eq!(status, StatusCode::OK);
        steps += body["steps"].as_u64().unwrap();
    }
    let (_, tree) = call(&app, "GET", "/pos/list.length_one/tree", None).await;
    assert_eq!(tree["status"], "CLOSED");
    assert_eq!(tree["applications"].as_u64().unwrap(), steps);
}
