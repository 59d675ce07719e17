use std::path::PathBuf;
use std::sync::Arc;

use albumaudit_core::{io, MisconfigKind, Policy};
use albumaudit_service::{router, AuditService};
use axum::body::Body;
use axum::http::{Method, Request, StatusCode};
use serde_json::Value;
use tower::ServiceExt;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures").join(name)
}

struct Harness {
    _dir: tempfile::TempDir,
    path: PathBuf,
    service: Arc<AuditService>,
}

impl Harness {
    fn new(name: &str) -> Self {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("dataset.json");
        std::fs::copy(fixture(name), &path).unwrap();
        let service = Arc::new(AuditService::open(&path).unwrap());
        Self { _dir: dir, path, service }
    }

    async fn call(&self, method: Method, uri: &str, body: Option<&str>) -> (StatusCode, Value) {
        let req = Request::builder()
            .method(method)
            .uri(uri)
            .header("content-type", "application/json")
            .body(body.map(|b| Body::from(b.to_owned())).unwrap_or_else(Body::empty))
            .unwrap();
        let resp = router(self.service.clone(), None).oneshot(req).await.unwrap();
        let status = resp.status();
        let bytes = axum::body::to_bytes(resp.into_body(), usize::MAX).await.unwrap();
        (status, serde_json::from_slice(&bytes).unwrap_or(Value::Null))
    }

    async fn get(&self, uri: &str) -> (StatusCode, Value) {
        self.call(Method::GET, uri, None).await
    }

    async fn put(&self, uri: &str, body: &str) -> (StatusCode, Value) {
        self.call(Method::PUT, uri, Some(body)).await
    }
}

fn sensitivities(scan: &Value) -> Vec<f64> {
    let mut s: Vec<f64> =
        scan["report"]["groups"].as_array().unwrap().iter().map(|g| g["sensitivity"].as_f64().unwrap()).collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

fn handle_for(scan: &Value, key: &str) -> String {
    scan["layout"]
        .as_array()
        .unwrap()
        .iter()
        .map(|n| n["id"].as_str().unwrap().to_owned())
        .find(|h| h.ends_with(&format!(".{key}")))
        .unwrap()
}

#[tokio::test]
async fn scan_golden() {
    let h = Harness::new("golden.json");
    let (status, body) = h.get("/api/scan").await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(sensitivities(&body), vec![1.0, 0.8, 0.4, 0.0]);
    assert_eq!(body["layout"].as_array().unwrap().len(), 4);
    assert_eq!(body["viewport"]["w"], 1000.0);
    assert_eq!(body["fingerprint"], body["report"]["fingerprint"]);
}

#[tokio::test]
async fn scan_clean() {
    let h = Harness::new("clean.json");
    let (_, body) = h.get("/api/scan").await;
    assert!(sensitivities(&body).iter().all(|s| *s == 0.0));
}

#[tokio::test]
async fn viewport_rescales_geometry_only() {
    let h = Harness::new("golden.json");
    let (_, a) = h.get("/api/scan").await;
    let (_, b) = h.get("/api/scan?w=500&h=500").await;
    assert_eq!(a["report"], b["report"]);
    let total: f64 = b["layout"]
        .as_array()
        .unwrap()
        .iter()
        .map(|n| n["rect"]["w"].as_f64().unwrap() * n["rect"]["h"].as_f64().unwrap())
        .sum();
    assert!((total - 250_000.0).abs() < 1e-6);

    let (status, body) = h.get("/api/scan?w=0&h=10").await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(body["error"], "invalid_viewport");
}

#[tokio::test]
async fn group_drill_down() {
    let h = Harness::new("golden.json");
    let (_, scan) = h.get("/api/scan").await;
    let parent_color = |handle: &str| {
        scan["layout"].as_array().unwrap().iter().find(|n| n["id"] == handle).unwrap()["color"].clone()
    };

    let friends = handle_for(&scan, "friends");
    let (status, group) = h.get(&format!("/api/groups/{friends}")).await;
    assert_eq!(status, StatusCode::OK);
    let nodes = group["layout"].as_array().unwrap();
    assert_eq!(nodes.len(), 2);
    assert!(nodes.iter().all(|n| n["color"] == parent_color(&friends)));
    assert_eq!(group["albums"].as_array().unwrap().len(), 2);

    let public = handle_for(&scan, "public");
    let (_, group) = h.get(&format!("/api/groups/{public}?w=300&h=200")).await;
    let nodes = group["layout"].as_array().unwrap();
    assert_eq!(nodes.len(), 1);
    assert_eq!(nodes[0]["rect"], serde_json::json!({"x": 0.0, "y": 0.0, "w": 300.0, "h": 200.0}));
    assert_eq!(nodes[0]["color"], serde_json::json!([255, 0, 0]));

    let (status, _) = h.get("/api/groups/ffff.public").await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    let (status, _) = h.get("/api/groups/public").await;
    assert_eq!(status, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn album_detail() {
    let h = Harness::new("golden.json");
    let (status, a2) = h.get("/api/albums/a2").await;
    assert_eq!(status, StatusCode::OK);
    let m4 = a2["misconfigurations"].as_array().unwrap().iter().find(|m| m["kind"] == "M4").unwrap();
    assert_eq!(m4["weight"], 0.6);
    // likes 8 on a2p5; comments tie at 6 between a2p2 and a2p6
    assert_eq!(a2["most_liked"], "a2p5");
    assert_eq!(a2["most_commented"], "a2p2");
    assert!(a2["similar"].as_array().unwrap().len() <= 3);

    let (_, a5) = h.get("/api/albums/a5").await;
    assert!(a5["misconfigurations"].as_array().unwrap().is_empty());

    let (status, body) = h.get("/api/albums/nope").await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert_eq!(body["id"], "nope");
}

#[tokio::test]
async fn fix_public_album_and_rescan() {
    let h = Harness::new("golden.json");
    let (_, before) = h.get("/api/scan").await;
    let old_public = handle_for(&before, "public");

    let (status, after) = h.put("/api/albums/a1/policy", r#"{"type":"friends"}"#).await;
    assert_eq!(status, StatusCode::OK);
    let groups = after["report"]["groups"].as_array().unwrap();
    assert!(groups.iter().all(|g| g["key"] != "public"));
    let home = groups.iter().find(|g| g["albums"].as_array().unwrap().contains(&"a1".into())).unwrap();
    assert!(home["misconfigurations"].as_array().unwrap().iter().all(|m| m["kind"] != "M6"));
    let max = home["misconfigurations"].as_array().unwrap().iter().map(|m| m["weight"].as_f64().unwrap()).fold(0.0, f64::max);
    assert_eq!(home["sensitivity"].as_f64().unwrap(), max);

    // read-your-writes, on disk and through the API
    let (_, again) = h.get("/api/scan").await;
    assert_eq!(again["report"], after["report"]);
    assert_eq!(io::load(&h.path).unwrap().album(&"a1".into()).unwrap().policy, Policy::Friends);

    // the old drill-down handle is stale now
    let (status, _) = h.get(&format!("/api/groups/{old_public}")).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn invalid_policy_changes_nothing() {
    let h = Harness::new("golden.json");
    let on_disk = std::fs::read(&h.path).unwrap();
    let (_, before) = h.get("/api/scan").await;

    let (status, body) = h
        .put(
            "/api/albums/a1/policy",
            r#"{"type":"custom","allowed":{"friends":[],"lists":["l9"]},"denied":{"friends":[],"lists":[]}}"#,
        )
        .await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(body["error"], "unknown_list");
    assert_eq!(body["id"], "l9");

    let (status, body) = h.put("/api/albums/a1/policy", r#"{"type":"everyone"}"#).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(body["error"], "malformed_policy");

    let (status, _) = h.put("/api/albums/zz/policy", r#"{"type":"friends"}"#).await;
    assert_eq!(status, StatusCode::NOT_FOUND);

    let (_, after) = h.get("/api/scan").await;
    assert_eq!(before, after);
    assert_eq!(std::fs::read(&h.path).unwrap(), on_disk);
}

#[tokio::test]
async fn identical_policy_keeps_fingerprint() {
    let h = Harness::new("golden.json");
    let (_, before) = h.get("/api/scan").await;
    let (status, after) = h.put("/api/albums/a1/policy", r#"{"type":"public"}"#).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(before["fingerprint"], after["fingerprint"]);
}

#[tokio::test]
async fn failed_save_rolls_back() {
    let h = Harness::new("golden.json");
    let (_, before) = h.get("/api/scan").await;
    // Replace the dataset file with a directory so the rename cannot land.
    std::fs::remove_file(&h.path).unwrap();
    std::fs::create_dir(&h.path).unwrap();
    std::fs::write(h.path.join("occupied"), "x").unwrap();

    let (status, body) = h.put("/api/albums/a1/policy", r#"{"type":"friends"}"#).await;
    assert_eq!(status, StatusCode::INTERNAL_SERVER_ERROR);
    assert_eq!(body["error"], "io");
    let (_, after) = h.get("/api/scan").await;
    assert_eq!(before, after);
}

#[tokio::test]
async fn unknown_api_path_is_json_404() {
    let h = Harness::new("clean.json");
    let (status, body) = h.get("/api/nothing").await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert_eq!(body["error"], "not_found");
}

#[test]
fn concurrent_readers_see_whole_snapshots() {
    let h = Harness::new("golden.json");
    let svc = h.service.clone();
    let writer = {
        let svc = svc.clone();
        std::thread::spawn(move || {
            for i in 0..20 {
                let p = if i % 2 == 0 { Policy::Friends } else { Policy::Public };
                svc.put_album_policy("a1", p, albumaudit_service::DEFAULT_VIEWPORT).unwrap();
            }
        })
    };
    let readers: Vec<_> = (0..4)
        .map(|_| {
            let svc = svc.clone();
            std::thread::spawn(move || {
                for _ in 0..50 {
                    let snap = svc.snapshot();
                    assert_eq!(snap.report.fingerprint, snap.dataset.fingerprint());
                    let public = snap.dataset.album(&"a1".into()).unwrap().policy == Policy::Public;
                    let has_m6 = snap
                        .report
                        .groups
                        .iter()
                        .any(|g| g.misconfigurations.iter().any(|m| m.kind == MisconfigKind::M6));
                    assert_eq!(public, has_m6);
                }
            })
        })
        .collect();
    writer.join().unwrap();
    for r in readers {
        r.join().unwrap();
    }
}
