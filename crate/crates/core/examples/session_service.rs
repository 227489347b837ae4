//! Drives the HTTP session API in-process; `dialog serve` exposes the same
//! router on a port.

use std::sync::Arc;

use axum::body::{to_bytes, Body};
use axum::http::Request;
use tower::ServiceExt;

use dialog_core::dialog::DialogEngine;
use dialog_core::service::{router, SessionStore};

async fn send(store: &Arc<SessionStore>, method: &str, uri: &str, body: Option<String>) -> String {
    let req = Request::builder()
        .method(method)
        .uri(uri)
        .header("content-type", "application/json")
        .body(body.map(Body::from).unwrap_or_else(Body::empty))
        .unwrap();
    let resp = router(store.clone()).oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = to_bytes(resp.into_body(), usize::MAX).await.unwrap();
    format!("{status} {}", String::from_utf8_lossy(&bytes))
}

fn main() {
    let rt = tokio::runtime::Builder::new_current_thread().build().unwrap();
    rt.block_on(async {
        let store = Arc::new(SessionStore::new(Arc::new(DialogEngine::train())));
        println!("{}", send(&store, "POST", "/session", None).await);
        for text in ["When does a train depart to Rome?", "From Milan."] {
            let body = serde_json::json!({ "text": text }).to_string();
            println!("{}", send(&store, "POST", "/session/s1/utterance", Some(body)).await);
        }
        println!("{}", send(&store, "POST", "/session/s9/utterance", Some("{\"text\":\"hi\"}".into())).await);
    });
}
