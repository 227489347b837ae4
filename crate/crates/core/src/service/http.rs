use std::sync::Arc;

use axum::extract::rejection::JsonRejection;
use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::Deserialize;
use serde_json::json;

use super::session::{ServiceError, SessionStore};

#[derive(Debug, Deserialize)]
pub struct UtteranceBody {
    pub text: String,
}

impl IntoResponse for ServiceError {
    fn into_response(self) -> Response {
        let status = match self {
            ServiceError::UnknownSession(_) => StatusCode::NOT_FOUND,
            ServiceError::InvalidBody(_) => StatusCode::BAD_REQUEST,
        };
        let body = json!({"error": {"code": self.code(), "message": self.to_string()}});
        (status, Json(body)).into_response()
    }
}

async fn create_session(State(store): State<Arc<SessionStore>>) -> impl IntoResponse {
    (StatusCode::CREATED, Json(json!({"sessionId": store.create()})))
}

async fn utterance(
    State(store): State<Arc<SessionStore>>,
    Path(id): Path<String>,
    body: Result<Json<UtteranceBody>, JsonRejection>,
) -> Result<Response, ServiceError> {
    let Json(body) = body.map_err(|e| ServiceError::InvalidBody(e.body_text()))?;
    // the engine is synchronous and fast; turns on one session are
    // serialized by the store
    let resp = store.handle_utterance(&id, &body.text)?;
    Ok(Json(resp).into_response())
}

async fn state(
    State(store): State<Arc<SessionStore>>,
    Path(id): Path<String>,
) -> Result<Response, ServiceError> {
    Ok(Json(store.state(&id)?).into_response())
}

/// `POST /session`, `POST /session/{id}/utterance`, `GET /session/{id}/state`.
pub fn router(store: Arc<SessionStore>) -> Router {
    Router::new()
        .route("/session", post(create_session))
        .route("/session/{id}/utterance", post(utterance))
        .route("/session/{id}/state", get(state))
        .with_state(store)
}

/// Serves the API on `0.0.0.0:port` until the process is stopped.
pub async fn serve(store: Arc<SessionStore>, port: u16) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(("0.0.0.0", port)).await?;
    axum::serve(listener, router(store)).await
}
