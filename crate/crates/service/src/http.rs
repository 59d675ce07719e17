//! HTTP routes.

use std::path::PathBuf;
use std::sync::Arc;

use albumaudit_core::{Policy, Rect};
use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::response::{Html, IntoResponse, Response};
use axum::routing::get;
use axum::{Json, Router};
use serde::Deserialize;
use serde_json::json;
use tower_http::services::ServeDir;

use crate::state::{AuditService, ServiceError, DEFAULT_VIEWPORT};

impl IntoResponse for ServiceError {
    fn into_response(self) -> Response {
        let (status, body) = match self {
            ServiceError::Validation(e) => (
                StatusCode::BAD_REQUEST,
                json!({ "error": e.code.as_str(), "id": e.id, "message": e.to_string() }),
            ),
            ServiceError::BadRequest { code, message } => {
                (StatusCode::BAD_REQUEST, json!({ "error": code, "message": message }))
            }
            ServiceError::NotFound { what, id } => (
                StatusCode::NOT_FOUND,
                json!({ "error": "not_found", "id": id, "message": format!("unknown {what} {id:?}") }),
            ),
            ServiceError::Io(message) => {
                (StatusCode::INTERNAL_SERVER_ERROR, json!({ "error": "io", "message": message }))
            }
        };
        (status, Json(body)).into_response()
    }
}

#[derive(Debug, Deserialize)]
struct ViewportQuery {
    w: Option<f64>,
    h: Option<f64>,
}

impl ViewportQuery {
    fn viewport(&self) -> Result<Rect, ServiceError> {
        let w = self.w.unwrap_or(DEFAULT_VIEWPORT.w);
        let h = self.h.unwrap_or(DEFAULT_VIEWPORT.h);
        if !(w.is_finite() && h.is_finite() && w > 0.0 && h > 0.0) {
            return Err(ServiceError::BadRequest {
                code: "invalid_viewport",
                message: format!("viewport must be positive, got {w}x{h}"),
            });
        }
        Ok(Rect::new(0.0, 0.0, w, h))
    }
}

type AppState = State<Arc<AuditService>>;

async fn scan(State(svc): AppState, Query(q): Query<ViewportQuery>) -> Result<Response, ServiceError> {
    Ok(Json(svc.get_scan(q.viewport()?)?).into_response())
}

async fn group(
    State(svc): AppState,
    Path(handle): Path<String>,
    Query(q): Query<ViewportQuery>,
) -> Result<Response, ServiceError> {
    Ok(Json(svc.get_group(&handle, q.viewport()?)?).into_response())
}

async fn album(State(svc): AppState, Path(id): Path<String>) -> Result<Response, ServiceError> {
    Ok(Json(svc.get_album(&id)?).into_response())
}

async fn put_policy(
    State(svc): AppState,
    Path(id): Path<String>,
    Query(q): Query<ViewportQuery>,
    body: Bytes,
) -> Result<Response, ServiceError> {
    let viewport = q.viewport()?;
    let policy: Policy = serde_json::from_slice(&body)
        .map_err(|e| ServiceError::BadRequest { code: "malformed_policy", message: e.to_string() })?;
    let view = tokio::task::spawn_blocking(move || svc.put_album_policy(&id, policy, viewport))
        .await
        .map_err(|e| ServiceError::Io(e.to_string()))??;
    Ok(Json(view).into_response())
}

async fn api_not_found() -> ServiceError {
    ServiceError::NotFound { what: "endpoint", id: String::new() }
}

async fn no_ui() -> Html<&'static str> {
    Html(
        "<!doctype html><title>albumaudit</title>\
         <p>No UI bundle installed. Start the service with <code>--ui &lt;dir&gt;</code> \
         or use the JSON API under <code>/api</code>.</p>",
    )
}

/// All API routes, plus the UI bundle (or a placeholder page) at `/`.
pub fn router(service: Arc<AuditService>, ui_dir: Option<PathBuf>) -> Router {
    let api = Router::new()
        .route("/scan", get(scan))
        .route("/groups/{handle}", get(group))
        .route("/albums/{id}", get(album))
        .route("/albums/{id}/policy", axum::routing::put(put_policy))
        .fallback(api_not_found)
        .with_state(service);
    let app = Router::new().nest("/api", api);
    match ui_dir {
        Some(dir) => app.fallback_service(ServeDir::new(dir)),
        None => app.route("/", get(no_ui)),
    }
}

/// Serves `app` until Ctrl-C.
pub async fn serve(listener: tokio::net::TcpListener, app: Router) -> std::io::Result<()> {
    axum::serve(listener, app)
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
