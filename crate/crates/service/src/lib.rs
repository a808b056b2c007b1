//! HTTP JSON service for p-skyline queries and interactive elicitation.
//!
//! Datasets are uploaded once and shared read-only. Sessions accumulate
//! superior and inferior examples and re-elicit a relation on demand;
//! requests against one session are serialized, distinct sessions run
//! concurrently. Everything lives in memory.

mod error;
mod openapi;
mod session;

use std::collections::HashMap;
use std::net::SocketAddr;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, RwLock};

use axum::body::Bytes;
use axum::extract::{Path, State};
use axum::http::{HeaderValue, StatusCode};
use axum::routing::{get, post};
use axum::{Json, Router};
use pskyline::{Dataset, Schema};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Value};
use tokio::sync::Mutex;
use tower_http::cors::{Any, CorsLayer};

pub use error::ApiError;
pub use session::{Round, Session, StoredDataset};

type Reply = Result<(StatusCode, Json<Value>), ApiError>;

#[derive(Default)]
pub struct AppState {
    datasets: RwLock<HashMap<String, Arc<StoredDataset>>>,
    sessions: RwLock<HashMap<String, Arc<Mutex<Session>>>>,
    next: AtomicU64,
}

impl AppState {
    fn fresh_id(&self, prefix: &str) -> String {
        format!("{prefix}{}", self.next.fetch_add(1, Ordering::Relaxed) + 1)
    }

    fn dataset(&self, id: &str) -> Result<Arc<StoredDataset>, ApiError> {
        let map = self.datasets.read().expect("dataset map lock");
        map.get(id).cloned().ok_or_else(|| ApiError::not_found("dataset", id))
    }

    fn session(&self, id: &str) -> Result<Arc<Mutex<Session>>, ApiError> {
        let map = self.sessions.read().expect("session map lock");
        map.get(id).cloned().ok_or_else(|| ApiError::not_found("session", id))
    }
}

#[derive(Deserialize)]
struct NewDataset {
    schema: Value,
    csv: String,
}

#[derive(Deserialize)]
struct NewSession {
    dataset: String,
}

#[derive(Deserialize)]
struct Feedback {
    #[serde(default)]
    add_superior: Vec<String>,
    #[serde(default)]
    add_inferior: Vec<String>,
}

fn parse_body<T: DeserializeOwned>(body: &Bytes) -> Result<T, ApiError> {
    serde_json::from_slice(body).map_err(|e| ApiError::bad_request(format!("invalid request body: {e}")))
}

async fn create_dataset(State(state): State<Arc<AppState>>, body: Bytes) -> Reply {
    let req: NewDataset = parse_body(&body)?;
    let schema_text = match &req.schema {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    };
    let schema = Arc::new(Schema::from_json(&schema_text)?);
    let data = Dataset::from_csv(schema, &req.csv)?;
    let id = state.fresh_id("d");
    let stored = Arc::new(StoredDataset::new(id.clone(), data));
    let rows = stored.data.len();
    state.datasets.write().expect("dataset map lock").insert(id.clone(), stored);
    Ok((StatusCode::CREATED, Json(json!({ "id": id, "rows": rows }))))
}

async fn get_dataset(State(state): State<Arc<AppState>>, Path(id): Path<String>) -> Reply {
    Ok((StatusCode::OK, Json(state.dataset(&id)?.to_json())))
}

async fn get_skyline(State(state): State<Arc<AppState>>, Path(id): Path<String>) -> Reply {
    let d = state.dataset(&id)?;
    Ok((StatusCode::OK, Json(json!({ "ids": d.skyline }))))
}

async fn create_session(State(state): State<Arc<AppState>>, body: Bytes) -> Reply {
    let req: NewSession = parse_body(&body)?;
    let dataset = state.dataset(&req.dataset)?;
    let id = state.fresh_id("s");
    let session = Session::new(id.clone(), dataset);
    let snapshot = session.snapshot();
    state
        .sessions
        .write()
        .expect("session map lock")
        .insert(id, Arc::new(Mutex::new(session)));
    Ok((StatusCode::CREATED, Json(snapshot)))
}

async fn post_feedback(State(state): State<Arc<AppState>>, Path(id): Path<String>, body: Bytes) -> Reply {
    let req: Feedback = parse_body(&body)?;
    let session = state.session(&id)?;
    let mut guard = session.lock().await;
    Ok((StatusCode::OK, Json(guard.feedback(&req.add_superior, &req.add_inferior)?)))
}

async fn post_elicit(State(state): State<Arc<AppState>>, Path(id): Path<String>) -> Reply {
    let session = state.session(&id)?;
    let mut guard = session.lock_owned().await;
    let result = tokio::task::spawn_blocking(move || guard.elicit())
        .await
        .map_err(|e| ApiError::from(pskyline::Error::Internal(e.to_string())))??;
    Ok((StatusCode::OK, Json(result)))
}

async fn get_state(State(state): State<Arc<AppState>>, Path(id): Path<String>) -> Reply {
    let session = state.session(&id)?;
    let guard = session.lock().await;
    Ok((StatusCode::OK, Json(guard.snapshot())))
}

async fn get_spec() -> Json<Value> {
    Json(openapi::document())
}

/// Builds the router. `origin` restricts CORS to one UI origin; `None`
/// allows any origin.
pub fn router(state: Arc<AppState>, origin: Option<&str>) -> Router {
    let cors = match origin.and_then(|o| HeaderValue::from_str(o).ok()) {
        Some(o) => CorsLayer::new().allow_origin(o),
        None => CorsLayer::new().allow_origin(Any),
    }
    .allow_methods(Any)
    .allow_headers(Any);
    Router::new()
        .route("/datasets", post(create_dataset))
        .route("/datasets/{id}", get(get_dataset))
        .route("/datasets/{id}/skyline", get(get_skyline))
        .route("/sessions", post(create_session))
        .route("/sessions/{id}/feedback", post(post_feedback))
        .route("/sessions/{id}/elicit", post(post_elicit))
        .route("/sessions/{id}/state", get(get_state))
        .route("/spec", get(get_spec))
        .layer(cors)
        .with_state(state)
}

/// Serves on `addr` until the process is stopped.
pub async fn serve(addr: SocketAddr, origin: Option<&str>) -> std::io::Result<()> {
    let app = router(Arc::new(AppState::default()), origin);
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, app).await
}
