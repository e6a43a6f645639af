//! JSON session service under `/api/v1`.
//!
//! Turns on one session queue on that session's lock in arrival order.
//! Reads are served from a snapshot taken after each committed turn and never
//! wait on a running turn.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use axum::body::Bytes;
use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use concierge_core::egc::EgcError;
use concierge_core::parser::ParseError;
use concierge_core::rules::RulesError;
use concierge_core::{
    CatalogSummary, Concierge, DialogError, EmotionVector, MentalState, SessionState, SessionStore, SituationFlags,
    StoreError, TurnResponse,
};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use tokio::net::TcpListener;
use tokio::sync::Mutex;

/// Error body shared by every endpoint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub code: String,
    pub message: String,
    pub detail: Option<Value>,
}

#[derive(Debug)]
pub struct ApiError {
    pub status: StatusCode,
    pub body: ErrorBody,
}

impl ApiError {
    fn new(status: StatusCode, code: &str, message: impl Into<String>) -> Self {
        Self {
            status,
            body: ErrorBody {
                code: code.into(),
                message: message.into(),
                detail: None,
            },
        }
    }

    fn with_detail(mut self, detail: Value) -> Self {
        self.body.detail = Some(detail);
        self
    }

    fn not_found(id: &str) -> Self {
        Self::new(StatusCode::NOT_FOUND, "session_not_found", format!("no session `{id}`"))
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}

impl From<DialogError> for ApiError {
    fn from(e: DialogError) -> Self {
        let msg = e.to_string();
        match e {
            DialogError::Parse(ParseError::EmptyUtterance) => Self::new(StatusCode::BAD_REQUEST, "empty_text", msg),
            DialogError::Egc(EgcError::InconsistentFlags(_)) => Self::new(StatusCode::BAD_REQUEST, "invalid_flags", msg),
            DialogError::Egc(_) => Self::new(StatusCode::UNPROCESSABLE_ENTITY, "evaluation_failed", msg),
            DialogError::Rules(RulesError::NoCandidates) => {
                Self::new(StatusCode::UNPROCESSABLE_ENTITY, "no_candidates", msg)
            }
            _ => Self::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", msg),
        }
    }
}

impl From<StoreError> for ApiError {
    fn from(e: StoreError) -> Self {
        match &e {
            StoreError::NotFound(id) => Self::not_found(id),
            StoreError::InvalidId(_) => Self::new(StatusCode::NOT_FOUND, "session_not_found", e.to_string()),
            _ => Self::new(StatusCode::INTERNAL_SERVER_ERROR, "store_failure", e.to_string()),
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CreateSession {
    #[serde(default)]
    pub person_id: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CreatedSession {
    pub session_id: String,
    pub person_id: Option<String>,
    pub mood: MentalState,
    pub profile: EmotionVector,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Utterance {
    pub text: String,
    #[serde(default)]
    pub flags: Option<SituationFlags>,
}

struct Entry {
    turn: Mutex<Option<SessionState>>,
    snapshot: RwLock<Arc<SessionState>>,
}

impl Entry {
    fn new(state: SessionState) -> Arc<Self> {
        Arc::new(Self {
            snapshot: RwLock::new(Arc::new(state.clone())),
            turn: Mutex::new(Some(state)),
        })
    }

    fn snapshot(&self) -> Arc<SessionState> {
        self.snapshot.read().expect("snapshot lock").clone()
    }
}

/// Shared service state. Cheap to clone.
#[derive(Clone)]
pub struct ApiState {
    concierge: Arc<Concierge>,
    store: Option<SessionStore>,
    sessions: Arc<RwLock<HashMap<String, Arc<Entry>>>>,
}

impl ApiState {
    /// Sessions live in memory only, or are also written to `store`.
    pub fn new(concierge: Concierge, store: Option<SessionStore>) -> Self {
        Self {
            concierge: Arc::new(concierge),
            store,
            sessions: Arc::default(),
        }
    }

    pub fn concierge(&self) -> &Concierge {
        &self.concierge
    }

    /// Finds a live session, falling back to the store for sessions written by
    /// an earlier process.
    fn entry(&self, id: &str) -> Result<Arc<Entry>, ApiError> {
        if let Some(e) = self.sessions.read().expect("session map").get(id) {
            return Ok(e.clone());
        }
        let store = self.store.as_ref().ok_or_else(|| ApiError::not_found(id))?;
        let state = store.load(id)?;
        let mut map = self.sessions.write().expect("session map");
        Ok(map.entry(id.to_string()).or_insert_with(|| Entry::new(state)).clone())
    }
}

pub fn router(state: ApiState) -> Router {
    Router::new()
        .route("/api/v1/sessions", post(create_session))
        .route("/api/v1/sessions/{id}", get(get_session).delete(delete_session))
        .route("/api/v1/sessions/{id}/utterances", post(post_utterance))
        .route("/api/v1/catalog", get(get_catalog))
        .fallback(|| async { ApiError::new(StatusCode::NOT_FOUND, "not_found", "no such endpoint") })
        .with_state(state)
}

/// Serves until ctrl-c.
pub async fn serve(listener: TcpListener, state: ApiState) -> std::io::Result<()> {
    axum::serve(listener, router(state))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}

fn json_body<T: for<'de> Deserialize<'de> + Default>(body: &[u8]) -> Result<T, ApiError> {
    if body.iter().all(u8::is_ascii_whitespace) {
        return Ok(T::default());
    }
    parse_body(body)
}

fn parse_body<T: for<'de> Deserialize<'de>>(body: &[u8]) -> Result<T, ApiError> {
    serde_json::from_slice(body).map_err(|e| {
        ApiError::new(StatusCode::BAD_REQUEST, "invalid_request", "request body is not valid JSON for this endpoint")
            .with_detail(Value::String(e.to_string()))
    })
}

async fn create_session(State(app): State<ApiState>, body: Bytes) -> Result<(StatusCode, Json<CreatedSession>), ApiError> {
    let req: CreateSession = json_body(&body)?;
    let state = app.concierge.new_session(req.person_id);
    if let Some(store) = &app.store {
        store.save(&state)?;
    }
    let created = CreatedSession {
        session_id: state.session_id.clone(),
        person_id: state.person_id.clone(),
        mood: state.mood.clone(),
        profile: state.profile.vector,
    };
    app.sessions
        .write()
        .expect("session map")
        .insert(state.session_id.clone(), Entry::new(state));
    tracing::info!(session = %created.session_id, "session created");
    Ok((StatusCode::CREATED, Json(created)))
}

async fn post_utterance(
    State(app): State<ApiState>,
    Path(id): Path<String>,
    body: Bytes,
) -> Result<Json<TurnResponse>, ApiError> {
    let req: Utterance = parse_body(&body)?;
    let entry = app.entry(&id)?;
    let mut slot = entry.turn.lock().await;
    // a delete that won the lock leaves the slot empty
    let current = slot.as_ref().ok_or_else(|| ApiError::not_found(&id))?;
    let mut next = current.clone();
    let response = app.concierge.process_turn(&mut next, &req.text, req.flags)?;
    if let Some(store) = &app.store {
        store.save(&next)?;
    }
    *entry.snapshot.write().expect("snapshot lock") = Arc::new(next.clone());
    *slot = Some(next);
    tracing::debug!(session = %id, turn = response.turn, rules = ?response.fired_rules, "turn");
    Ok(Json(response))
}

async fn get_session(State(app): State<ApiState>, Path(id): Path<String>) -> Result<Json<SessionState>, ApiError> {
    let entry = app.entry(&id)?;
    Ok(Json(entry.snapshot().as_ref().clone()))
}

async fn delete_session(State(app): State<ApiState>, Path(id): Path<String>) -> Result<StatusCode, ApiError> {
    let entry = app.entry(&id)?;
    let mut slot = entry.turn.lock().await;
    if slot.take().is_none() {
        return Err(ApiError::not_found(&id));
    }
    app.sessions.write().expect("session map").remove(&id);
    if let Some(store) = &app.store {
        store.delete(&id)?;
    }
    Ok(StatusCode::NO_CONTENT)
}

async fn get_catalog(State(app): State<ApiState>) -> Json<CatalogSummary> {
    Json(CatalogSummary::of(&app.concierge.bundle().catalog))
}
