//! HTTP session API over the simulation engine.
//!
//! Sessions live in memory only. Each session has its own lock: occurrence
//! and undo posts are applied one at a time, reads see a consistent
//! snapshot, and sessions never share mutable state.
//!
//! | Method | Path                               | Body                |
//! |--------|------------------------------------|---------------------|
//! | GET    | `/api/health`                      |                     |
//! | POST   | `/api/sessions`                    | scenario document   |
//! | POST   | `/api/sessions/{id}/occurrences`   | one occurrence      |
//! | POST   | `/api/sessions/{id}/undo`          |                     |
//! | GET    | `/api/sessions/{id}/state`         |                     |
//! | GET    | `/api/sessions/{id}/history`       |                     |
//! | GET    | `/api/scenarios`                   |                     |
//! | GET    | `/api/scenarios/{name}`            |                     |

use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::{Arc, Mutex, RwLock};
use std::time::{Duration, Instant, SystemTime};

use axum::extract::{Path, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use occsim_core::{
    parse_scenario, AgentLimit, Diagnostic, EmotionalMap, HistoryEntry, Occurrence, ReactionSet,
    Session, StateDiff,
};
use serde::Serialize;
use serde_json::json;
use tokio::net::TcpListener;
use tower_http::services::ServeDir;

pub const DEFAULT_IDLE_TIMEOUT: Duration = Duration::from_secs(24 * 60 * 60);

#[derive(Debug, Clone)]
pub struct ServiceConfig {
    /// Sessions untouched for this long are dropped.
    pub idle_timeout: Duration,
    pub agent_limit: AgentLimit,
    pub reactions: Arc<ReactionSet>,
    /// Scenario documents listed under `/api/scenarios`.
    pub scenario_dir: Option<PathBuf>,
    /// UI bundle served at `/`.
    pub static_dir: Option<PathBuf>,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        ServiceConfig {
            idle_timeout: DEFAULT_IDLE_TIMEOUT,
            agent_limit: AgentLimit::Strict,
            reactions: ReactionSet::standard(),
            scenario_dir: None,
            static_dir: None,
        }
    }
}

/// A live session plus its bookkeeping.
pub struct SessionHandle {
    pub id: String,
    pub created_at: SystemTime,
    last_used: Mutex<Instant>,
    session: RwLock<Session>,
}

impl SessionHandle {
    fn touch(&self) {
        *self.last_used.lock().unwrap_or_else(|e| e.into_inner()) = Instant::now();
    }

    fn idle_for(&self, now: Instant) -> Duration {
        now.saturating_duration_since(*self.last_used.lock().unwrap_or_else(|e| e.into_inner()))
    }
}

#[derive(Clone)]
pub struct AppState {
    config: Arc<ServiceConfig>,
    sessions: Arc<RwLock<HashMap<String, Arc<SessionHandle>>>>,
}

impl AppState {
    pub fn new(config: ServiceConfig) -> AppState {
        AppState {
            config: Arc::new(config),
            sessions: Arc::default(),
        }
    }

    pub fn session_count(&self) -> usize {
        self.sessions.read().unwrap_or_else(|e| e.into_inner()).len()
    }

    fn insert(&self, session: Session) -> Arc<SessionHandle> {
        self.sweep();
        let handle = Arc::new(SessionHandle {
            id: uuid::Uuid::new_v4().simple().to_string(),
            created_at: SystemTime::now(),
            last_used: Mutex::new(Instant::now()),
            session: RwLock::new(session),
        });
        self.sessions
            .write()
            .unwrap_or_else(|e| e.into_inner())
            .insert(handle.id.clone(), handle.clone());
        handle
    }

    fn lookup(&self, id: &str) -> Result<Arc<SessionHandle>, ApiError> {
        let found = self
            .sessions
            .read()
            .unwrap_or_else(|e| e.into_inner())
            .get(id)
            .cloned();
        match found {
            Some(h) if h.idle_for(Instant::now()) < self.config.idle_timeout => {
                h.touch();
                Ok(h)
            }
            Some(_) => {
                self.sweep();
                Err(ApiError::unknown_session(id))
            }
            None => Err(ApiError::unknown_session(id)),
        }
    }

    /// Drops sessions idle longer than the configured timeout.
    pub fn sweep(&self) {
        let now = Instant::now();
        let ttl = self.config.idle_timeout;
        self.sessions
            .write()
            .unwrap_or_else(|e| e.into_inner())
            .retain(|_, h| h.idle_for(now) < ttl);
    }
}

pub fn router(state: AppState) -> Router {
    let static_dir = state.config.static_dir.clone();
    let api = Router::new()
        .route("/api/health", get(health))
        .route("/api/sessions", post(create_session))
        .route("/api/sessions/{id}/occurrences", post(post_occurrence))
        .route("/api/sessions/{id}/undo", post(undo))
        .route("/api/sessions/{id}/state", get(get_state))
        .route("/api/sessions/{id}/history", get(get_history))
        .route("/api/scenarios", get(list_scenarios))
        .route("/api/scenarios/{name}", get(get_scenario))
        .with_state(state);
    match static_dir {
        Some(dir) if dir.is_dir() => api.fallback_service(ServeDir::new(dir)),
        _ => api,
    }
}

/// Serves until the process is stopped.
pub async fn serve(listener: TcpListener, config: ServiceConfig) -> std::io::Result<()> {
    let app = router(AppState::new(config));
    axum::serve(listener, app).await
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    body: serde_json::Value,
}

impl ApiError {
    fn new(status: StatusCode, code: &str, message: impl Into<String>) -> ApiError {
        ApiError {
            status,
            body: json!({ "error": { "code": code, "message": message.into() } }),
        }
    }

    fn diagnostics(diagnostics: Vec<Diagnostic>) -> ApiError {
        ApiError {
            status: StatusCode::BAD_REQUEST,
            body: json!({ "diagnostics": diagnostics }),
        }
    }

    fn unknown_session(id: &str) -> ApiError {
        ApiError::new(StatusCode::NOT_FOUND, "UNKNOWN_SESSION", format!("no session `{id}`"))
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}

#[derive(Serialize)]
struct Created {
    session_id: String,
    emotional_map: EmotionalMap,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    warnings: Vec<Diagnostic>,
}

#[derive(Serialize)]
struct Applied {
    state_diff: StateDiff,
    emotional_map: EmotionalMap,
}

async fn health() -> Json<serde_json::Value> {
    Json(json!({ "status": "ok" }))
}

async fn create_session(State(app): State<AppState>, body: String) -> Result<Response, ApiError> {
    let parsed = parse_scenario(&body, app.config.agent_limit).map_err(ApiError::diagnostics)?;
    let session = Session::with_reactions(Arc::new(parsed.value), app.config.reactions.clone());
    let emotional_map = session.emotional_map();
    let handle = app.insert(session);
    tracing::debug!(session = %handle.id, "session created");
    Ok((
        StatusCode::CREATED,
        Json(Created {
            session_id: handle.id.clone(),
            emotional_map,
            warnings: parsed.warnings,
        }),
    )
        .into_response())
}

async fn post_occurrence(
    State(app): State<AppState>,
    Path(id): Path<String>,
    body: String,
) -> Result<Json<Applied>, ApiError> {
    let handle = app.lookup(&id)?;
    let occurrence: Occurrence = serde_json::from_str(&body).map_err(|e| {
        ApiError::diagnostics(vec![Diagnostic::error(
            e.line().max(1),
            e.column().max(1),
            "BAD_OCCURRENCE",
            e.to_string(),
        )])
    })?;
    let mut session = handle.session.write().unwrap_or_else(|e| e.into_inner());
    let state_diff = session
        .apply(occurrence)
        .map_err(|e| ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, e.code(), e.to_string()))?;
    Ok(Json(Applied {
        state_diff,
        emotional_map: session.emotional_map(),
    }))
}

async fn undo(State(app): State<AppState>, Path(id): Path<String>) -> Result<Json<Applied>, ApiError> {
    let handle = app.lookup(&id)?;
    let mut session = handle.session.write().unwrap_or_else(|e| e.into_inner());
    let state_diff = session
        .undo()
        .map_err(|e| ApiError::new(StatusCode::CONFLICT, e.code(), e.to_string()))?;
    Ok(Json(Applied {
        state_diff,
        emotional_map: session.emotional_map(),
    }))
}

async fn get_state(State(app): State<AppState>, Path(id): Path<String>) -> Result<Json<EmotionalMap>, ApiError> {
    let handle = app.lookup(&id)?;
    let session = handle.session.read().unwrap_or_else(|e| e.into_inner());
    Ok(Json(session.emotional_map()))
}

async fn get_history(
    State(app): State<AppState>,
    Path(id): Path<String>,
) -> Result<Json<Vec<HistoryEntry>>, ApiError> {
    let handle = app.lookup(&id)?;
    let session = handle.session.read().unwrap_or_else(|e| e.into_inner());
    Ok(Json(session.history().to_vec()))
}

async fn list_scenarios(State(app): State<AppState>) -> Result<Json<Vec<String>>, ApiError> {
    let Some(dir) = &app.config.scenario_dir else {
        return Ok(Json(Vec::new()));
    };
    let entries = std::fs::read_dir(dir)
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "IO", e.to_string()))?;
    let mut names: Vec<String> = entries
        .filter_map(Result::ok)
        .filter_map(|e| {
            let path = e.path();
            (path.extension()? == "json")
                .then(|| path.file_stem()?.to_str().map(str::to_owned))
                .flatten()
        })
        .filter(|n| occsim_core::model::is_valid_token(n))
        .collect();
    names.sort();
    Ok(Json(names))
}

async fn get_scenario(State(app): State<AppState>, Path(name): Path<String>) -> Result<Response, ApiError> {
    let not_found = || ApiError::new(StatusCode::NOT_FOUND, "UNKNOWN_SCENARIO", format!("no scenario `{name}`"));
    let dir = app.config.scenario_dir.as_ref().ok_or_else(not_found)?;
    if !occsim_core::model::is_valid_token(&name) {
        return Err(not_found());
    }
    let text = std::fs::read_to_string(dir.join(format!("{name}.json"))).map_err(|_| not_found())?;
    Ok(([(header::CONTENT_TYPE, "application/json")], text).into_response())
}
