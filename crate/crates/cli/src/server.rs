//! Local JSON game service.
//!
//! | method | path                              | body                      |
//! |--------|-----------------------------------|---------------------------|
//! | POST   | `/api/v1/sessions`                | [`CreateSession`]         |
//! | GET    | `/api/v1/sessions/{id}`           |                           |
//! | POST   | `/api/v1/sessions/{id}/snake-move`| `{"vertex": t}`           |
//! | POST   | `/api/v1/sessions/{id}/apple`     | `{"vertex": a}`           |
//! | GET    | `/api/v1/sessions/{id}/hint`      |                           |
//! | GET    | `/api/v1/sessions/{id}/trace`     |                           |
//!
//! The engine answers in the same request whenever it holds the turn.
//! Errors carry `{"error", "rule"}`: 409 for moves the rules forbid,
//! 404 for unknown sessions, 400 for malformed requests.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use axum::extract::{Path, State};
use axum::http::{HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use snakegraph::game::{Game, GameError, GameStatus, MoveKind, Role, Trace};
use snakegraph::graph::{io, Graph, GraphDoc};
use tower_http::cors::{AllowOrigin, Any, CorsLayer};

use crate::engine::{Choice, Engine, EngineError, DEFAULT_ENGINE_CEILING};

pub const API_PREFIX: &str = "/api/v1";

#[derive(Clone, Debug)]
pub struct ServerConfig {
    pub ceiling: usize,
    pub cors_origins: Vec<String>,
}

impl Default for ServerConfig {
    fn default() -> Self {
        ServerConfig {
            ceiling: DEFAULT_ENGINE_CEILING,
            cors_origins: vec!["http://localhost:5173".into(), "http://127.0.0.1:5173".into()],
        }
    }
}

pub struct Session {
    pub id: String,
    pub game: Game,
    pub human: Role,
    pub engine: Engine,
}

#[derive(Default)]
struct Store {
    sessions: Mutex<HashMap<String, Arc<Mutex<Session>>>>,
    next: AtomicU64,
}

#[derive(Clone)]
struct AppState {
    store: Arc<Store>,
    config: Arc<ServerConfig>,
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    rule: &'static str,
    message: String,
}

impl ApiError {
    fn bad_request(rule: &'static str, message: impl Into<String>) -> Self {
        ApiError {
            status: StatusCode::BAD_REQUEST,
            rule,
            message: message.into(),
        }
    }
}

impl From<GameError> for ApiError {
    fn from(e: GameError) -> Self {
        ApiError {
            status: StatusCode::CONFLICT,
            rule: e.rule(),
            message: e.to_string(),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (
            self.status,
            Json(json!({"error": self.message, "rule": self.rule})),
        )
            .into_response()
    }
}

/// Body of `POST /sessions`. `graph` is a graph document or edge-list text.
/// `spawn` is required when the human is the placer and refused otherwise.
#[derive(Debug, Deserialize)]
pub struct CreateSession {
    pub graph: Value,
    pub human: Role,
    #[serde(default)]
    pub spawn: Option<usize>,
    /// `"optimal"` (default) or a policy name for the engine's role.
    #[serde(default)]
    pub engine: Option<String>,
}

#[derive(Debug, Deserialize)]
pub struct VertexBody {
    pub vertex: usize,
}

#[derive(Debug, Serialize)]
pub struct LegalMove {
    pub vertex: usize,
    pub kind: MoveKind,
}

#[derive(Debug, Serialize)]
pub struct SessionView {
    pub id: String,
    pub graph: GraphDoc,
    pub human: Role,
    pub body: Vec<usize>,
    pub apple: Option<usize>,
    pub to_move: Option<Role>,
    pub status: GameStatus,
    pub legal_moves: Vec<LegalMove>,
    pub moves_played: usize,
    /// Moves the engine made while handling this request.
    pub engine_moves: Vec<Choice>,
}

fn view(s: &Session, engine_moves: Vec<Choice>) -> SessionView {
    let st = s.game.state();
    SessionView {
        id: s.id.clone(),
        graph: s.game.graph().to_doc(),
        human: s.human,
        body: st.body().to_vec(),
        apple: st.apple(),
        to_move: s.game.to_move(),
        status: s.game.status(),
        legal_moves: s
            .game
            .legal_moves()
            .into_iter()
            .map(|(vertex, kind)| LegalMove { vertex, kind })
            .collect(),
        moves_played: s.game.events().len(),
        engine_moves,
    }
}

fn other(r: Role) -> Role {
    match r {
        Role::Snake => Role::Placer,
        Role::Placer => Role::Snake,
    }
}

/// Lets the engine move until the human holds the turn or the game ends.
fn engine_reply(s: &mut Session) -> Result<Vec<Choice>, ApiError> {
    let mut out = Vec::new();
    while s.game.to_move() == Some(other(s.human)) {
        let c = s.engine.choose(&s.game).map_err(internal)?;
        match c.role {
            Role::Snake => {
                s.game.snake_move(c.vertex)?;
            }
            Role::Placer => s.game.place_apple(c.vertex)?,
        }
        out.push(c);
    }
    Ok(out)
}

fn internal(e: EngineError) -> ApiError {
    ApiError {
        status: StatusCode::INTERNAL_SERVER_ERROR,
        rule: "engine",
        message: e.to_string(),
    }
}

fn parse_graph(v: &Value) -> Result<Graph, ApiError> {
    let bad = |e: &dyn std::fmt::Display| ApiError::bad_request("graph", e.to_string());
    let labeled = match v {
        Value::String(text) => io::parse_any(text).map_err(|e| bad(&e))?,
        _ => {
            let doc: GraphDoc = serde_json::from_value(v.clone()).map_err(|e| bad(&e))?;
            Graph::from_doc(&doc).map_err(|e| bad(&e))?
        }
    };
    Ok(labeled.graph)
}

pub fn create_session(
    config: &ServerConfig,
    id: String,
    req: CreateSession,
) -> Result<(Session, Vec<Choice>), ApiError> {
    let g = parse_graph(&req.graph)?;
    snakegraph::game::check_board(&g).map_err(|e| ApiError::bad_request("graph", e.to_string()))?;
    let engine_role = other(req.human);
    let engine = Engine::new(&g, engine_role, req.engine.as_deref(), config.ceiling)
        .map_err(|e| ApiError::bad_request("engine", e.to_string()))?;
    let mut replies = Vec::new();
    let a0 = match (req.human, req.spawn) {
        (Role::Placer, Some(a0)) => a0,
        (Role::Placer, None) => {
            return Err(ApiError::bad_request(
                "spawn",
                "the placer must choose a spawn vertex",
            ))
        }
        (Role::Snake, Some(_)) => {
            return Err(ApiError::bad_request(
                "spawn",
                "the spawn vertex is the placer's choice",
            ))
        }
        (Role::Snake, None) => {
            let c = engine.spawn(&g);
            let a0 = c.vertex;
            replies.push(c);
            a0
        }
    };
    let game = Game::new(g, a0).map_err(|e| ApiError::bad_request(e.rule(), e.to_string()))?;
    let mut session = Session {
        id,
        game,
        human: req.human,
        engine,
    };
    replies.extend(engine_reply(&mut session)?);
    Ok((session, replies))
}

pub fn router(config: ServerConfig) -> Router {
    let origins: Vec<HeaderValue> = config
        .cors_origins
        .iter()
        .filter_map(|o| HeaderValue::from_str(o).ok())
        .collect();
    let cors = CorsLayer::new()
        .allow_origin(AllowOrigin::list(origins))
        .allow_methods(Any)
        .allow_headers(Any);
    let state = AppState {
        store: Arc::new(Store::default()),
        config: Arc::new(config),
    };
    Router::new()
        .route(&format!("{API_PREFIX}/sessions"), post(create))
        .route(&format!("{API_PREFIX}/sessions/{{id}}"), get(get_state))
        .route(
            &format!("{API_PREFIX}/sessions/{{id}}/snake-move"),
            post(snake_move),
        )
        .route(&format!("{API_PREFIX}/sessions/{{id}}/apple"), post(apple))
        .route(&format!("{API_PREFIX}/sessions/{{id}}/hint"), get(hint))
        .route(&format!("{API_PREFIX}/sessions/{{id}}/trace"), get(trace))
        .layer(cors)
        .with_state(state)
}

fn lookup(state: &AppState, id: &str) -> Result<Arc<Mutex<Session>>, ApiError> {
    state
        .store
        .sessions
        .lock()
        .expect("session map lock")
        .get(id)
        .cloned()
        .ok_or_else(|| ApiError {
            status: StatusCode::NOT_FOUND,
            rule: "session",
            message: format!("no session {id:?}"),
        })
}

/// Runs `f` on the session off the async workers; one call per session at a time.
async fn with_session<T, F>(state: &AppState, id: &str, f: F) -> Result<T, ApiError>
where
    T: Send + 'static,
    F: FnOnce(&mut Session) -> Result<T, ApiError> + Send + 'static,
{
    let session = lookup(state, id)?;
    tokio::task::spawn_blocking(move || f(&mut session.lock().expect("session lock")))
        .await
        .map_err(|e| ApiError {
            status: StatusCode::INTERNAL_SERVER_ERROR,
            rule: "engine",
            message: e.to_string(),
        })?
}

async fn create(
    State(state): State<AppState>,
    Json(req): Json<CreateSession>,
) -> Result<(StatusCode, Json<SessionView>), ApiError> {
    let id = format!("s{}", state.store.next.fetch_add(1, Ordering::Relaxed) + 1);
    let config = state.config.clone();
    let (session, replies) = tokio::task::spawn_blocking(move || create_session(&config, id, req))
        .await
        .map_err(|e| ApiError {
            status: StatusCode::INTERNAL_SERVER_ERROR,
            rule: "engine",
            message: e.to_string(),
        })??;
    let v = view(&session, replies);
    state
        .store
        .sessions
        .lock()
        .expect("session map lock")
        .insert(session.id.clone(), Arc::new(Mutex::new(session)));
    Ok((StatusCode::CREATED, Json(v)))
}

async fn get_state(
    State(state): State<AppState>,
    Path(id): Path<String>,
) -> Result<Json<SessionView>, ApiError> {
    with_session(&state, &id, |s| Ok(Json(view(s, Vec::new())))).await
}

fn human_turn(s: &Session, role: Role) -> Result<(), ApiError> {
    if s.human != role {
        return Err(ApiError {
            status: StatusCode::CONFLICT,
            rule: "role",
            message: format!(
                "the engine plays the {}",
                if role == Role::Snake { "snake" } else { "placer" }
            ),
        });
    }
    Ok(())
}

async fn snake_move(
    State(state): State<AppState>,
    Path(id): Path<String>,
    Json(body): Json<VertexBody>,
) -> Result<Json<SessionView>, ApiError> {
    with_session(&state, &id, move |s| {
        human_turn(s, Role::Snake)?;
        s.game.snake_move(body.vertex)?;
        let replies = engine_reply(s)?;
        Ok(Json(view(s, replies)))
    })
    .await
}

async fn apple(
    State(state): State<AppState>,
    Path(id): Path<String>,
    Json(body): Json<VertexBody>,
) -> Result<Json<SessionView>, ApiError> {
    with_session(&state, &id, move |s| {
        human_turn(s, Role::Placer)?;
        s.game.place_apple(body.vertex)?;
        let replies = engine_reply(s)?;
        Ok(Json(view(s, replies)))
    })
    .await
}

async fn hint(State(state): State<AppState>, Path(id): Path<String>) -> Result<Json<Choice>, ApiError> {
    with_session(&state, &id, |s| {
        if s.game.to_move().is_none() {
            return Err(GameError::GameOver.into());
        }
        s.engine.hint(&s.game).map(Json).map_err(internal)
    })
    .await
}

async fn trace(State(state): State<AppState>, Path(id): Path<String>) -> Result<Json<Trace>, ApiError> {
    with_session(&state, &id, |s| Ok(Json(s.game.trace()))).await
}

pub async fn serve(addr: &str, config: ServerConfig) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!("listening on http://{}{API_PREFIX}", listener.local_addr()?);
    axum::serve(listener, router(config)).await
}
