//! HTTP API for live negotiations between a human and the agent.
//!
//! Every mutation is appended to the session's event log before the response
//! is sent. While a session is open no response carries the agent's values,
//! belief or reasoning. There is no authentication: run it on a trusted network.

mod store;

use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::{Arc, RwLock};

use axum::extract::rejection::JsonRejection;
use axum::extract::{Path, State};
use axum::http::{header, HeaderValue, Method, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;
use tower_http::cors::{AllowOrigin, CorsLayer};

use crate::compiler::{default_negotiation_demo, AgentMethod, AnnotatedEpisode};
use crate::gateway::CompletionBackend;
use crate::negotiation::{
    agent_turn, fallback_action, generate_contexts, Allocation, ItemValues, NegotiationAction, NegotiationContext,
    NegotiationError, Outcome, Pot, ValueBelief,
};

pub use store::{now_ms, EventStore, Rating, SessionEvent, SessionRecord, AGENT, AGENT_NAME, HUMAN, HUMAN_NAME};

/// Largest count of one item type accepted in an explicit context.
pub const MAX_ITEM_COUNT: u32 = 10;

#[derive(Debug, Error)]
pub enum ServiceError {
    #[error("{0}")]
    BadRequest(String),
    #[error("no session {0}")]
    NotFound(String),
    #[error("{0}")]
    Conflict(String),
    #[error("{0}")]
    Unprocessable(String),
    #[error("{0}")]
    Internal(String),
}

impl From<std::io::Error> for ServiceError {
    fn from(e: std::io::Error) -> Self {
        ServiceError::Internal(e.to_string())
    }
}

impl From<NegotiationError> for ServiceError {
    fn from(e: NegotiationError) -> Self {
        match e {
            NegotiationError::OverAllocation(_) => ServiceError::Unprocessable(e.to_string()),
            _ => ServiceError::Conflict(e.to_string()),
        }
    }
}

impl From<JsonRejection> for ServiceError {
    fn from(e: JsonRejection) -> Self {
        ServiceError::BadRequest(e.body_text())
    }
}

impl ServiceError {
    pub fn status(&self) -> StatusCode {
        match self {
            ServiceError::BadRequest(_) => StatusCode::BAD_REQUEST,
            ServiceError::NotFound(_) => StatusCode::NOT_FOUND,
            ServiceError::Conflict(_) => StatusCode::CONFLICT,
            ServiceError::Unprocessable(_) => StatusCode::UNPROCESSABLE_ENTITY,
            ServiceError::Internal(_) => StatusCode::INTERNAL_SERVER_ERROR,
        }
    }
}

impl IntoResponse for ServiceError {
    fn into_response(self) -> Response {
        if let ServiceError::Internal(msg) = &self {
            tracing::error!(error = %msg, "session service failure");
        }
        (self.status(), Json(json!({ "error": self.to_string() }))).into_response()
    }
}

#[derive(Debug, Clone, Default)]
pub struct ServiceConfig {
    pub data_dir: PathBuf,
    /// Origins allowed by CORS; empty allows any origin.
    pub cors_origins: Vec<String>,
}

/// Where a session's pot and values come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ContextSpec {
    Explicit { pot: Pot, agent_values: ItemValues, human_values: ItemValues },
    Seed { seed: u64 },
}

impl ContextSpec {
    pub fn resolve(&self) -> Result<NegotiationContext, ServiceError> {
        let ctx = match *self {
            ContextSpec::Seed { seed } => generate_contexts(seed, 1)[0],
            ContextSpec::Explicit { pot, agent_values, human_values } => {
                NegotiationContext { pot, values_a: agent_values, values_b: human_values }
            }
        };
        if ctx.pot.is_empty() {
            return Err(ServiceError::BadRequest("the pot is empty".into()));
        }
        if ctx.pot.0.iter().any(|&c| c > MAX_ITEM_COUNT) {
            return Err(ServiceError::BadRequest(format!("at most {MAX_ITEM_COUNT} copies of an item")));
        }
        for (who, values) in [("agent", ctx.values_a), ("human", ctx.values_b)] {
            if values.pot_value(&ctx.pot) == 0 {
                return Err(ServiceError::BadRequest(format!("the {who} values nothing in the pot")));
            }
        }
        Ok(ctx)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CreateSession {
    /// A random seed is drawn when absent.
    #[serde(default)]
    pub context: Option<ContextSpec>,
    #[serde(default)]
    pub method: AgentMethod,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionCreated {
    pub id: String,
    pub method: AgentMethod,
    pub pot: Pot,
    pub human_values: ItemValues,
    pub human_name: String,
    pub agent_name: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlayerView {
    pub name: String,
    /// Withheld for the agent while the session is open.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<ItemValues>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OfferView {
    /// `human` or `agent`.
    pub by: String,
    /// Items the proposer asks for.
    pub allocation: Allocation,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Rewards {
    pub human: u32,
    pub agent: u32,
}

/// Session state as clients see it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionView {
    pub id: String,
    pub method: AgentMethod,
    pub open: bool,
    pub pot: Pot,
    pub human: PlayerView,
    pub agent: PlayerView,
    pub history: Vec<OfferView>,
    /// `human` or `agent` while open.
    pub turn: Option<String>,
    pub offers_remaining: usize,
    pub outcome: Outcome,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rewards: Option<Rewards>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub agent_belief: Option<ValueBelief>,
    pub rating: Option<Rating>,
}

fn role(player: usize) -> String {
    if player == HUMAN { "human" } else { "agent" }.to_string()
}

impl SessionView {
    pub fn of(r: &SessionRecord) -> Self {
        let s = &r.session;
        let closed = !s.is_open();
        let rewards = s.rewards();
        Self {
            id: r.id.clone(),
            method: r.method,
            open: !closed,
            pot: s.pot,
            human: PlayerView { name: s.names[HUMAN].clone(), values: Some(s.values[HUMAN]) },
            agent: PlayerView { name: s.names[AGENT].clone(), values: closed.then_some(s.values[AGENT]) },
            history: s.history.iter().map(|o| OfferView { by: role(o.actor), allocation: o.allocation }).collect(),
            turn: s.is_open().then(|| role(s.turn)),
            offers_remaining: s.offers_remaining(),
            outcome: s.outcome.clone(),
            rewards: closed.then_some(Rewards { human: rewards[HUMAN], agent: rewards[AGENT] }),
            agent_belief: if closed { r.agent_belief } else { None },
            rating: r.rating,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActionReply {
    pub human_action: NegotiationAction,
    pub agent_reply: Option<NegotiationAction>,
    pub session_state: SessionView,
}

/// Lock for writers; the record itself is readable while the agent thinks.
struct Slot {
    writer: tokio::sync::Mutex<()>,
    record: RwLock<SessionRecord>,
}

impl Slot {
    fn snapshot(&self) -> SessionRecord {
        self.record.read().expect("session record poisoned").clone()
    }
}

/// Shared state behind the router.
pub struct SessionService {
    store: EventStore,
    backend: Arc<dyn CompletionBackend>,
    demos: Arc<Vec<AnnotatedEpisode>>,
    sessions: RwLock<HashMap<String, Arc<Slot>>>,
}

impl SessionService {
    /// Opens the data directory and restores every logged session.
    pub fn open(data_dir: impl Into<PathBuf>, backend: Arc<dyn CompletionBackend>) -> Result<Self, ServiceError> {
        let store = EventStore::open(data_dir)?;
        let sessions = store
            .load_all()?
            .into_iter()
            .map(|r| (r.id.clone(), Arc::new(Slot { writer: Default::default(), record: RwLock::new(r) })))
            .collect();
        Ok(Self { store, backend, demos: Arc::new(vec![default_negotiation_demo()]), sessions: RwLock::new(sessions) })
    }

    pub fn len(&self) -> usize {
        self.sessions.read().expect("session table poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn slot(&self, id: &str) -> Result<Arc<Slot>, ServiceError> {
        self.sessions.read().expect("session table poisoned").get(id).cloned().ok_or_else(|| ServiceError::NotFound(id.into()))
    }

    /// Validates `event` against the record, logs it, then publishes the new record.
    fn commit(&self, slot: &Slot, event: SessionEvent) -> Result<SessionRecord, ServiceError> {
        let mut next = slot.snapshot();
        next.apply(&event)?;
        self.store.append(&next.id, &event)?;
        *slot.record.write().expect("session record poisoned") = next.clone();
        Ok(next)
    }

    pub fn create(&self, req: &CreateSession) -> Result<SessionCreated, ServiceError> {
        let spec = req.context.unwrap_or_else(|| ContextSpec::Seed { seed: rand::random() });
        let context = spec.resolve()?;
        let id = format!("{:032x}", rand::random::<u128>());
        let event = SessionEvent::Created {
            id: id.clone(),
            ts: now_ms(),
            method: req.method,
            backend: self.backend.id(),
            context,
        };
        let record = SessionRecord::from_created(&event)?;
        self.store.append(&id, &event)?;
        let slot = Arc::new(Slot { writer: Default::default(), record: RwLock::new(record) });
        self.sessions.write().expect("session table poisoned").insert(id.clone(), slot);
        tracing::info!(session = %id, method = req.method.name(), "session created");
        Ok(SessionCreated {
            id,
            method: req.method,
            pot: context.pot,
            human_values: context.values_b,
            human_name: HUMAN_NAME.into(),
            agent_name: AGENT_NAME.into(),
        })
    }

    pub fn view(&self, id: &str) -> Result<SessionView, ServiceError> {
        Ok(SessionView::of(&self.slot(id)?.snapshot()))
    }

    /// The event log as JSON lines, with agent-private fields removed while open.
    pub fn transcript(&self, id: &str) -> Result<String, ServiceError> {
        let open = self.slot(id)?.snapshot().session.is_open();
        let mut out = String::new();
        for e in self.store.events(id)? {
            let line = if open { e.redacted() } else { serde_json::to_value(&e).expect("events serialize") };
            out.push_str(&line.to_string());
            out.push('\n');
        }
        Ok(out)
    }

    /// Applies the human's move, then lets the agent answer if the game goes on.
    pub async fn act(&self, id: &str, action: NegotiationAction) -> Result<ActionReply, ServiceError> {
        let slot = self.slot(id)?;
        let _writer = slot.writer.lock().await;
        let mut record = self.commit(&slot, SessionEvent::HumanAction { ts: now_ms(), action })?;
        let mut agent_reply = None;
        if record.session.is_open() && record.session.turn == AGENT {
            let event = self.agent_move(&record).await?;
            if let SessionEvent::AgentAction { action, .. } = &event {
                agent_reply = Some(*action);
            }
            record = self.commit(&slot, event)?;
        }
        Ok(ActionReply { human_action: action, agent_reply, session_state: SessionView::of(&record) })
    }

    /// Runs the agent off the async runtime. A failed completion falls back to the scripted policy.
    async fn agent_move(&self, record: &SessionRecord) -> Result<SessionEvent, ServiceError> {
        let session = record.session.clone();
        let (backend, demos, method) = (self.backend.clone(), self.demos.clone(), record.method);
        let turn = tokio::task::spawn_blocking(move || {
            let result = agent_turn(&session, AGENT, &ValueBelief::default(), &demos, method, backend.as_ref());
            (session, result)
        })
        .await
        .map_err(|e| ServiceError::Internal(e.to_string()))?;
        let event = match turn {
            (_, Ok(t)) => {
                SessionEvent::AgentAction { ts: now_ms(), action: t.action, belief: t.belief, fallback: t.fallback, response: t.response }
            }
            (session, Err(e)) => {
                tracing::warn!(session = %record.id, error = %e, "agent completion failed; using fallback");
                let belief = session
                    .history
                    .iter()
                    .filter(|o| o.actor == HUMAN)
                    .fold(ValueBelief::default(), |b, o| b.update(&o.allocation, &session.pot));
                SessionEvent::AgentAction {
                    ts: now_ms(),
                    action: fallback_action(&session, AGENT),
                    belief,
                    fallback: Some(format!("completion failed: {e}")),
                    response: String::new(),
                }
            }
        };
        Ok(event)
    }

    pub async fn rate(&self, id: &str, rating: Rating) -> Result<SessionView, ServiceError> {
        let slot = self.slot(id)?;
        let _writer = slot.writer.lock().await;
        let record = self.commit(&slot, SessionEvent::Rated { ts: now_ms(), rating })?;
        Ok(SessionView::of(&record))
    }
}

type Shared = Arc<SessionService>;

async fn create_session(
    State(svc): State<Shared>,
    body: Result<Json<CreateSession>, JsonRejection>,
) -> Result<(StatusCode, Json<SessionCreated>), ServiceError> {
    let Json(req) = body?;
    Ok((StatusCode::CREATED, Json(svc.create(&req)?)))
}

async fn get_session(State(svc): State<Shared>, Path(id): Path<String>) -> Result<Json<SessionView>, ServiceError> {
    Ok(Json(svc.view(&id)?))
}

async fn get_transcript(State(svc): State<Shared>, Path(id): Path<String>) -> Result<Response, ServiceError> {
    let body = svc.transcript(&id)?;
    Ok(([(header::CONTENT_TYPE, "application/x-ndjson")], body).into_response())
}

async fn post_action(
    State(svc): State<Shared>,
    Path(id): Path<String>,
    body: Result<Json<NegotiationAction>, JsonRejection>,
) -> Result<Json<ActionReply>, ServiceError> {
    svc.slot(&id)?;
    let Json(action) = body?;
    Ok(Json(svc.act(&id, action).await?))
}

async fn post_rating(
    State(svc): State<Shared>,
    Path(id): Path<String>,
    body: Result<Json<Rating>, JsonRejection>,
) -> Result<Json<SessionView>, ServiceError> {
    svc.slot(&id)?;
    let Json(rating) = body?;
    Ok(Json(svc.rate(&id, rating).await?))
}

fn cors(origins: &[String]) -> Result<CorsLayer, ServiceError> {
    let allow = if origins.is_empty() {
        AllowOrigin::any()
    } else {
        let parsed: Result<Vec<HeaderValue>, _> = origins.iter().map(|o| o.parse::<HeaderValue>()).collect();
        AllowOrigin::list(parsed.map_err(|e| ServiceError::BadRequest(format!("bad CORS origin: {e}")))?)
    };
    Ok(CorsLayer::new().allow_origin(allow).allow_methods([Method::GET, Method::POST]).allow_headers([header::CONTENT_TYPE]))
}

pub fn router(service: Arc<SessionService>, config: &ServiceConfig) -> Result<Router, ServiceError> {
    Ok(Router::new()
        .route("/sessions", post(create_session))
        .route("/sessions/{id}", get(get_session))
        .route("/sessions/{id}/action", post(post_action))
        .route("/sessions/{id}/transcript", get(get_transcript))
        .route("/sessions/{id}/rating", post(post_rating))
        .layer(cors(&config.cors_origins)?)
        .with_state(service))
}

/// Serves until Ctrl-C.
pub async fn serve(
    listener: tokio::net::TcpListener,
    config: ServiceConfig,
    backend: Arc<dyn CompletionBackend>,
) -> Result<(), ServiceError> {
    let service = Arc::new(SessionService::open(&config.data_dir, backend)?);
    tracing::info!(addr = ?listener.local_addr().ok(), restored = service.len(), "session service listening");
    let app = router(service, &config)?;
    axum::serve(listener, app)
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    Ok(())
}
