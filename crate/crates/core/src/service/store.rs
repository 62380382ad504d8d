//! Event-sourced session records: one JSON-lines log per session, folded
//! into an in-memory record on load and after every append.

use std::fs::OpenOptions;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::compiler::AgentMethod;
use crate::negotiation::{NegotiationAction, NegotiationContext, NegotiationSession, SessionConfig, ValueBelief};

use super::ServiceError;

/// Player index of the agent; the agent speaks as `AGENT_NAME`.
pub const AGENT: usize = 0;
/// Player index of the human, who moves first.
pub const HUMAN: usize = 1;
pub const AGENT_NAME: &str = "Alice";
pub const HUMAN_NAME: &str = "Bob";

/// Post-game survey answers, each on a 1 to 7 scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rating {
    pub humanlike: u8,
    pub reasonable: u8,
    pub aggressive: u8,
    pub compromising: u8,
}

impl Rating {
    pub fn validate(&self) -> Result<(), ServiceError> {
        let fields = [
            ("humanlike", self.humanlike),
            ("reasonable", self.reasonable),
            ("aggressive", self.aggressive),
            ("compromising", self.compromising),
        ];
        match fields.iter().find(|(_, v)| !(1..=7).contains(v)) {
            Some((name, v)) => Err(ServiceError::Unprocessable(format!("{name} must be 1..7, got {v}"))),
            None => Ok(()),
        }
    }
}

/// One line of a session log.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum SessionEvent {
    Created {
        id: String,
        ts: u64,
        method: AgentMethod,
        backend: String,
        /// `values_a` are the agent's values, `values_b` the human's.
        context: NegotiationContext,
    },
    HumanAction {
        ts: u64,
        action: NegotiationAction,
    },
    AgentAction {
        ts: u64,
        action: NegotiationAction,
        belief: ValueBelief,
        /// Why the fallback policy chose the move, when it did.
        fallback: Option<String>,
        response: String,
    },
    Rated {
        ts: u64,
        rating: Rating,
    },
}

impl SessionEvent {
    /// The event with the agent's private values and reasoning removed.
    pub fn redacted(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("events serialize");
        match self {
            SessionEvent::Created { .. } => {
                v["context"].as_object_mut().expect("context object").remove("values_a");
            }
            SessionEvent::AgentAction { .. } => {
                let obj = v.as_object_mut().expect("event object");
                for key in ["belief", "fallback", "response"] {
                    obj.remove(key);
                }
            }
            _ => {}
        }
        v
    }
}

pub fn now_ms() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_millis() as u64)
}

/// Everything known about one session, rebuilt from its events.
#[derive(Debug, Clone, PartialEq)]
pub struct SessionRecord {
    pub id: String,
    pub created_ms: u64,
    pub method: AgentMethod,
    pub backend: String,
    pub context: NegotiationContext,
    pub session: NegotiationSession,
    /// Belief after the agent's latest turn.
    pub agent_belief: Option<ValueBelief>,
    pub fallbacks: usize,
    pub rating: Option<Rating>,
}

impl SessionRecord {
    pub fn from_created(event: &SessionEvent) -> Result<Self, ServiceError> {
        let SessionEvent::Created { id, ts, method, backend, context } = event else {
            return Err(ServiceError::Internal("session log does not start with a created event".into()));
        };
        let session = NegotiationSession::new(
            context.pot,
            [context.values_a, context.values_b],
            [AGENT_NAME, HUMAN_NAME],
            SessionConfig { max_offers: 6, first_mover: HUMAN },
        );
        Ok(Self {
            id: id.clone(),
            created_ms: *ts,
            method: *method,
            backend: backend.clone(),
            context: *context,
            session,
            agent_belief: None,
            fallbacks: 0,
            rating: None,
        })
    }

    /// Folds one later event into the record, enforcing the same rules as the live handlers.
    pub fn apply(&mut self, event: &SessionEvent) -> Result<(), ServiceError> {
        match event {
            SessionEvent::Created { .. } => return Err(ServiceError::Internal("duplicate created event".into())),
            SessionEvent::HumanAction { action, .. } => self.session.apply_mut(HUMAN, *action)?,
            SessionEvent::AgentAction { action, belief, fallback, .. } => {
                self.session.apply_mut(AGENT, *action)?;
                self.agent_belief = Some(*belief);
                self.fallbacks += usize::from(fallback.is_some());
            }
            SessionEvent::Rated { rating, .. } => {
                if self.session.is_open() {
                    return Err(ServiceError::Conflict("the session is still open".into()));
                }
                if self.rating.is_some() {
                    return Err(ServiceError::Conflict("the session is already rated".into()));
                }
                rating.validate()?;
                self.rating = Some(*rating);
            }
        }
        Ok(())
    }
}

/// Directory of `<id>.jsonl` session logs.
#[derive(Debug, Clone)]
pub struct EventStore {
    dir: PathBuf,
}

impl EventStore {
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self, ServiceError> {
        let dir = dir.into();
        std::fs::create_dir_all(&dir)?;
        Ok(Self { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, id: &str) -> PathBuf {
        self.dir.join(format!("{id}.jsonl"))
    }

    /// Appends one event and flushes it to disk.
    pub fn append(&self, id: &str, event: &SessionEvent) -> Result<(), ServiceError> {
        let mut line = serde_json::to_string(event).map_err(|e| ServiceError::Internal(e.to_string()))?;
        line.push('\n');
        let mut f = OpenOptions::new().create(true).append(true).open(self.path(id))?;
        f.write_all(line.as_bytes())?;
        f.sync_data()?;
        Ok(())
    }

    pub fn events(&self, id: &str) -> Result<Vec<SessionEvent>, ServiceError> {
        let text = std::fs::read_to_string(self.path(id))?;
        text.lines()
            .filter(|l| !l.trim().is_empty())
            .enumerate()
            .map(|(i, l)| {
                serde_json::from_str(l).map_err(|e| ServiceError::Internal(format!("{id} line {}: {e}", i + 1)))
            })
            .collect()
    }

    pub fn load(&self, id: &str) -> Result<SessionRecord, ServiceError> {
        let events = self.events(id)?;
        let first = events.first().ok_or_else(|| ServiceError::Internal(format!("{id}: empty log")))?;
        let mut record = SessionRecord::from_created(first)?;
        for e in &events[1..] {
            record.apply(e)?;
        }
        Ok(record)
    }

    /// Every session log in the directory.
    pub fn load_all(&self) -> Result<Vec<SessionRecord>, ServiceError> {
        let mut out = Vec::new();
        for entry in std::fs::read_dir(&self.dir)? {
            let path = entry?.path();
            if path.extension().is_some_and(|e| e == "jsonl") {
                if let Some(id) = path.file_stem().and_then(|s| s.to_str()) {
                    out.push(self.load(id)?);
                }
            }
        }
        out.sort_by(|a, b| a.created_ms.cmp(&b.created_ms).then_with(|| a.id.cmp(&b.id)));
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::negotiation::{ItemValues, Outcome, Pot};

    fn created() -> SessionEvent {
        SessionEvent::Created {
            id: "abc".into(),
            ts: 1,
            method: AgentMethod::Strategic,
            backend: "scripted".into(),
            context: NegotiationContext {
                pot: Pot::new(1, 4, 1),
                values_a: ItemValues::new(4, 1, 2),
                values_b: ItemValues::new(0, 2, 4),
            },
        }
    }

    #[test]
    fn log_round_trips_and_folds() {
        let dir = tempfile::tempdir().unwrap();
        let store = EventStore::open(dir.path()).unwrap();
        let events = [
            created(),
            SessionEvent::HumanAction { ts: 2, action: NegotiationAction::propose(0, 3, 1) },
            SessionEvent::AgentAction {
                ts: 3,
                action: NegotiationAction::Accept,
                belief: ValueBelief::default(),
                fallback: None,
                response: "Alice:accept".into(),
            },
            SessionEvent::Rated { ts: 4, rating: Rating { humanlike: 7, reasonable: 6, aggressive: 2, compromising: 5 } },
        ];
        for e in &events {
            store.append("abc", e).unwrap();
        }
        assert_eq!(store.events("abc").unwrap(), events);
        let record = store.load("abc").unwrap();
        assert!(matches!(record.session.outcome, Outcome::Accepted { rewards: [5, 10], .. }));
        assert_eq!(record.rating.map(|r| r.humanlike), Some(7));
        assert_eq!(store.load_all().unwrap().len(), 1);
    }

    #[test]
    fn redaction_drops_agent_private_fields() {
        let v = created().redacted();
        assert!(v["context"].get("values_a").is_none());
        assert!(v["context"].get("values_b").is_some());
        let agent = SessionEvent::AgentAction {
            ts: 3,
            action: NegotiationAction::Accept,
            belief: ValueBelief::default(),
            fallback: None,
            response: "books:4".into(),
        };
        let v = agent.redacted();
        assert!(v.get("belief").is_none() && v.get("response").is_none());
        assert_eq!(v["action"]["type"], "accept");
    }

    #[test]
    fn rating_rules() {
        let mut r = SessionRecord::from_created(&created()).unwrap();
        let rated = SessionEvent::Rated { ts: 2, rating: Rating { humanlike: 1, reasonable: 1, aggressive: 1, compromising: 1 } };
        assert!(matches!(r.apply(&rated), Err(ServiceError::Conflict(_))));
        r.apply(&SessionEvent::HumanAction { ts: 2, action: NegotiationAction::Reject }).unwrap();
        r.apply(&rated).unwrap();
        assert!(matches!(r.apply(&rated), Err(ServiceError::Conflict(_))));
        let bad = Rating { humanlike: 8, reasonable: 1, aggressive: 1, compromising: 1 };
        assert!(matches!(bad.validate(), Err(ServiceError::Unprocessable(_))));
    }
}
