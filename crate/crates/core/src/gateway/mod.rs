//! Provider-agnostic text completion.
//!
//! Everything that talks to a language model goes through
//! [`CompletionBackend`]. Backends: [`HttpBackend`] (a configurable
//! completions or chat endpoint), [`ReplayBackend`] (serves a recorded
//! transcript), [`RecordingBackend`] (wraps another backend and writes the
//! transcript) and [`ScriptedBackend`] (deterministic in-process responders).

mod answer;
mod config;
mod constrain;
mod http;
mod scripted;
mod tokens;
mod transcript;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

pub use answer::{answer_with_action, complete_with_stop, ModelAnswer, TAIL_TOKENS};
pub use config::GatewayConfig;
pub use constrain::{constrained_action, normalize_action_text, text_after_marker, ActionStrategy, ConstrainedAction};
pub use http::{ApiStyle, HttpBackend};
pub use scripted::{Responder, ScriptedBackend};
pub use tokens::{estimate_tokens, BudgetCheck, ByteQuarterEstimator, P50kEstimator, TokenEstimator};
pub use transcript::{load_transcript, RecordingBackend, ReplayBackend, TranscriptRecord};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GatewayError {
    #[error("provider returned {status}: {body}")]
    ProviderError { status: u16, body: String },
    #[error("no recorded response for request #{index} (hash {hash})")]
    ReplayMiss { index: usize, hash: String },
    #[error("request timed out")]
    Timeout,
    #[error("transcript line {line} is corrupt: {reason}")]
    CorruptTranscript { line: usize, reason: String },
    #[error("invalid request: {0}")]
    InvalidRequest(String),
    #[error("no valid action in {0:?}")]
    NoValidAction(String),
    #[error("transport failure: {0}")]
    Transport(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for GatewayError {
    fn from(e: std::io::Error) -> Self {
        GatewayError::Io(e.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompletionRequest {
    pub prompt: String,
    pub stop: Vec<String>,
    pub max_tokens: u32,
    pub temperature: f64,
}

impl CompletionRequest {
    /// Greedy request with the given stop strings.
    pub fn new(prompt: impl Into<String>, stop: &[&str], max_tokens: u32) -> Self {
        Self { prompt: prompt.into(), stop: stop.iter().map(|s| s.to_string()).collect(), max_tokens, temperature: 0.0 }
    }

    pub fn validate(&self) -> Result<(), GatewayError> {
        if !(0.0..=2.0).contains(&self.temperature) {
            return Err(GatewayError::InvalidRequest(format!("temperature {} outside [0, 2]", self.temperature)));
        }
        if self.stop.iter().all(String::is_empty) && self.max_tokens == 0 {
            return Err(GatewayError::InvalidRequest("needs a stop string or a max_tokens bound".into()));
        }
        Ok(())
    }

    /// Replay key: SHA-256 over the request with whitespace runs in the prompt collapsed.
    pub fn key(&self) -> String {
        let canonical = serde_json::json!({
            "prompt": collapse_whitespace(&self.prompt),
            "stop": self.stop,
            "max_tokens": self.max_tokens,
            "temperature": self.temperature,
        });
        sha256_hex(canonical.to_string().as_bytes())
    }
}

pub(crate) fn collapse_whitespace(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

pub(crate) fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub trait CompletionBackend: Send + Sync {
    /// Identifier recorded in transcripts.
    fn id(&self) -> String;

    /// Raw completion; may run past stop strings, [`complete`] truncates.
    fn complete_raw(&self, request: &CompletionRequest) -> Result<String, GatewayError>;

    /// Log-likelihood style score of each choice appended to `prompt`, when supported.
    fn score_choices(&self, _prompt: &str, _choices: &[String]) -> Option<Result<Vec<f64>, GatewayError>> {
        None
    }
}

impl<B: CompletionBackend + ?Sized> CompletionBackend for Box<B> {
    fn id(&self) -> String {
        (**self).id()
    }
    fn complete_raw(&self, request: &CompletionRequest) -> Result<String, GatewayError> {
        (**self).complete_raw(request)
    }
    fn score_choices(&self, prompt: &str, choices: &[String]) -> Option<Result<Vec<f64>, GatewayError>> {
        (**self).score_choices(prompt, choices)
    }
}

impl<B: CompletionBackend + ?Sized> CompletionBackend for std::sync::Arc<B> {
    fn id(&self) -> String {
        (**self).id()
    }
    fn complete_raw(&self, request: &CompletionRequest) -> Result<String, GatewayError> {
        (**self).complete_raw(request)
    }
    fn score_choices(&self, prompt: &str, choices: &[String]) -> Option<Result<Vec<f64>, GatewayError>> {
        (**self).score_choices(prompt, choices)
    }
}

/// Complete `request` and cut the text at the earliest stop string.
pub fn complete(backend: &dyn CompletionBackend, request: &CompletionRequest) -> Result<String, GatewayError> {
    request.validate()?;
    let raw = backend.complete_raw(request)?;
    Ok(truncate_at_stop(&raw, &request.stop).to_string())
}

pub fn truncate_at_stop<'a>(text: &'a str, stop: &[String]) -> &'a str {
    let cut = stop.iter().filter(|s| !s.is_empty()).filter_map(|s| text.find(s.as_str())).min();
    match cut {
        Some(i) => &text[..i],
        None => text,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stop_strings_are_excluded() {
        let backend = ScriptedBackend::constant("reasoning... Gopher agent action: a1");
        let req = CompletionRequest::new("Q", &["agent action:"], 64);
        let out = complete(&backend, &req).unwrap();
        assert_eq!(out, "reasoning... Gopher ");
        assert!(!out.contains("agent action:"));
    }

    #[test]
    fn keys_ignore_whitespace_runs() {
        let a = CompletionRequest::new("A:  Let's\n\nreason", &["x"], 8);
        let b = CompletionRequest::new("A: Let's reason\n", &["x"], 8);
        assert_eq!(a.key(), b.key());
        assert_ne!(a.key(), CompletionRequest::new("A: Let's reason", &["y"], 8).key());
    }

    #[test]
    fn request_validation() {
        let mut r = CompletionRequest::new("p", &[], 0);
        assert!(r.validate().is_err());
        r.max_tokens = 5;
        assert!(r.validate().is_ok());
        r.temperature = 2.5;
        assert!(r.validate().is_err());
    }
}
