//! JSON-lines transcripts of completion exchanges.
//!
//! Each line is `{hash, request, response, ts, backend, chain}`. `hash` is the
//! request's replay key; `chain` is SHA-256 over the previous line's chain and
//! this record's other fields, so the last chain value covers the whole file
//! and any edited byte is detected on load.

use std::collections::{HashMap, VecDeque};
use std::fs::{File, OpenOptions};
use std::io::Write;
use std::path::Path;
use std::sync::Mutex;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use super::{sha256_hex, CompletionBackend, CompletionRequest, GatewayError};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TranscriptRecord {
    pub hash: String,
    pub request: CompletionRequest,
    pub response: String,
    /// Milliseconds since the Unix epoch.
    pub ts: u64,
    pub backend: String,
    pub chain: String,
}

#[derive(Serialize)]
struct Unchained<'a> {
    hash: &'a str,
    request: &'a CompletionRequest,
    response: &'a str,
    ts: u64,
    backend: &'a str,
}

fn chain_of(prev: &str, r: &TranscriptRecord) -> String {
    let body = serde_json::to_string(&Unchained {
        hash: &r.hash,
        request: &r.request,
        response: &r.response,
        ts: r.ts,
        backend: &r.backend,
    })
    .expect("records serialize");
    sha256_hex(format!("{prev}\n{body}").as_bytes())
}

/// Parse and verify a transcript. Returns the records and the content hash.
pub fn load_transcript(path: impl AsRef<Path>) -> Result<(Vec<TranscriptRecord>, String), GatewayError> {
    let text = std::fs::read_to_string(path)?;
    let mut records = Vec::new();
    let mut chain = String::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let corrupt = |reason: String| GatewayError::CorruptTranscript { line: i + 1, reason };
        let r: TranscriptRecord = serde_json::from_str(line).map_err(|e| corrupt(e.to_string()))?;
        if r.hash != r.request.key() {
            return Err(corrupt("request hash does not match request".into()));
        }
        let expected = chain_of(&chain, &r);
        if expected != r.chain {
            return Err(corrupt("chain digest mismatch".into()));
        }
        chain = expected;
        records.push(r);
    }
    Ok((records, chain))
}

/// Wraps a backend and appends every exchange to a transcript file.
pub struct RecordingBackend<B> {
    inner: B,
    file: Mutex<(File, String)>,
}

impl<B: CompletionBackend> RecordingBackend<B> {
    /// Starts a fresh transcript at `path`, truncating any existing file.
    pub fn create(inner: B, path: impl AsRef<Path>) -> Result<Self, GatewayError> {
        let file = File::create(path)?;
        Ok(Self { inner, file: Mutex::new((file, String::new())) })
    }

    /// Continues an existing transcript after verifying it.
    pub fn append(inner: B, path: impl AsRef<Path>) -> Result<Self, GatewayError> {
        let path = path.as_ref();
        let chain = if path.exists() { load_transcript(path)?.1 } else { String::new() };
        let file = OpenOptions::new().create(true).append(true).open(path)?;
        Ok(Self { inner, file: Mutex::new((file, chain)) })
    }

    pub fn into_inner(self) -> B {
        self.inner
    }
}

impl<B: CompletionBackend> CompletionBackend for RecordingBackend<B> {
    fn id(&self) -> String {
        self.inner.id()
    }

    fn complete_raw(&self, request: &CompletionRequest) -> Result<String, GatewayError> {
        let response = self.inner.complete_raw(request)?;
        let ts = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_millis() as u64).unwrap_or(0);
        let mut guard = self.file.lock().expect("transcript writer poisoned");
        let (file, chain) = &mut *guard;
        let mut record = TranscriptRecord {
            hash: request.key(),
            request: request.clone(),
            response: response.clone(),
            ts,
            backend: self.inner.id(),
            chain: String::new(),
        };
        record.chain = chain_of(chain, &record);
        let line = serde_json::to_string(&record).expect("records serialize");
        writeln!(file, "{line}")?;
        file.flush()?;
        *chain = record.chain;
        Ok(response)
    }

    fn score_choices(&self, prompt: &str, choices: &[String]) -> Option<Result<Vec<f64>, GatewayError>> {
        self.inner.score_choices(prompt, choices)
    }
}

/// Serves recorded responses keyed by request hash; never calls a model.
pub struct ReplayBackend {
    responses: Mutex<ReplayState>,
    content_hash: String,
}

struct ReplayState {
    by_key: HashMap<String, VecDeque<String>>,
    served: usize,
}

impl ReplayBackend {
    pub fn open(path: impl AsRef<Path>) -> Result<Self, GatewayError> {
        let (records, content_hash) = load_transcript(path)?;
        Ok(Self::from_records(records, content_hash))
    }

    pub fn from_records(records: Vec<TranscriptRecord>, content_hash: String) -> Self {
        let mut by_key: HashMap<String, VecDeque<String>> = HashMap::new();
        for r in records {
            by_key.entry(r.hash).or_default().push_back(r.response);
        }
        Self { responses: Mutex::new(ReplayState { by_key, served: 0 }), content_hash }
    }

    /// Chain digest covering the whole transcript.
    pub fn content_hash(&self) -> &str {
        &self.content_hash
    }
}

impl CompletionBackend for ReplayBackend {
    fn id(&self) -> String {
        "replay".into()
    }

    fn complete_raw(&self, request: &CompletionRequest) -> Result<String, GatewayError> {
        let mut state = self.responses.lock().expect("replay table poisoned");
        let index = state.served;
        state.served += 1;
        let key = request.key();
        match state.by_key.get_mut(&key) {
            // Repeated identical requests are served in recorded order; the last answer repeats.
            Some(queue) if queue.len() > 1 => Ok(queue.pop_front().expect("nonempty")),
            Some(queue) if queue.len() == 1 => Ok(queue[0].clone()),
            _ => Err(GatewayError::ReplayMiss { index, hash: key }),
        }
    }
}
