use std::sync::Mutex;

use super::{CompletionBackend, CompletionRequest, GatewayError};

/// A deterministic in-process responder. Returns `None` to pass the request on.
pub type Responder = Box<dyn Fn(&CompletionRequest) -> Option<String> + Send + Sync>;

/// Scripted completions: registered continuations plus responder functions.
///
/// A continuation is registered for a prompt prefix; a request whose prompt
/// extends that prefix along the continuation is answered with the rest of
/// the continuation. This lets one registered trace serve every incremental
/// request of a multi-step generation loop.
pub struct ScriptedBackend {
    name: String,
    scripts: Mutex<Vec<(String, String)>>,
    responders: Vec<Responder>,
}

impl ScriptedBackend {
    pub fn new(name: impl Into<String>) -> Self {
        Self { name: name.into(), scripts: Mutex::new(Vec::new()), responders: Vec::new() }
    }

    /// Always answers with `text`.
    pub fn constant(text: impl Into<String>) -> Self {
        let text = text.into();
        Self::new("scripted-constant").with_responder(Box::new(move |_| Some(text.clone())))
    }

    pub fn with_responder(mut self, responder: Responder) -> Self {
        self.responders.push(responder);
        self
    }

    /// Register the full continuation for a prompt.
    pub fn script(&self, prompt: impl Into<String>, continuation: impl Into<String>) {
        self.scripts.lock().expect("script table poisoned").push((prompt.into(), continuation.into()));
    }

    fn scripted(&self, prompt: &str) -> Option<String> {
        let scripts = self.scripts.lock().expect("script table poisoned");
        // Most recent registration wins.
        for (prefix, continuation) in scripts.iter().rev() {
            if let Some(done) = prompt.strip_prefix(prefix.as_str()) {
                if let Some(rest) = continuation.strip_prefix(done) {
                    return Some(rest.to_string());
                }
            }
        }
        None
    }
}

impl CompletionBackend for ScriptedBackend {
    fn id(&self) -> String {
        self.name.clone()
    }

    fn complete_raw(&self, request: &CompletionRequest) -> Result<String, GatewayError> {
        if let Some(text) = self.scripted(&request.prompt) {
            return Ok(text);
        }
        for r in &self.responders {
            if let Some(text) = r(request) {
                return Ok(text);
            }
        }
        Err(GatewayError::ProviderError { status: 404, body: "no scripted response for prompt".into() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gateway::complete;

    #[test]
    fn continuation_serves_incremental_prompts() {
        let b = ScriptedBackend::new("s");
        b.script("Q: go\nA:", " step one = 5. step two. Gopher's action:a1");
        let first = complete(&b, &CompletionRequest::new("Q: go\nA:", &[" = "], 32)).unwrap();
        assert_eq!(first, " step one");
        let second = complete(&b, &CompletionRequest::new("Q: go\nA: step one = 5.", &["action:"], 32)).unwrap();
        assert_eq!(second, " step two. Gopher's ");
        assert!(b.complete_raw(&CompletionRequest::new("other", &["x"], 1)).is_err());
    }
}
