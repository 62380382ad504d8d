use std::thread::sleep;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{CompletionBackend, CompletionRequest, GatewayConfig, GatewayError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ApiStyle {
    /// `{"model", "prompt", ...}` answered with `choices[0].text`.
    #[default]
    Completions,
    /// `{"model", "messages": [...], ...}` answered with `choices[0].message.content`.
    Chat,
}

/// Completion over HTTP with retries on transient failures.
pub struct HttpBackend {
    agent: ureq::Agent,
    config: GatewayConfig,
    retries: u32,
    backoff: Duration,
}

impl HttpBackend {
    pub fn new(config: GatewayConfig) -> Self {
        let agent: ureq::Agent = ureq::Agent::config_builder()
            .timeout_global(Some(Duration::from_secs(config.timeout_secs)))
            .http_status_as_error(false)
            .build()
            .into();
        Self { agent, config, retries: 3, backoff: Duration::from_millis(500) }
    }

    /// Base delay between retries; doubles each attempt.
    pub fn with_backoff(mut self, backoff: Duration) -> Self {
        self.backoff = backoff;
        self
    }

    fn body(&self, request: &CompletionRequest) -> Value {
        let mut body = match self.config.api_style {
            ApiStyle::Completions => json!({"model": self.config.model, "prompt": request.prompt}),
            ApiStyle::Chat => json!({"model": self.config.model, "messages": [{"role": "user", "content": request.prompt}]}),
        };
        body["max_tokens"] = json!(request.max_tokens);
        body["temperature"] = json!(request.temperature);
        if !request.stop.is_empty() {
            body["stop"] = json!(request.stop);
        }
        body
    }

    fn attempt(&self, body: &Value) -> Result<String, GatewayError> {
        let mut req = self.agent.post(&self.config.url);
        if let Some(key) = &self.config.api_key {
            req = req.header("Authorization", &format!("Bearer {key}"));
        }
        let mut resp = req.send_json(body).map_err(|e| match e {
            ureq::Error::Timeout(_) => GatewayError::Timeout,
            other => GatewayError::Transport(other.to_string()),
        })?;
        let status = resp.status().as_u16();
        let text = resp.body_mut().read_to_string().map_err(|e| GatewayError::Transport(e.to_string()))?;
        if !(200..300).contains(&status) {
            return Err(GatewayError::ProviderError { status, body: text });
        }
        let v: Value = serde_json::from_str(&text).map_err(|_| GatewayError::ProviderError { status, body: text.clone() })?;
        let choice = &v["choices"][0];
        choice["text"]
            .as_str()
            .or_else(|| choice["message"]["content"].as_str())
            .map(str::to_string)
            .ok_or(GatewayError::ProviderError { status, body: text })
    }
}

fn transient(e: &GatewayError) -> bool {
    match e {
        GatewayError::Timeout | GatewayError::Transport(_) => true,
        GatewayError::ProviderError { status, .. } => *status == 429 || *status >= 500,
        _ => false,
    }
}

impl CompletionBackend for HttpBackend {
    fn id(&self) -> String {
        format!("http:{}", self.config.model)
    }

    fn complete_raw(&self, request: &CompletionRequest) -> Result<String, GatewayError> {
        let body = self.body(request);
        let mut delay = self.backoff;
        let mut attempt = 0;
        loop {
            match self.attempt(&body) {
                Err(e) if transient(&e) && attempt < self.retries => {
                    tracing::warn!(error = %e, attempt, "retrying completion");
                    sleep(delay);
                    delay *= 2;
                    attempt += 1;
                }
                other => return other,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gateway::complete;
    use std::io::{Read, Write};
    use std::net::TcpListener;

    /// Answers each connection with the next canned (status, body) pair.
    fn stub(responses: Vec<(u16, &'static str)>) -> String {
        let listener = TcpListener::bind("127.0.0.1:0").unwrap();
        let addr = listener.local_addr().unwrap();
        std::thread::spawn(move || {
            for (status, body) in responses {
                let (mut s, _) = listener.accept().unwrap();
                let mut buf = [0u8; 8192];
                let mut seen = Vec::new();
                // Read headers and the JSON body.
                loop {
                    let n = s.read(&mut buf).unwrap();
                    seen.extend_from_slice(&buf[..n]);
                    let text = String::from_utf8_lossy(&seen);
                    if let Some(h) = text.find("\r\n\r\n") {
                        let len = text[..h]
                            .lines()
                            .find_map(|l| l.to_ascii_lowercase().strip_prefix("content-length:").map(|v| v.trim().parse::<usize>().unwrap()))
                            .unwrap_or(0);
                        if seen.len() >= h + 4 + len {
                            break;
                        }
                    }
                    if n == 0 {
                        break;
                    }
                }
                let reply = format!(
                    "HTTP/1.1 {status} X\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{body}",
                    body.len()
                );
                s.write_all(reply.as_bytes()).unwrap();
            }
        });
        format!("http://{addr}/v1/completions")
    }

    fn config(url: String) -> GatewayConfig {
        GatewayConfig { url, api_key: Some("k".into()), model: "m".into(), ..GatewayConfig::default() }
    }

    #[test]
    fn body_passes_through() {
        let url = stub(vec![(200, r#"{"choices":[{"text":"Gopher's action:a1"}]}"#)]);
        let b = HttpBackend::new(config(url));
        assert_eq!(complete(&b, &CompletionRequest::new("Q", &["\n"], 8)).unwrap(), "Gopher's action:a1");
    }

    #[test]
    fn retries_transient_then_succeeds() {
        let url = stub(vec![(503, "busy"), (200, r#"{"choices":[{"message":{"content":"ok"}}]}"#)]);
        let b = HttpBackend::new(config(url)).with_backoff(Duration::from_millis(1));
        assert_eq!(complete(&b, &CompletionRequest::new("Q", &["\n"], 8)).unwrap(), "ok");
    }

    #[test]
    fn client_errors_are_not_retried() {
        let url = stub(vec![(401, "denied")]);
        let b = HttpBackend::new(config(url)).with_backoff(Duration::from_millis(1));
        assert_eq!(
            complete(&b, &CompletionRequest::new("Q", &["\n"], 8)).unwrap_err(),
            GatewayError::ProviderError { status: 401, body: "denied".into() }
        );
    }
}
