use serde::{Deserialize, Serialize};

use super::{complete, constrained_action, CompletionBackend, CompletionRequest, ConstrainedAction, GatewayError};

/// Completion cut at the earliest stop string, with the stop that matched.
/// `None` means no stop was seen in the raw text (the provider may have
/// already removed it).
pub fn complete_with_stop(
    backend: &dyn CompletionBackend,
    request: &CompletionRequest,
) -> Result<(String, Option<String>), GatewayError> {
    request.validate()?;
    let raw = backend.complete_raw(request)?;
    let hit = request
        .stop
        .iter()
        .filter(|s| !s.is_empty())
        .filter_map(|s| raw.find(s.as_str()).map(|i| (i, s)))
        .min_by_key(|(i, s)| (*i, std::cmp::Reverse(s.len())));
    Ok(match hit {
        Some((i, s)) => (raw[..i].to_string(), Some(s.clone())),
        None => (raw, None),
    })
}

/// Reasoning text, the text after the action marker, and the chosen action.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelAnswer {
    pub reasoning: String,
    pub tail: String,
    pub action: ConstrainedAction,
}

/// Tokens allowed for the short request that reads the action after the marker.
pub const TAIL_TOKENS: u32 = 8;

/// Two-step answer: reason until `marker`, then read the action after it and
/// map it onto `valid`.
pub fn answer_with_action(
    backend: &dyn CompletionBackend,
    prompt: &str,
    marker: &str,
    valid: &[String],
    reasoning_tokens: u32,
) -> Result<ModelAnswer, GatewayError> {
    let reasoning = complete(backend, &CompletionRequest::new(prompt, &[marker], reasoning_tokens))?;
    let tail_prompt = format!("{prompt}{reasoning}{marker}");
    let tail = complete(backend, &CompletionRequest::new(tail_prompt.as_str(), &["\n"], TAIL_TOKENS))?;
    let action = constrained_action(&tail, valid, Some((backend, &tail_prompt)))?;
    Ok(ModelAnswer { reasoning, tail, action })
}
