use serde::{Deserialize, Serialize};

use crate::gateway::{complete, complete_with_stop, estimate_tokens, CompletionBackend, CompletionRequest, TAIL_TOKENS};

use super::ast::{Call, Value};
use super::eval::{eval_call, EvalContext};
use super::parser::parse_call_prefix;
use super::DslError;

const TOOLS: [&str; 3] = ["search(", "compare(", "mean("];
const CALL_STOPS: [&str; 2] = [") =", ")="];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct InterceptConfig {
    pub max_tool_calls: usize,
    /// Limit on generated text, in estimated tokens.
    pub token_budget: usize,
    /// `max_tokens` of each incremental request.
    pub step_tokens: u32,
}

impl Default for InterceptConfig {
    fn default() -> Self {
        Self { max_tool_calls: 64, token_budget: 4096, step_tokens: 512 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToolResult {
    pub call: Call,
    pub value: Value,
    /// Byte offset of the call in the generated text.
    pub offset: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterceptRun {
    /// Generated text with tool results spliced in, ending with the action marker.
    pub text: String,
    pub calls: Vec<ToolResult>,
    /// Text read after the action marker.
    pub action_tail: String,
    pub requests: usize,
}

/// A tool call left open at the end of `text` (its closing parenthesis was
/// consumed by the stop string).
fn open_call(text: &str) -> Option<(Call, usize)> {
    let start = TOOLS
        .iter()
        .filter_map(|t| {
            text.rmatch_indices(t)
                .find(|(i, _)| !text[..*i].ends_with(|c: char| c.is_alphanumeric() || c == '_'))
                .map(|(i, _)| i)
        })
        .max()?;
    let closed = format!("{text})");
    match parse_call_prefix(&closed, start) {
        Ok((call, end)) if end == closed.len() => Some((call, start)),
        _ => None,
    }
}

/// Generates until the action marker, evaluating each tool call the model
/// writes and splicing ` = result` back into the text before resuming.
pub fn intercept_loop(
    prompt: &str,
    marker: &str,
    backend: &dyn CompletionBackend,
    ctx: &EvalContext,
    config: &InterceptConfig,
) -> Result<InterceptRun, DslError> {
    let answer = prompt.rfind("\nA:").map_or(prompt, |i| &prompt[i..]);
    if let Some(i) = answer.find(marker) {
        let tail = answer[i + marker.len()..].lines().next().unwrap_or("").to_string();
        return Ok(InterceptRun { text: String::new(), calls: Vec::new(), action_tail: tail, requests: 0 });
    }
    let mut text = String::new();
    let mut calls = Vec::new();
    let mut requests = 0;
    let stops: Vec<&str> = CALL_STOPS.iter().copied().chain([marker]).collect();
    loop {
        if estimate_tokens(&text) > config.token_budget {
            return Err(DslError::BudgetExhausted(config.token_budget));
        }
        let request = CompletionRequest::new(format!("{prompt}{text}"), &stops, config.step_tokens);
        let (chunk, hit) = complete_with_stop(backend, &request)?;
        requests += 1;
        text.push_str(&chunk);
        let at_call = match hit.as_deref() {
            Some(m) if m == marker => false,
            Some(_) | None => true,
        };
        if at_call {
            if let Some((call, offset)) = open_call(&text) {
                if calls.len() >= config.max_tool_calls {
                    return Err(DslError::MaxToolCalls(config.max_tool_calls));
                }
                let value = eval_call(&call, ctx)?;
                text.push_str(&format!(") = {value}"));
                calls.push(ToolResult { call, value, offset });
                continue;
            }
            if let Some(stop) = hit {
                // A stop string that was not a tool call; keep it and go on.
                text.push_str(&stop);
                continue;
            }
        }
        break;
    }
    text.push_str(marker);
    let tail = complete(backend, &CompletionRequest::new(format!("{prompt}{text}"), &["\n"], TAIL_TOKENS))?;
    Ok(InterceptRun { text, calls, action_tail: tail, requests: requests + 1 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compiler::{canonical_demo_games, compile_factored_demos};
    use crate::gateway::ScriptedBackend;

    #[test]
    fn scripted_demo_trace_splices_every_result() {
        let [_, tie] = canonical_demo_games();
        let demos = compile_factored_demos().unwrap();
        let (question, trace) = &demos.recursive[0];
        let prompt = format!("{question}\n\n");
        let backend = ScriptedBackend::new("s");
        backend.script(prompt.clone(), trace.text.clone());
        let run = intercept_loop(&prompt, "Gopher's action:", &backend, &EvalContext::oracle(&tie), &InterceptConfig::default())
            .unwrap();
        // Four searches and two compares.
        assert_eq!(run.calls.len(), 6);
        assert_eq!(run.action_tail, "a2.");
        assert_eq!(format!("{}{}", run.text, run.action_tail), trace.text);
    }

    #[test]
    fn marker_in_prompt_means_no_requests() {
        let [d, _] = canonical_demo_games();
        let backend = ScriptedBackend::new("unused");
        let run = intercept_loop("Q:x\nA:Gopher's action:a1", "Gopher's action:", &backend, &EvalContext::oracle(&d), &InterceptConfig::default())
            .unwrap();
        assert_eq!((run.requests, run.action_tail.as_str()), (0, "a1"));
    }

    #[test]
    fn tool_call_cap() {
        let [d, _] = canonical_demo_games();
        let backend = ScriptedBackend::constant("mean([1, 2]) = ");
        let cfg = InterceptConfig { max_tool_calls: 3, ..Default::default() };
        let err = intercept_loop("Q\nA:", "Gopher's action:", &backend, &EvalContext::oracle(&d), &cfg).unwrap_err();
        assert_eq!(err, DslError::MaxToolCalls(3));
    }

    #[test]
    fn open_call_needs_a_complete_prefix() {
        assert!(open_call("x = search(Bob, Gopher, max, b1").is_some());
        assert!(open_call("r11=(br11").is_none());
        assert!(open_call("research(Bob").is_none());
    }
}
