use serde::{Deserialize, Serialize};

use super::{CompletionBackend, GatewayError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ActionStrategy {
    ExactMatch,
    PrefixMatch,
    Scoring,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstrainedAction {
    pub action: String,
    pub strategy: ActionStrategy,
}

/// Text following the last `action:` marker (case-insensitive), or all of `tail`.
pub fn text_after_marker(tail: &str) -> &str {
    let lower = tail.to_ascii_lowercase();
    match lower.rfind("action:") {
        Some(i) => &tail[i + "action:".len()..],
        None => tail,
    }
}

/// Lowercase, with surrounding whitespace and punctuation removed.
pub fn normalize_action_text(s: &str) -> String {
    s.trim().trim_matches(|c: char| c.is_ascii_punctuation() || c.is_whitespace()).to_ascii_lowercase()
}

/// Map free model text to one of `valid`. Tries an exact match of the text
/// after the action marker, then the longest unambiguous prefix, then (if a
/// scorer is given and supports it) the highest-scoring choice.
pub fn constrained_action(
    tail: &str,
    valid: &[String],
    scorer: Option<(&dyn CompletionBackend, &str)>,
) -> Result<ConstrainedAction, GatewayError> {
    if valid.is_empty() {
        return Err(GatewayError::NoValidAction(tail.to_string()));
    }
    let said = normalize_action_text(text_after_marker(tail));
    let norm: Vec<String> = valid.iter().map(|v| normalize_action_text(v)).collect();

    if let Some(i) = norm.iter().position(|v| *v == said) {
        return Ok(ConstrainedAction { action: valid[i].clone(), strategy: ActionStrategy::ExactMatch });
    }

    let mut prefixed: Vec<usize> = (0..valid.len()).filter(|&i| !norm[i].is_empty() && said.starts_with(&norm[i])).collect();
    prefixed.sort_by_key(|&i| std::cmp::Reverse(norm[i].len()));
    if let Some(&top) = prefixed.first() {
        let unique = prefixed.get(1).is_none_or(|&j| norm[j].len() < norm[top].len());
        // A longer token glued to the match ("a1x") is not a match.
        let boundary = said[norm[top].len()..].chars().next().is_none_or(|c| !c.is_alphanumeric());
        if unique && boundary {
            return Ok(ConstrainedAction { action: valid[top].clone(), strategy: ActionStrategy::PrefixMatch });
        }
    }

    if let Some((backend, prompt)) = scorer {
        if let Some(Ok(scores)) = backend.score_choices(prompt, valid) {
            if let Some((i, _)) = scores.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1).then(b.0.cmp(&a.0))) {
                return Ok(ConstrainedAction { action: valid[i].clone(), strategy: ActionStrategy::Scoring });
            }
        }
    }
    Err(GatewayError::NoValidAction(tail.to_string()))
}
