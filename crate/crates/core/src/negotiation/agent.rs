//! The negotiating agent: one model completion per turn, parsed into a
//! protocol action, with a deterministic fallback when the text is unusable.

use serde::{Deserialize, Serialize};

use crate::compiler::{compile_negotiation_turn, AgentMethod, AnnotatedEpisode};
use crate::gateway::{complete, CompletionBackend, CompletionRequest, GatewayError};
use crate::oracle::deal_value;

use super::{Allocation, NegotiationAction, NegotiationSession, ValueBelief};

/// Share of the agent's total value at which the fallback accepts a standing offer.
pub const ACCEPT_THRESHOLD: f64 = 0.6;

/// Tokens allowed for one turn.
const TURN_TOKENS: u32 = 512;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgentTurn {
    pub action: NegotiationAction,
    /// Belief about the opponent after the latest incoming offer.
    pub belief: ValueBelief,
    pub prompt: String,
    pub response: String,
    /// Why the fallback policy was used, when it was.
    pub fallback: Option<String>,
}

/// The last action line written for `agent` in a turn's text.
pub fn parse_agent_action(text: &str, agent: &str) -> Option<NegotiationAction> {
    text.lines().rev().find_map(|line| {
        let rest = line.trim().strip_prefix(agent)?.trim_start().strip_prefix(':')?.trim();
        if let Some(items) = rest.strip_prefix("propose:") {
            items.parse::<Allocation>().ok().map(|allocation| NegotiationAction::Propose { allocation })
        } else if rest.eq_ignore_ascii_case("accept") {
            Some(NegotiationAction::Accept)
        } else if rest.eq_ignore_ascii_case("reject") {
            Some(NegotiationAction::Reject)
        } else {
            None
        }
    })
}

/// Accept a standing offer worth at least [`ACCEPT_THRESHOLD`] of the pot;
/// otherwise repeat the last own proposal, or ask for every item the agent
/// values; reject only when no proposal is possible and nothing is on the table.
pub fn fallback_action(session: &NegotiationSession, agent: usize) -> NegotiationAction {
    let values = &session.values[agent];
    let total = values.pot_value(&session.pot) as f64;
    if let Some(share) = session.standing_share(agent) {
        if deal_value(&share, values) as f64 >= ACCEPT_THRESHOLD * total {
            return NegotiationAction::Accept;
        }
    }
    if session.offers_remaining() > 0 {
        let allocation = match session.last_offer_by(agent) {
            Some(o) => o.allocation,
            None => Allocation(std::array::from_fn(|i| if values.0[i] > 0 { session.pot.0[i] } else { 0 })),
        };
        return NegotiationAction::Propose { allocation };
    }
    if session.standing_share(agent).is_some() {
        NegotiationAction::Accept
    } else {
        NegotiationAction::Reject
    }
}

/// Prompts the model for `agent`'s move. Gateway failures propagate; text
/// that does not parse into a legal move falls back to [`fallback_action`].
pub fn agent_turn(
    session: &NegotiationSession,
    agent: usize,
    prior: &ValueBelief,
    style_demos: &[AnnotatedEpisode],
    method: AgentMethod,
    backend: &dyn CompletionBackend,
) -> Result<AgentTurn, GatewayError> {
    let compiled = compile_negotiation_turn(session, agent, prior, style_demos, method)
        .map_err(|e| GatewayError::InvalidRequest(e.to_string()))?;
    let stop: Vec<&str> = compiled.stop.iter().map(String::as_str).collect();
    let response = complete(backend, &CompletionRequest::new(compiled.prompt.as_str(), &stop, TURN_TOKENS))?;
    let name = &session.names[agent];
    let (action, fallback) = match parse_agent_action(&response, name) {
        Some(a) => match session.apply(agent, a) {
            Ok(_) => (a, None),
            Err(e) => (fallback_action(session, agent), Some(format!("illegal move: {e}"))),
        },
        None => (fallback_action(session, agent), Some("no action line in the response".to_string())),
    };
    if let Some(reason) = &fallback {
        tracing::warn!(agent = %name, reason = %reason, "negotiation agent fell back");
    }
    Ok(AgentTurn { action, belief: compiled.belief, prompt: compiled.prompt, response, fallback })
}
