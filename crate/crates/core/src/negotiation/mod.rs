//! Deal-or-No-Deal bargaining: items, the alternating-offer protocol, belief
//! tracking over the opponent's values, scenario files, the negotiating
//! agent and the fair broker.

mod agent;
mod belief;
mod broker;
mod contexts;
mod items;
mod session;

pub use agent::{agent_turn, fallback_action, parse_agent_action, AgentTurn, ACCEPT_THRESHOLD};
pub use belief::ValueBelief;
pub use broker::{broker_demo, broker_prompt, broker_propose, BrokerMode, BrokerResult};
pub use contexts::{format_contexts, generate_contexts, load_contexts, parse_contexts, value_vectors, ContextError, NegotiationContext};
pub use items::{Allocation, ItemValues, Pot, ITEM_NAMES, ITEM_PLURALS};
pub use session::{NegotiationAction, NegotiationError, NegotiationSession, Offer, Outcome, SessionConfig};
