//! The negotiation agent replayed against a recorded transcript: two counter
//! offers with the belief over the opponent's values after each.
//!
//! `cargo run --example negotiation_agent`

use strategos::compiler::{default_negotiation_demo, AgentMethod};
use strategos::gateway::ReplayBackend;
use strategos::negotiation::{
    agent_turn, ItemValues, NegotiationAction, NegotiationSession, Pot, SessionConfig, ValueBelief,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let backend = ReplayBackend::open(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/negotiation_reference.jsonl"))?;
    let mut session = NegotiationSession::new(
        Pot::new(1, 4, 1),
        [ItemValues::new(4, 1, 2), ItemValues::new(0, 2, 4)],
        ["Alice", "Bob"],
        SessionConfig { max_offers: 6, first_mover: 1 },
    );
    let demos = [default_negotiation_demo()];
    for bob in [NegotiationAction::propose(0, 3, 1), NegotiationAction::propose(0, 2, 1)] {
        session = session.apply(1, bob)?;
        let turn = agent_turn(&session, 0, &ValueBelief::default(), &demos, AgentMethod::Strategic, &backend)?;
        println!("Bob {bob:?}\n  belief {:?}\n  Alice {:?}", turn.belief.scores, turn.action);
        session = session.apply(0, turn.action)?;
    }
    let closed = session.apply(1, NegotiationAction::Accept)?;
    println!("outcome {:?}", closed.outcome);
    Ok(())
}
