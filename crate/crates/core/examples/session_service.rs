//! The live negotiation service driven in-process: create a session, make an
//! offer, read the redacted view and the event log.
//!
//! `cargo run --example session_service`

use std::sync::Arc;

use strategos::gateway::ReplayBackend;
use strategos::negotiation::{ItemValues, NegotiationAction, Pot};
use strategos::service::{ContextSpec, CreateSession, SessionService};

#[tokio::main]
async fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = tempfile::tempdir()?;
    let backend = ReplayBackend::open(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/negotiation_reference.jsonl"))?;
    let service = SessionService::open(dir.path(), Arc::new(backend))?;
    let created = service.create(&CreateSession {
        context: Some(ContextSpec::Explicit {
            pot: Pot::new(1, 4, 1),
            agent_values: ItemValues::new(4, 1, 2),
            human_values: ItemValues::new(0, 2, 4),
        }),
        method: Default::default(),
    })?;
    println!("session {}", created.id);
    let reply = service.act(&created.id, NegotiationAction::propose(0, 3, 1)).await?;
    println!("agent replied {:?}", reply.agent_reply);
    println!("{}", serde_json::to_string_pretty(&service.view(&created.id)?)?);
    print!("{}", service.transcript(&created.id)?);
    Ok(())
}
