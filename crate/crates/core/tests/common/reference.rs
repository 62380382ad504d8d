//! The reference negotiation game: Alice (the agent) values book=4 hat=1
//! ball=2, Bob values book=0 hat=2 ball=4, over one book, four hats and a ball.

use std::path::PathBuf;

use strategos::negotiation::{ItemValues, NegotiationSession, Pot, SessionConfig};

pub fn reference_session() -> NegotiationSession {
    NegotiationSession::new(
        Pot::new(1, 4, 1),
        [ItemValues::new(4, 1, 2), ItemValues::new(0, 2, 4)],
        ["Alice", "Bob"],
        SessionConfig { max_offers: 6, first_mover: 1 },
    )
}

pub fn reference_fixture() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/negotiation_reference.jsonl")
}

/// What Alice wrote on each turn of the reference transcript, after the
/// prefilled reasoning that ends with her own value ranking.
pub fn reference_agent_responses() -> Vec<String> {
    let text = std::fs::read_to_string(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden/negotiation_episode.reference.txt"))
        .unwrap();
    let mut out = Vec::new();
    let mut current: Option<Vec<&str>> = None;
    for line in text.lines() {
        if line.starts_with("Alice values:") {
            current = Some(Vec::new());
        } else if let Some(c) = current.as_mut() {
            c.push(line);
            if line.starts_with("Alice: propose:") || line.starts_with("Alice:accept") || line.starts_with("Alice:reject") {
                out.push(current.take().unwrap().join("\n"));
            }
        }
    }
    out
}
