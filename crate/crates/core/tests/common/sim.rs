//! Randomized play of the bargaining protocol against an independent rule check.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use strategos::negotiation::{
    generate_contexts, Allocation, NegotiationAction, NegotiationError, NegotiationSession, Outcome, SessionConfig,
};

pub const MAX_OFFERS: usize = 6;

#[derive(Debug, Default)]
pub struct SimStats {
    pub sessions: usize,
    pub actions: usize,
    pub accepted: usize,
    pub rejected: usize,
    pub violations: Vec<String>,
}

fn dot(a: &Allocation, v: &[u32; 3]) -> u32 {
    (0..3).map(|i| a.0[i] * v[i]).sum()
}

/// The error the protocol must raise for `action` by `actor`, if any.
fn expected_error(s: &NegotiationSession, actor: usize, action: &NegotiationAction) -> Option<NegotiationError> {
    if s.outcome != Outcome::Open {
        return Some(NegotiationError::SessionClosed);
    }
    if actor != s.turn {
        return Some(NegotiationError::NotYourTurn { expected: s.turn, got: actor });
    }
    match action {
        NegotiationAction::Propose { allocation } => {
            if s.history.len() >= MAX_OFFERS {
                Some(NegotiationError::SessionClosed)
            } else if (0..3).any(|i| allocation.0[i] > s.pot.0[i]) {
                Some(NegotiationError::OverAllocation(*allocation))
            } else {
                None
            }
        }
        NegotiationAction::Accept if s.history.is_empty() => Some(NegotiationError::NoOfferToAccept),
        _ => None,
    }
}

fn random_action(rng: &mut ChaCha8Rng, s: &NegotiationSession) -> NegotiationAction {
    match rng.random_range(0..10) {
        0 => NegotiationAction::Reject,
        1 | 2 => NegotiationAction::Accept,
        // Occasionally ask for one more than the pot holds.
        _ => NegotiationAction::Propose {
            allocation: Allocation(std::array::from_fn(|i| {
                let over = u32::from(rng.random_bool(0.1));
                rng.random_range(0..=s.pot.0[i] + over)
            })),
        },
    }
}

pub fn simulate_sessions(n: usize, seed: u64) -> SimStats {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let contexts = generate_contexts(seed, 100);
    let mut stats = SimStats::default();
    for k in 0..n {
        let ctx = contexts[k % contexts.len()];
        let first = rng.random_range(0..2);
        let mut s = NegotiationSession::new(
            ctx.pot,
            [ctx.values_a, ctx.values_b],
            ["Alice", "Bob"],
            SessionConfig { max_offers: MAX_OFFERS, first_mover: first },
        );
        let mut violations = Vec::new();
        let mut fail = |msg: String| violations.push(format!("session {k}: {msg}"));
        // Keep acting past the close to exercise the closed-session rule.
        for _ in 0..rng.random_range(1..20) {
            let actor = if rng.random_bool(0.9) { s.turn } else { 1 - s.turn };
            let action = random_action(&mut rng, &s);
            let expected = expected_error(&s, actor, &action);
            match (s.apply(actor, action), expected) {
                (Err(got), Some(want)) if got == want => {}
                (Ok(next), None) => {
                    if next.history.len() > MAX_OFFERS {
                        fail(format!("{} offers", next.history.len()));
                    }
                    match &next.outcome {
                        Outcome::Accepted { proposer, allocations, rewards } => {
                            let last = s.history.last().unwrap();
                            if *proposer != last.actor || allocations[last.actor] != last.allocation {
                                fail("accepted deal is not the standing offer".into());
                            }
                            if (0..3).any(|i| allocations[0].0[i] + allocations[1].0[i] != ctx.pot.0[i]) {
                                fail(format!("allocations {allocations:?} do not partition {:?}", ctx.pot));
                            }
                            let want = [dot(&allocations[0], &ctx.values_a.0), dot(&allocations[1], &ctx.values_b.0)];
                            if *rewards != want || next.rewards() != want {
                                fail(format!("rewards {rewards:?}, expected {want:?}"));
                            }
                            let caps = [dot(&ctx.pot.everything(), &ctx.values_a.0), dot(&ctx.pot.everything(), &ctx.values_b.0)];
                            if rewards[0] > caps[0] || rewards[1] > caps[1] {
                                fail(format!("rewards {rewards:?} exceed {caps:?}"));
                            }
                        }
                        Outcome::Rejected { .. } => {
                            if next.rewards() != [0, 0] {
                                fail(format!("reject pays {:?}", next.rewards()));
                            }
                        }
                        Outcome::Open => {
                            if next.turn != 1 - actor {
                                fail("turn did not pass".into());
                            }
                        }
                    }
                    s = next;
                }
                (got, want) => fail(format!("{action:?} by {actor}: got {got:?}, expected {want:?}")),
            }
            stats.actions += 1;
        }
        stats.violations.extend(violations);
        match s.outcome {
            Outcome::Accepted { .. } => stats.accepted += 1,
            Outcome::Rejected { .. } => stats.rejected += 1,
            Outcome::Open => {}
        }
        stats.sessions += 1;
    }
    stats
}
