use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::negotiation::{Allocation, NegotiationContext};
use crate::oracle::{fairness_gap, Fairness};

use super::HarnessError;

/// Mean over contexts of |fairness(proposal) - fairness(optimum)|, with
/// `proposals[i]` as player A's share in `contexts[i]`.
pub fn score_fairness(
    proposals: &[Allocation],
    contexts: &[NegotiationContext],
    fairness: Fairness,
) -> Result<f64, HarnessError> {
    if contexts.is_empty() {
        return Ok(0.0);
    }
    let mut total = 0u64;
    for (i, c) in contexts.iter().enumerate() {
        let p = proposals.get(i).ok_or(HarnessError::ContextWithoutProposal(i))?;
        total += u64::from(fairness_gap(p, &c.pot, &c.values_a, &c.values_b, fairness)?);
    }
    Ok(total as f64 / contexts.len() as f64)
}

/// Expected gap of a uniformly random split, estimated with `draws` samples per context.
pub fn random_proposal_gap(
    contexts: &[NegotiationContext],
    fairness: Fairness,
    draws: usize,
    seed: u64,
) -> Result<f64, HarnessError> {
    if contexts.is_empty() || draws == 0 {
        return Ok(0.0);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sum = 0.0;
    for c in contexts {
        let mut gaps = 0u64;
        for _ in 0..draws {
            let share = Allocation(std::array::from_fn(|k| rng.random_range(0..=c.pot.0[k])));
            gaps += u64::from(fairness_gap(&share, &c.pot, &c.values_a, &c.values_b, fairness)?);
        }
        sum += gaps as f64 / draws as f64;
    }
    Ok(sum / contexts.len() as f64)
}
