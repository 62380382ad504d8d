use serde::{Deserialize, Serialize};

use super::items::{Allocation, Pot};

/// Accumulated evidence about how much the opponent values each item type.
/// Each incoming offer adds the fraction of every item type it requests.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ValueBelief {
    pub scores: [f64; 3],
    pub observations: usize,
}

impl ValueBelief {
    /// Per-item fractions `requested / count` for an offer (0 when the pot has none).
    pub fn fractions(offer: &Allocation, pot: &Pot) -> [f64; 3] {
        std::array::from_fn(|i| if pot.0[i] > 0 { offer.0[i] as f64 / pot.0[i] as f64 } else { 0.0 })
    }

    pub fn update(&self, offer: &Allocation, pot: &Pot) -> Self {
        let f = Self::fractions(offer, pot);
        let mut next = *self;
        for (s, x) in next.scores.iter_mut().zip(f) {
            *s += x;
        }
        next.observations += 1;
        next
    }

    /// Item indices by descending score; equal scores keep item order.
    pub fn ranking(&self) -> [usize; 3] {
        let mut idx = [0, 1, 2];
        idx.sort_by(|&a, &b| self.scores[b].total_cmp(&self.scores[a]));
        idx
    }
}
