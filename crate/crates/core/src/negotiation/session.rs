use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::items::{Allocation, ItemValues, Pot};
use crate::oracle::deal_value;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NegotiationError {
    #[error("player {got} acted but it is player {expected}'s turn")]
    NotYourTurn { expected: usize, got: usize },
    #[error("proposal {0} exceeds the pot")]
    OverAllocation(Allocation),
    #[error("session is closed")]
    SessionClosed,
    #[error("there is no offer to accept")]
    NoOfferToAccept,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum NegotiationAction {
    /// The actor asks for `allocation`; the other player would get the rest.
    Propose { allocation: Allocation },
    Accept,
    Reject,
}

impl NegotiationAction {
    pub fn propose(book: u32, hat: u32, ball: u32) -> Self {
        NegotiationAction::Propose { allocation: Allocation::new(book, hat, ball) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Offer {
    pub actor: usize,
    /// Items the actor asks for.
    pub allocation: Allocation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Outcome {
    Open,
    Accepted { proposer: usize, allocations: [Allocation; 2], rewards: [u32; 2] },
    Rejected { by: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionConfig {
    /// Proposals allowed in total; accept and reject do not count.
    pub max_offers: usize,
    pub first_mover: usize,
}

impl Default for SessionConfig {
    fn default() -> Self {
        Self { max_offers: 6, first_mover: 0 }
    }
}

/// Two-player alternating-offer bargaining over a fixed pot.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NegotiationSession {
    pub pot: Pot,
    pub values: [ItemValues; 2],
    pub names: [String; 2],
    pub history: Vec<Offer>,
    /// Player whose move it is.
    pub turn: usize,
    pub config: SessionConfig,
    pub outcome: Outcome,
}

impl NegotiationSession {
    pub fn new(pot: Pot, values: [ItemValues; 2], names: [&str; 2], config: SessionConfig) -> Self {
        Self {
            pot,
            values,
            names: names.map(str::to_string),
            history: Vec::new(),
            turn: config.first_mover,
            config,
            outcome: Outcome::Open,
        }
    }

    pub fn is_open(&self) -> bool {
        self.outcome == Outcome::Open
    }

    pub fn offers_remaining(&self) -> usize {
        self.config.max_offers.saturating_sub(self.history.len())
    }

    pub fn last_offer(&self) -> Option<&Offer> {
        self.history.last()
    }

    pub fn last_offer_by(&self, actor: usize) -> Option<&Offer> {
        self.history.iter().rev().find(|o| o.actor == actor)
    }

    /// What `player` would receive by accepting the standing offer.
    pub fn standing_share(&self, player: usize) -> Option<Allocation> {
        self.last_offer().filter(|o| o.actor != player).map(|o| self.pot.remainder(&o.allocation))
    }

    pub fn rewards(&self) -> [u32; 2] {
        match &self.outcome {
            Outcome::Accepted { rewards, .. } => *rewards,
            _ => [0, 0],
        }
    }

    /// Functional form of [`NegotiationSession::apply_mut`].
    pub fn apply(&self, actor: usize, action: NegotiationAction) -> Result<Self, NegotiationError> {
        let mut next = self.clone();
        next.apply_mut(actor, action)?;
        Ok(next)
    }

    pub fn apply_mut(&mut self, actor: usize, action: NegotiationAction) -> Result<(), NegotiationError> {
        if !self.is_open() {
            return Err(NegotiationError::SessionClosed);
        }
        if actor != self.turn {
            return Err(NegotiationError::NotYourTurn { expected: self.turn, got: actor });
        }
        match action {
            NegotiationAction::Propose { allocation } => {
                if self.history.len() >= self.config.max_offers {
                    return Err(NegotiationError::SessionClosed);
                }
                if !self.pot.contains(&allocation) {
                    return Err(NegotiationError::OverAllocation(allocation));
                }
                self.history.push(Offer { actor, allocation });
                self.turn = 1 - actor;
            }
            NegotiationAction::Accept => {
                let offer = *self.last_offer().ok_or(NegotiationError::NoOfferToAccept)?;
                let mut allocations = [Allocation::default(); 2];
                allocations[offer.actor] = offer.allocation;
                allocations[actor] = self.pot.remainder(&offer.allocation);
                let rewards = [deal_value(&allocations[0], &self.values[0]), deal_value(&allocations[1], &self.values[1])];
                self.outcome = Outcome::Accepted { proposer: offer.actor, allocations, rewards };
            }
            NegotiationAction::Reject => {
                self.outcome = Outcome::Rejected { by: actor };
            }
        }
        Ok(())
    }
}
