use std::fmt;

use serde::{Deserialize, Serialize};

use super::{GameError, RewardVector};

/// How a player scalarizes a reward vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum ObjectiveKind {
    MaxOwn,
    /// Maximize another player's reward.
    HelpOther { other: usize },
    Welfare,
    /// Own reward minus the opponent's; two-player games only.
    Daxity,
    Custom { weights: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Objective {
    #[serde(flatten)]
    pub kind: ObjectiveKind,
    pub owner: usize,
}

impl Objective {
    pub fn max_own(owner: usize) -> Self {
        Self { kind: ObjectiveKind::MaxOwn, owner }
    }

    pub fn help(owner: usize, other: usize) -> Self {
        Self { kind: ObjectiveKind::HelpOther { other }, owner }
    }

    pub fn welfare(owner: usize) -> Self {
        Self { kind: ObjectiveKind::Welfare, owner }
    }

    pub fn daxity(owner: usize) -> Self {
        Self { kind: ObjectiveKind::Daxity, owner }
    }

    pub fn custom(owner: usize, weights: Vec<f64>) -> Self {
        Self { kind: ObjectiveKind::Custom { weights }, owner }
    }

    /// Objective for every player of an `n`-player game, all maximizing their own reward.
    pub fn all_max(n: usize) -> Vec<Self> {
        (0..n).map(Self::max_own).collect()
    }

    pub fn apply(&self, rewards: &RewardVector) -> Result<f64, GameError> {
        let n = rewards.len();
        if self.owner >= n {
            return Err(GameError::LengthMismatch { expected: self.owner + 1, got: n });
        }
        Ok(match &self.kind {
            ObjectiveKind::MaxOwn => rewards.get(self.owner),
            ObjectiveKind::HelpOther { other } => {
                if *other >= n {
                    return Err(GameError::LengthMismatch { expected: other + 1, got: n });
                }
                rewards.get(*other)
            }
            ObjectiveKind::Welfare => rewards.as_slice().iter().sum(),
            ObjectiveKind::Daxity => {
                if n != 2 {
                    return Err(GameError::DaxityNeedsTwoPlayers);
                }
                rewards.get(self.owner) - rewards.get(1 - self.owner)
            }
            ObjectiveKind::Custom { weights } => {
                if weights.len() != n {
                    return Err(GameError::LengthMismatch { expected: n, got: weights.len() });
                }
                weights.iter().zip(rewards.as_slice()).map(|(w, r)| w * r).sum()
            }
        })
    }

    /// Short keyword used in tool calls and CLI flags.
    pub fn keyword(&self) -> &'static str {
        match self.kind {
            ObjectiveKind::MaxOwn => "max",
            ObjectiveKind::HelpOther { .. } => "help",
            ObjectiveKind::Welfare => "welfare",
            ObjectiveKind::Daxity => "daxity",
            ObjectiveKind::Custom { .. } => "custom",
        }
    }

    /// Inverse of [`Objective::keyword`]; `help` targets the other player of a two-player game.
    pub fn from_keyword(keyword: &str, owner: usize, num_players: usize) -> Option<Self> {
        match keyword {
            "max" => Some(Self::max_own(owner)),
            "help" if num_players == 2 => Some(Self::help(owner, 1 - owner)),
            "welfare" => Some(Self::welfare(owner)),
            "daxity" => Some(Self::daxity(owner)),
            _ => None,
        }
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v() -> RewardVector {
        RewardVector::new(vec![8.0, 7.0])
    }

    #[test]
    fn scalarizations() {
        assert_eq!(Objective::daxity(0).apply(&v()).unwrap(), 1.0);
        assert_eq!(Objective::welfare(0).apply(&v()).unwrap(), 15.0);
        assert_eq!(Objective::help(0, 1).apply(&v()).unwrap(), 7.0);
        assert_eq!(Objective::max_own(1).apply(&v()).unwrap(), 7.0);
        assert_eq!(Objective::custom(0, vec![0.5, 2.0]).apply(&v()).unwrap(), 18.0);
    }

    #[test]
    fn daxity_rejects_three_players() {
        let r = RewardVector::new(vec![1.0, 2.0, 3.0]);
        assert_eq!(Objective::daxity(0).apply(&r).unwrap_err(), GameError::DaxityNeedsTwoPlayers);
    }

    #[test]
    fn custom_weights_must_match() {
        assert!(Objective::custom(0, vec![1.0]).apply(&v()).is_err());
    }

    #[test]
    fn welfare_is_sum_of_own_rewards() {
        let r = RewardVector::new(vec![3.0, -4.0, 2.5]);
        let total: f64 = (0..3).map(|p| Objective::max_own(p).apply(&r).unwrap()).sum();
        assert_eq!(Objective::welfare(1).apply(&r).unwrap(), total);
    }
}
