//! Exact brute-force solutions for every decision problem the toolkit poses.
//!
//! The oracle is the ground truth for accuracy metrics and the backend for
//! oracle-served `search` calls. Opponent ties are always resolved as a
//! uniform distribution over the opponent's argmax set.

mod belief;
mod fair;
mod matrix;
mod tree;
mod truth;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::game::GameError;

pub use belief::{best_response_under_belief, hidden_state_posterior, StatePosterior};
pub use fair::{deal_value, enumerate_allocations, fairness_gap, optimal_fair_deal, FairDeal, Fairness, MAX_ENUMERATION};
pub use matrix::{best_response, expected_values, level0, solve_level_k, uniform_over, StrategyProfile};
pub use tree::{solve_tree, solve_tree_outcome, TreeSolution};
pub use truth::{infer_truthfulness, TruthBelief, TruthInference};

/// Absolute tolerance for argmax membership.
pub const TIE_EPS: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error(transparent)]
    Game(#[from] GameError),
    #[error("opponent {0} has an empty or non-positive distribution")]
    EmptySupport(usize),
    #[error("game tree deeper than {0} stages")]
    CycleDetected(usize),
    #[error("{0}")]
    Unsupported(String),
    #[error("allocation enumeration of {0} splits exceeds the guard")]
    EnumerationTooLarge(u128),
}

/// The best actions of one player and the value of every action.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActionChoice {
    pub player: usize,
    pub actions: Vec<String>,
    pub values: Vec<f64>,
    /// Indices of the argmax set, ascending.
    pub best: Vec<usize>,
}

impl ActionChoice {
    pub fn from_values(player: usize, actions: Vec<String>, values: Vec<f64>) -> Self {
        let best = argmax(&values);
        Self { player, actions, values, best }
    }

    pub fn best_labels(&self) -> Vec<&str> {
        self.best.iter().map(|&i| self.actions[i].as_str()).collect()
    }

    /// Lowest-index member of the argmax set.
    pub fn first_best(&self) -> usize {
        self.best[0]
    }

    pub fn first_best_label(&self) -> &str {
        &self.actions[self.best[0]]
    }

    pub fn value_of(&self, label: &str) -> Option<f64> {
        self.actions.iter().position(|a| a == label).map(|i| self.values[i])
    }

    pub fn is_best(&self, label: &str) -> bool {
        self.actions.iter().position(|a| a == label).is_some_and(|i| self.best.contains(&i))
    }

    pub fn best_value(&self) -> f64 {
        self.values[self.best[0]]
    }
}

/// Indices whose value is within [`TIE_EPS`] of the maximum.
pub fn argmax(values: &[f64]) -> Vec<usize> {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    values.iter().enumerate().filter(|(_, &v)| (max - v).abs() <= TIE_EPS).map(|(i, _)| i).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn argmax_keeps_ties() {
        assert_eq!(argmax(&[1.0, 3.0, 3.0 - 1e-12, 2.0]), vec![1, 2]);
        assert_eq!(argmax(&[0.0]), vec![0]);
    }
}
