use serde::{Deserialize, Serialize};

use crate::game::{HiddenStateGame, Objective};

use super::matrix::level0;
use super::{ActionChoice, OracleError};

/// Probability of each hidden world state, in the game's state order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatePosterior {
    pub labels: Vec<String>,
    pub probs: Vec<f64>,
    /// Whether the observed action was naive-optimal for the informed player in each state.
    pub consistent: Vec<bool>,
}

impl StatePosterior {
    pub fn prob(&self, label: &str) -> Option<f64> {
        self.labels.iter().position(|l| l == label).map(|i| self.probs[i])
    }

    /// States carrying positive mass, in state order.
    pub fn support(&self) -> Vec<&str> {
        self.labels.iter().zip(&self.probs).filter(|(_, &p)| p > 0.0).map(|(l, _)| l.as_str()).collect()
    }
}

/// Posterior over states given the informed player's action. A state is
/// consistent when the action is in the informed player's naive argmax set
/// there (own-reward maximization). With no consistent state the prior is returned.
pub fn hidden_state_posterior(hs: &HiddenStateGame, observed: usize) -> Result<StatePosterior, OracleError> {
    let informed = hs.informed;
    let objective = Objective::max_own(informed);
    let mut consistent = Vec::with_capacity(hs.states().len());
    for s in hs.states() {
        s.game.check_action(informed, observed)?;
        consistent.push(level0(&s.game, informed, &objective)?.best.contains(&observed));
    }
    let weights: Vec<f64> =
        hs.states().iter().zip(&consistent).map(|(s, &c)| if c { s.prior } else { 0.0 }).collect();
    let total: f64 = weights.iter().sum();
    let probs = if total > 0.0 {
        weights.iter().map(|w| w / total).collect()
    } else {
        hs.states().iter().map(|s| s.prior).collect()
    };
    Ok(StatePosterior { labels: hs.states().iter().map(|s| s.label.clone()).collect(), probs, consistent })
}

/// Observer's best response given the informed player's observed action,
/// averaging the objective over states by posterior weight.
pub fn best_response_under_belief(
    hs: &HiddenStateGame,
    posterior: &StatePosterior,
    observed: usize,
    objective: &Objective,
) -> Result<ActionChoice, OracleError> {
    let reference = hs.reference();
    if reference.num_players() != 2 {
        return Err(OracleError::Unsupported("hidden-state games are two-player".into()));
    }
    let observer = hs.observer;
    let n = reference.actions(observer).len();
    let mut values = vec![0.0; n];
    for (s, &p) in hs.states().iter().zip(&posterior.probs) {
        if p == 0.0 {
            continue;
        }
        for (a, v) in values.iter_mut().enumerate() {
            let mut profile = vec![0; 2];
            profile[observer] = a;
            profile[hs.informed] = observed;
            *v += p * objective.apply(s.game.reward(&profile))?;
        }
    }
    Ok(ActionChoice::from_values(observer, reference.actions(observer).to_vec(), values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{Game, HiddenState, Mode};
    use crate::oracle::{best_response, uniform_over, StrategyProfile};

    // Informed player is Gopher (0), observer is Bob (1).
    fn state(rows: Vec<Vec<f64>>) -> Game {
        Game::from_rows(["Gopher", "Bob"], [["a1", "a2"], ["b1", "b2"]], Mode::Simultaneous, rows).unwrap()
    }

    fn a1_good() -> Game {
        state(vec![vec![5.0, 1.0], vec![5.0, 3.0], vec![0.0, 2.0], vec![0.0, 0.0]])
    }

    fn a2_good() -> Game {
        state(vec![vec![0.0, 0.0], vec![0.0, 4.0], vec![5.0, 2.0], vec![5.0, 1.0]])
    }

    #[test]
    fn unique_consistency_gives_point_mass() {
        let hs = HiddenStateGame::uniform(vec![("hearts".into(), a1_good()), ("spades".into(), a2_good())], 1, 0).unwrap();
        let post = hidden_state_posterior(&hs, 0).unwrap();
        assert_eq!(post.probs, vec![1.0, 0.0]);
        let br = best_response_under_belief(&hs, &post, 0, &Objective::max_own(1)).unwrap();
        let mut p = StrategyProfile::uniform(&a1_good());
        p.set(0, uniform_over(&a1_good(), 0, &[0]));
        assert_eq!(br.best, best_response(&a1_good(), 1, &Objective::max_own(1), &p).unwrap().best);
        assert_eq!(br.best_labels(), vec!["b2"]);
    }

    #[test]
    fn uninformative_evidence_keeps_prior() {
        let hs = HiddenStateGame::uniform(vec![("x".into(), a1_good()), ("y".into(), a1_good())], 1, 0).unwrap();
        assert_eq!(hidden_state_posterior(&hs, 0).unwrap().probs, vec![0.5, 0.5]);
    }

    #[test]
    fn inconsistent_evidence_falls_back_to_prior() {
        let hs = HiddenStateGame::new(
            vec![
                HiddenState { label: "x".into(), prior: 0.25, game: a1_good() },
                HiddenState { label: "y".into(), prior: 0.75, game: a1_good() },
            ],
            1,
            0,
        )
        .unwrap();
        let post = hidden_state_posterior(&hs, 1).unwrap();
        assert_eq!(post.probs, vec![0.25, 0.75]);
        assert_eq!(post.consistent, vec![false, false]);
    }

    #[test]
    fn three_states_two_consistent() {
        let hs = HiddenStateGame::uniform(
            vec![("x".into(), a1_good()), ("y".into(), a2_good()), ("z".into(), a1_good())],
            1,
            0,
        )
        .unwrap();
        let post = hidden_state_posterior(&hs, 0).unwrap();
        assert_eq!(post.probs, vec![0.5, 0.0, 0.5]);
        assert_eq!(post.support(), vec!["x", "z"]);
    }
}
