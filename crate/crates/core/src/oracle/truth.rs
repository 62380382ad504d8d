use serde::{Deserialize, Serialize};

use crate::game::{CommunicationGame, Objective};

use super::matrix::{best_response, uniform_over, StrategyProfile};
use super::{argmax, ActionChoice, OracleError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TruthBelief {
    Truthful,
    Lying,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruthInference {
    pub belief: TruthBelief,
    /// Listener's replies if it took the announcement at face value.
    pub credulous_replies: Vec<usize>,
    /// Announcer's payoff for each of its actions against those replies.
    pub announcer_values: Vec<f64>,
    /// Actions the announcer is predicted to actually play.
    pub predicted: Vec<usize>,
    /// Listener's best response to the predicted actions.
    pub response: ActionChoice,
}

/// Decide whether an announcement is honest, assuming the announcer expects
/// to be believed: the listener would best-respond to the announced action,
/// and the announcer then plays whatever maximizes its own reward against
/// that reply. The announcement is truthful when it is among those actions.
/// `objective` is the listener's.
pub fn infer_truthfulness(cg: &CommunicationGame, objective: &Objective) -> Result<TruthInference, OracleError> {
    let game = &cg.base;
    let announcer = cg.announcer;
    let listener = cg.listener();

    let mut credulous = StrategyProfile::uniform(game);
    credulous.set(announcer, uniform_over(game, announcer, &[cg.announcement]));
    let replies = best_response(game, listener, objective, &credulous)?.best;

    let mut against_replies = StrategyProfile::uniform(game);
    against_replies.set(listener, uniform_over(game, listener, &replies));
    let announcer_values = best_response(game, announcer, &Objective::max_own(announcer), &against_replies)?.values;
    let plans = argmax(&announcer_values);

    let (belief, predicted) = if plans.contains(&cg.announcement) {
        (TruthBelief::Truthful, vec![cg.announcement])
    } else {
        (TruthBelief::Lying, plans)
    };
    let mut actual = StrategyProfile::uniform(game);
    actual.set(announcer, uniform_over(game, announcer, &predicted));
    let response = best_response(game, listener, objective, &actual)?;
    Ok(TruthInference { belief, credulous_replies: replies, announcer_values, predicted, response })
}
