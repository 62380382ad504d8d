use crate::game::{Game, GameTree, Mode, Objective, RewardVector, StageNode};

use super::matrix::{best_response, solve_level_k, uniform_over, StrategyProfile};
use super::{argmax, ActionChoice, OracleError};

const MAX_STAGES: usize = 64;

/// Solution of one stage after its continuations have been folded in.
#[derive(Debug, Clone, PartialEq)]
pub struct TreeSolution {
    pub choice: ActionChoice,
    /// Stage game with every continued profile replaced by its subgame value.
    pub reduced: Game,
    /// Expected reward vector when the stage is played out.
    pub outcome: RewardVector,
    /// For sequential stages where the solved player moves first: the
    /// opponent's reply set for each of the player's actions.
    pub replies: Option<Vec<Vec<usize>>>,
}

/// Backward induction over a staged game for `player`, with opponents
/// modeled at `opponent_level` in simultaneous stages.
pub fn solve_tree(
    tree: &GameTree,
    player: usize,
    objectives: &[Objective],
    opponent_level: usize,
) -> Result<ActionChoice, OracleError> {
    Ok(solve_tree_outcome(tree, player, objectives, opponent_level)?.choice)
}

pub fn solve_tree_outcome(
    tree: &GameTree,
    player: usize,
    objectives: &[Objective],
    opponent_level: usize,
) -> Result<TreeSolution, OracleError> {
    solve_stage(&tree.root, player, objectives, opponent_level, 0)
}

pub(crate) fn solve_stage(
    node: &StageNode,
    player: usize,
    objectives: &[Objective],
    opponent_level: usize,
    depth: usize,
) -> Result<TreeSolution, OracleError> {
    if depth >= MAX_STAGES {
        return Err(OracleError::CycleDetected(MAX_STAGES));
    }
    let mut reduced = node.game.clone();
    for (profile, next) in &node.continuations {
        let sub = solve_stage(next, player, objectives, opponent_level, depth + 1)?;
        reduced = reduced.with_payoff(reduced.index_of(profile), sub.outcome);
    }
    match reduced.mode().clone() {
        Mode::Sequential { order } if order[0] == player => leader_solution(reduced, player, objectives),
        _ => simultaneous_solution(reduced, player, objectives, opponent_level),
    }
}

fn simultaneous_solution(
    reduced: Game,
    player: usize,
    objectives: &[Objective],
    opponent_level: usize,
) -> Result<TreeSolution, OracleError> {
    let mut profile = StrategyProfile::uniform(&reduced);
    for q in reduced.opponents(player) {
        let opp = solve_level_k(&reduced, q, opponent_level, objectives)?;
        profile.set(q, uniform_over(&reduced, q, &opp.best));
    }
    let choice = best_response(&reduced, player, &objectives[player], &profile)?;
    profile.set(player, uniform_over(&reduced, player, &choice.best));
    let outcome = expected_outcome(&reduced, &profile);
    Ok(TreeSolution { choice, reduced, outcome, replies: None })
}

/// Player moves first; the follower observes and best-responds with its own objective.
fn leader_solution(reduced: Game, player: usize, objectives: &[Objective]) -> Result<TreeSolution, OracleError> {
    let follower = 1 - player;
    let n_own = reduced.actions(player).len();
    let n_opp = reduced.actions(follower).len();
    let mut replies = Vec::with_capacity(n_own);
    let mut values = Vec::with_capacity(n_own);
    for a in 0..n_own {
        let mut follower_values = Vec::with_capacity(n_opp);
        for b in 0..n_opp {
            follower_values.push(objectives[follower].apply(reduced.reward(&pair(player, a, b)))?);
        }
        let reply = argmax(&follower_values);
        let mut v = 0.0;
        for &b in &reply {
            v += objectives[player].apply(reduced.reward(&pair(player, a, b)))?;
        }
        values.push(v / reply.len() as f64);
        replies.push(reply);
    }
    let choice = ActionChoice::from_values(player, reduced.actions(player).to_vec(), values);
    let mut parts = Vec::new();
    let wa = 1.0 / choice.best.len() as f64;
    for &a in &choice.best {
        let wb = wa / replies[a].len() as f64;
        for &b in &replies[a] {
            parts.push((wb, reduced.reward(&pair(player, a, b)).clone()));
        }
    }
    let outcome = RewardVector::weighted_sum(parts.iter().map(|(w, r)| (*w, r))).expect("nonempty argmax");
    Ok(TreeSolution { choice, reduced, outcome, replies: Some(replies) })
}

fn pair(player: usize, own: usize, other: usize) -> Vec<usize> {
    if player == 0 {
        vec![own, other]
    } else {
        vec![other, own]
    }
}

fn expected_outcome(game: &Game, profile: &StrategyProfile) -> RewardVector {
    let norms: Vec<f64> = profile.0.iter().map(|d| d.iter().sum()).collect();
    let mut parts = Vec::new();
    for prof in game.profiles() {
        let w: f64 = prof.iter().enumerate().map(|(q, &a)| profile.0[q][a] / norms[q]).product();
        if w > 0.0 {
            parts.push((w, game.reward(&prof).clone()));
        }
    }
    RewardVector::weighted_sum(parts.iter().map(|(w, r)| (*w, r))).expect("some profile has positive weight")
}
