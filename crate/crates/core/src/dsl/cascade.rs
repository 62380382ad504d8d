use serde::{Deserialize, Serialize};

use crate::compiler::{build_demo_set, build_level_n_demo_set, parse_predicted_set, DemoStyle, Problem};
use crate::game::{Game, GameTree, Objective};
use crate::gateway::{answer_with_action, CompletionBackend};
use crate::oracle::solve_level_k;

use super::DslError;

pub const MAX_CASCADE_LEVELS: usize = 3;

/// Tokens allowed for one level's reasoning.
const LEVEL_TOKENS: u32 = 1024;

/// Who answers one level of a cascade.
#[derive(Clone, Copy)]
pub enum LevelBackend<'a> {
    Oracle,
    Model(&'a dyn CompletionBackend),
}

pub struct CascadeConfig<'a> {
    pub levels: usize,
    pub max_levels: usize,
    /// One backend per level, or a single backend used for every level.
    pub backends: Vec<LevelBackend<'a>>,
}

impl<'a> CascadeConfig<'a> {
    pub fn new(levels: usize, backend: LevelBackend<'a>) -> Self {
        Self { levels, max_levels: MAX_CASCADE_LEVELS, backends: vec![backend] }
    }

    fn backend(&self, stage: usize) -> LevelBackend<'a> {
        if self.backends.len() == 1 {
            self.backends[0]
        } else {
            self.backends[stage]
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CascadeStage {
    pub player: usize,
    pub level: usize,
    /// Actions this stage predicts its player will play.
    pub predicted: Vec<usize>,
    pub prompt: Option<String>,
    pub response: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CascadeOutcome {
    pub action: String,
    pub stages: Vec<CascadeStage>,
    /// Model contexts opened across all stages.
    pub contexts: usize,
}

/// Iterated reasoning as a chain of contexts. Stage 1 solves a level-1
/// problem for the player at the bottom of the chain; each later stage is
/// told what the previous stage's player will do and best-responds to it,
/// alternating players until the top level answers for `player`.
pub fn run_cascade(
    game: &Game,
    player: usize,
    objectives: &[Objective],
    config: &CascadeConfig,
) -> Result<CascadeOutcome, DslError> {
    if game.num_players() != 2 {
        return Err(DslError::BadArgument("cascades are two-player".into()));
    }
    if config.levels == 0 || config.levels > config.max_levels {
        return Err(DslError::TooManyLevels { got: config.levels, max: config.max_levels });
    }
    if config.backends.len() != 1 && config.backends.len() != config.levels {
        return Err(DslError::BadArgument(format!("{} backends for {} levels", config.backends.len(), config.levels)));
    }
    let cap = config.levels * (1 + game.all_actions().iter().map(Vec::len).sum::<usize>());
    let mut stages: Vec<CascadeStage> = Vec::new();
    let mut contexts = 0;
    for stage in 0..config.levels {
        let level = stage + 1;
        let who = if (config.levels - level).is_multiple_of(2) { player } else { 1 - player };
        let (predicted, prompt, response) = match config.backend(stage) {
            LevelBackend::Oracle => (solve_level_k(game, who, level, objectives)?.best, None, None),
            LevelBackend::Model(backend) => {
                contexts += 1;
                if contexts > cap {
                    return Err(DslError::DepthExceeded(cap));
                }
                let set = match stages.last() {
                    None => {
                        let problem = Problem::Game {
                            tree: GameTree::flat(game.clone()),
                            player: who,
                            objectives: objectives.to_vec(),
                            opponent_level: 0,
                        };
                        build_demo_set(&problem, DemoStyle::Strategic)?
                    }
                    Some(prev) => {
                        let mut given = vec![Vec::new(); 2];
                        given[prev.player] = prev.predicted.clone();
                        build_level_n_demo_set(game, who, objectives, &given)?
                    }
                };
                let prompt = set.flatten();
                let marker = format!("{}'s action:", game.player_name(who));
                let valid = game.actions(who);
                let answer = answer_with_action(backend, &prompt, &marker, valid, LEVEL_TOKENS)?;
                let predicted = match parse_predicted_set(&answer.reasoning, valid) {
                    Some(labels) => labels.iter().filter_map(|l| game.action_index(who, l)).collect(),
                    None => vec![game.action_index(who, &answer.action.action).expect("constrained to valid")],
                };
                (predicted, Some(prompt), Some(format!("{}{}{}", answer.reasoning, marker, answer.tail)))
            }
        };
        stages.push(CascadeStage { player: who, level, predicted, prompt, response });
    }
    let top = stages.last().expect("at least one level");
    Ok(CascadeOutcome { action: game.actions(player)[top.predicted[0]].clone(), stages, contexts })
}
