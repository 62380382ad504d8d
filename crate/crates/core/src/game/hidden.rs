use super::{Game, GameError};

#[derive(Debug, Clone, PartialEq)]
pub struct HiddenState {
    pub label: String,
    pub prior: f64,
    pub game: Game,
}

/// A game whose payoffs depend on a world state the observer cannot see.
/// The informed player sees the state and moves first; the observer sees
/// the informed player's action.
#[derive(Debug, Clone, PartialEq)]
pub struct HiddenStateGame {
    states: Vec<HiddenState>,
    pub observer: usize,
    pub informed: usize,
}

impl HiddenStateGame {
    pub fn new(states: Vec<HiddenState>, observer: usize, informed: usize) -> Result<Self, GameError> {
        let first = states.first().ok_or(GameError::InvalidPrior)?;
        let n = first.game.num_players();
        if observer >= n || informed >= n || observer == informed {
            return Err(GameError::UnknownPlayer(format!("#{observer}/#{informed}")));
        }
        for s in &states {
            if s.game.players() != first.game.players() || s.game.all_actions() != first.game.all_actions() {
                return Err(GameError::StateMismatch);
            }
            if s.prior.is_nan() || s.prior <= 0.0 {
                return Err(GameError::InvalidPrior);
            }
        }
        let total: f64 = states.iter().map(|s| s.prior).sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(GameError::InvalidPrior);
        }
        Ok(Self { states, observer, informed })
    }

    /// Equal prior over the given per-state games.
    pub fn uniform(states: Vec<(String, Game)>, observer: usize, informed: usize) -> Result<Self, GameError> {
        let w = 1.0 / states.len().max(1) as f64;
        Self::new(
            states.into_iter().map(|(label, game)| HiddenState { label, prior: w, game }).collect(),
            observer,
            informed,
        )
    }

    pub fn states(&self) -> &[HiddenState] {
        &self.states
    }

    /// Game of the first state; players and action sets are shared by all states.
    pub fn reference(&self) -> &Game {
        &self.states[0].game
    }
}

/// A two-player game where one player announces an intended action before play.
#[derive(Debug, Clone, PartialEq)]
pub struct CommunicationGame {
    pub base: Game,
    pub announcer: usize,
    pub announcement: usize,
}

impl CommunicationGame {
    pub fn new(base: Game, announcer: usize, announcement: &str) -> Result<Self, GameError> {
        if base.num_players() != 2 {
            return Err(GameError::LengthMismatch { expected: 2, got: base.num_players() });
        }
        if announcer >= 2 {
            return Err(GameError::UnknownPlayer(format!("#{announcer}")));
        }
        let announcement = base.action_index(announcer, announcement).ok_or_else(|| GameError::UnknownAction {
            player: base.player_name(announcer).to_string(),
            action: announcement.to_string(),
        })?;
        Ok(Self { base, announcer, announcement })
    }

    pub fn listener(&self) -> usize {
        1 - self.announcer
    }

    pub fn announcement_label(&self) -> &str {
        &self.base.actions(self.announcer)[self.announcement]
    }
}
