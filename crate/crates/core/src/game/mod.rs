//! Game representations shared by the oracle, the prompt compiler and the
//! evaluation harness.
//!
//! A [`Game`] is a finite normal-form stage: one ordered action list per
//! player and a dense payoff tensor stored row-major over action indices (the
//! last player's action varies fastest). Staged games are built from stages
//! with [`GameTree`]; hidden-state and communication variants wrap plain games.

mod hidden;
pub mod json;
mod objective;
mod tree;

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use hidden::{CommunicationGame, HiddenState, HiddenStateGame};
pub use objective::{Objective, ObjectiveKind};
pub use tree::{GameTree, StageNode};

/// One action index per player.
pub type Profile = Vec<usize>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GameError {
    #[error("player {player} lists action {action:?} more than once")]
    DuplicateAction { player: String, action: String },
    #[error("no payoff entry for profile ({0})")]
    MissingProfile(String),
    #[error("profile ({0}) has more than one payoff entry")]
    DuplicateProfile(String),
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("a game needs at least two players, got {0}")]
    TooFewPlayers(usize),
    #[error("player {0} has no actions")]
    NoActions(String),
    #[error("duplicate player name {0:?}")]
    DuplicatePlayer(String),
    #[error("unknown player {0:?}")]
    UnknownPlayer(String),
    #[error("player {player} has no action {action:?}")]
    UnknownAction { player: String, action: String },
    #[error("sequential games need two players and a mover order that is a permutation of them")]
    InvalidMoverOrder,
    #[error("daxity is only defined for two-player games")]
    DaxityNeedsTwoPlayers,
    #[error("profile path stops before reaching a terminal")]
    NonTerminalPath,
    #[error("continuation stage does not share the parent's players")]
    ContinuationPlayers,
    #[error("hidden-state priors must be positive and sum to 1")]
    InvalidPrior,
    #[error("hidden states disagree on players or action sets")]
    StateMismatch,
    #[error("malformed game document: {0}")]
    Document(String),
}

/// Reward for every player at one terminal, in player order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RewardVector(pub Vec<f64>);

impl RewardVector {
    pub fn new(values: impl Into<Vec<f64>>) -> Self {
        Self(values.into())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, player: usize) -> f64 {
        self.0[player]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// Componentwise weighted sum of reward vectors. All inputs must share a length.
    pub fn weighted_sum<'a>(items: impl IntoIterator<Item = (f64, &'a RewardVector)>) -> Option<Self> {
        let mut acc: Option<Vec<f64>> = None;
        for (w, v) in items {
            let acc = acc.get_or_insert_with(|| vec![0.0; v.len()]);
            for (a, x) in acc.iter_mut().zip(&v.0) {
                *a += w * x;
            }
        }
        acc.map(RewardVector)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    Simultaneous,
    /// Players move in `order`; later movers observe earlier moves.
    Sequential { order: Vec<usize> },
}

impl Mode {
    pub fn is_sequential(&self) -> bool {
        matches!(self, Mode::Sequential { .. })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Game {
    players: Vec<String>,
    actions: Vec<Vec<String>>,
    payoffs: Vec<RewardVector>,
    mode: Mode,
}

impl Game {
    /// Builds a game from payoff entries keyed by action labels, in any order.
    pub fn new<P, A, E, L>(players: P, actions: A, mode: Mode, entries: E) -> Result<Self, GameError>
    where
        P: IntoIterator,
        P::Item: Into<String>,
        A: IntoIterator,
        A::Item: IntoIterator,
        <A::Item as IntoIterator>::Item: Into<String>,
        E: IntoIterator<Item = (L, Vec<f64>)>,
        L: IntoIterator,
        L::Item: AsRef<str>,
    {
        let players: Vec<String> = players.into_iter().map(Into::into).collect();
        let actions: Vec<Vec<String>> = actions
            .into_iter()
            .map(|a| a.into_iter().map(Into::into).collect())
            .collect();
        let shape = Self::validate_shape(&players, &actions, &mode)?;
        let total: usize = shape.iter().product();
        let mut slots: Vec<Option<RewardVector>> = vec![None; total];
        for (labels, rewards) in entries {
            let labels: Vec<String> = labels.into_iter().map(|s| s.as_ref().to_string()).collect();
            if labels.len() != players.len() {
                return Err(GameError::LengthMismatch { expected: players.len(), got: labels.len() });
            }
            if rewards.len() != players.len() {
                return Err(GameError::LengthMismatch { expected: players.len(), got: rewards.len() });
            }
            let mut profile = Vec::with_capacity(labels.len());
            for (p, label) in labels.iter().enumerate() {
                let idx = actions[p].iter().position(|a| a == label).ok_or_else(|| GameError::UnknownAction {
                    player: players[p].clone(),
                    action: label.clone(),
                })?;
                profile.push(idx);
            }
            let slot = &mut slots[flat_index(&shape, &profile)];
            if slot.is_some() {
                return Err(GameError::DuplicateProfile(labels.join(",")));
            }
            *slot = Some(RewardVector(rewards));
        }
        let mut payoffs = Vec::with_capacity(total);
        for (i, slot) in slots.into_iter().enumerate() {
            match slot {
                Some(v) => payoffs.push(v),
                None => {
                    let profile = unflatten(&shape, i);
                    let labels: Vec<&str> =
                        profile.iter().enumerate().map(|(p, &a)| actions[p][a].as_str()).collect();
                    return Err(GameError::MissingProfile(labels.join(",")));
                }
            }
        }
        Ok(Self { players, actions, payoffs, mode })
    }

    /// Builds a game from payoffs already in row-major profile order.
    pub fn from_rows<P, A>(players: P, actions: A, mode: Mode, rows: Vec<Vec<f64>>) -> Result<Self, GameError>
    where
        P: IntoIterator,
        P::Item: Into<String>,
        A: IntoIterator,
        A::Item: IntoIterator,
        <A::Item as IntoIterator>::Item: Into<String>,
    {
        let players: Vec<String> = players.into_iter().map(Into::into).collect();
        let actions: Vec<Vec<String>> = actions
            .into_iter()
            .map(|a| a.into_iter().map(Into::into).collect())
            .collect();
        let shape = Self::validate_shape(&players, &actions, &mode)?;
        let total: usize = shape.iter().product();
        if rows.len() != total {
            if rows.len() < total {
                let profile = unflatten(&shape, rows.len());
                let labels: Vec<&str> = profile.iter().enumerate().map(|(p, &a)| actions[p][a].as_str()).collect();
                return Err(GameError::MissingProfile(labels.join(",")));
            }
            return Err(GameError::LengthMismatch { expected: total, got: rows.len() });
        }
        let mut payoffs = Vec::with_capacity(total);
        for r in rows {
            if r.len() != players.len() {
                return Err(GameError::LengthMismatch { expected: players.len(), got: r.len() });
            }
            payoffs.push(RewardVector(r));
        }
        Ok(Self { players, actions, payoffs, mode })
    }

    fn validate_shape(players: &[String], actions: &[Vec<String>], mode: &Mode) -> Result<Vec<usize>, GameError> {
        if players.len() < 2 {
            return Err(GameError::TooFewPlayers(players.len()));
        }
        let mut seen = HashSet::new();
        for p in players {
            if !seen.insert(p) {
                return Err(GameError::DuplicatePlayer(p.clone()));
            }
        }
        if actions.len() != players.len() {
            return Err(GameError::LengthMismatch { expected: players.len(), got: actions.len() });
        }
        for (p, acts) in actions.iter().enumerate() {
            if acts.is_empty() {
                return Err(GameError::NoActions(players[p].clone()));
            }
            let mut seen = HashSet::new();
            for a in acts {
                if !seen.insert(a) {
                    return Err(GameError::DuplicateAction { player: players[p].clone(), action: a.clone() });
                }
            }
        }
        if let Mode::Sequential { order } = mode {
            let mut sorted = order.clone();
            sorted.sort_unstable();
            if players.len() != 2 || sorted != (0..players.len()).collect::<Vec<_>>() {
                return Err(GameError::InvalidMoverOrder);
            }
        }
        Ok(actions.iter().map(Vec::len).collect())
    }

    pub fn players(&self) -> &[String] {
        &self.players
    }

    pub fn num_players(&self) -> usize {
        self.players.len()
    }

    pub fn player_name(&self, player: usize) -> &str {
        &self.players[player]
    }

    pub fn player_index(&self, name: &str) -> Option<usize> {
        self.players.iter().position(|p| p == name)
    }

    pub fn actions(&self, player: usize) -> &[String] {
        &self.actions[player]
    }

    pub fn all_actions(&self) -> &[Vec<String>] {
        &self.actions
    }

    pub fn action_index(&self, player: usize, label: &str) -> Option<usize> {
        self.actions[player].iter().position(|a| a == label)
    }

    pub fn mode(&self) -> &Mode {
        &self.mode
    }

    pub fn shape(&self) -> Vec<usize> {
        self.actions.iter().map(Vec::len).collect()
    }

    pub fn profile_count(&self) -> usize {
        self.payoffs.len()
    }

    pub fn payoffs(&self) -> &[RewardVector] {
        &self.payoffs
    }

    pub fn index_of(&self, profile: &[usize]) -> usize {
        flat_index(&self.shape(), profile)
    }

    pub fn profile_at(&self, index: usize) -> Profile {
        unflatten(&self.shape(), index)
    }

    pub fn reward(&self, profile: &[usize]) -> &RewardVector {
        &self.payoffs[self.index_of(profile)]
    }

    /// Reward vector for a completed profile; same as [`Game::reward`] but checked.
    pub fn joint_reward(&self, profile: &[usize]) -> Result<&RewardVector, GameError> {
        self.check_profile(profile)?;
        Ok(self.reward(profile))
    }

    pub fn check_profile(&self, profile: &[usize]) -> Result<(), GameError> {
        if profile.len() != self.num_players() {
            return Err(GameError::LengthMismatch { expected: self.num_players(), got: profile.len() });
        }
        for (p, &a) in profile.iter().enumerate() {
            if a >= self.actions[p].len() {
                return Err(GameError::UnknownAction { player: self.players[p].clone(), action: format!("#{a}") });
            }
        }
        Ok(())
    }

    pub fn check_action(&self, player: usize, action: usize) -> Result<(), GameError> {
        match self.actions.get(player) {
            None => Err(GameError::UnknownPlayer(format!("#{player}"))),
            Some(acts) if action >= acts.len() => {
                Err(GameError::UnknownAction { player: self.players[player].clone(), action: format!("#{action}") })
            }
            Some(_) => Ok(()),
        }
    }

    /// Row-major iterator over every joint profile.
    pub fn profiles(&self) -> impl Iterator<Item = Profile> + '_ {
        let shape = self.shape();
        (0..self.profile_count()).map(move |i| unflatten(&shape, i))
    }

    pub fn profile_labels(&self, profile: &[usize]) -> Vec<&str> {
        profile.iter().enumerate().map(|(p, &a)| self.actions[p][a].as_str()).collect()
    }

    pub fn parse_profile(&self, labels: &[&str]) -> Result<Profile, GameError> {
        if labels.len() != self.num_players() {
            return Err(GameError::LengthMismatch { expected: self.num_players(), got: labels.len() });
        }
        labels
            .iter()
            .enumerate()
            .map(|(p, l)| {
                self.action_index(p, l).ok_or_else(|| GameError::UnknownAction {
                    player: self.players[p].clone(),
                    action: l.to_string(),
                })
            })
            .collect()
    }

    /// Same players and actions with the payoff at `index` replaced.
    pub fn with_payoff(&self, index: usize, rewards: RewardVector) -> Self {
        let mut g = self.clone();
        g.payoffs[index] = rewards;
        g
    }

    pub fn with_mode(&self, mode: Mode) -> Result<Self, GameError> {
        Self::validate_shape(&self.players, &self.actions, &mode)?;
        let mut g = self.clone();
        g.mode = mode;
        Ok(g)
    }

    pub fn with_players<P>(&self, players: P) -> Result<Self, GameError>
    where
        P: IntoIterator,
        P::Item: Into<String>,
    {
        let players: Vec<String> = players.into_iter().map(Into::into).collect();
        Self::validate_shape(&players, &self.actions, &self.mode)?;
        let mut g = self.clone();
        g.players = players;
        Ok(g)
    }

    /// Relabels actions; `labels` must match the current shape.
    pub fn with_action_labels(&self, labels: Vec<Vec<String>>) -> Result<Self, GameError> {
        if labels.iter().map(Vec::len).collect::<Vec<_>>() != self.shape() {
            return Err(GameError::LengthMismatch { expected: self.profile_count(), got: labels.iter().map(Vec::len).product() });
        }
        Self::validate_shape(&self.players, &labels, &self.mode)?;
        let mut g = self.clone();
        g.actions = labels;
        Ok(g)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        let mut g = self.clone();
        for v in &mut g.payoffs {
            for x in &mut v.0 {
                *x *= factor;
            }
        }
        g
    }

    /// Other players in index order.
    pub fn opponents(&self, player: usize) -> Vec<usize> {
        (0..self.num_players()).filter(|&p| p != player).collect()
    }
}

impl fmt::Display for Game {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for profile in self.profiles() {
            let labels = self.profile_labels(&profile).join(",");
            writeln!(f, "({labels}) -> {:?}", self.reward(&profile).0)?;
        }
        Ok(())
    }
}

pub(crate) fn flat_index(shape: &[usize], profile: &[usize]) -> usize {
    profile.iter().zip(shape).fold(0, |acc, (&a, &n)| acc * n + a)
}

pub(crate) fn unflatten(shape: &[usize], mut index: usize) -> Profile {
    let mut out = vec![0; shape.len()];
    for (slot, &n) in out.iter_mut().zip(shape).rev() {
        *slot = index % n;
        index /= n;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn demo() -> Game {
        Game::from_rows(
            ["Gopher", "Bob"],
            [["a1", "a2"], ["b1", "b2"]],
            Mode::Simultaneous,
            vec![vec![8.0, 7.0], vec![6.0, 5.0], vec![4.0, 3.0], vec![2.0, 1.0]],
        )
        .unwrap()
    }

    #[test]
    fn entries_are_normalized_to_row_major() {
        let g = Game::new(
            ["Gopher", "Bob"],
            [["a1", "a2"], ["b1", "b2"]],
            Mode::Simultaneous,
            vec![
                (vec!["a2", "b2"], vec![2.0, 1.0]),
                (vec!["a1", "b1"], vec![8.0, 7.0]),
                (vec!["a2", "b1"], vec![4.0, 3.0]),
                (vec!["a1", "b2"], vec![6.0, 5.0]),
            ],
        )
        .unwrap();
        assert_eq!(g, demo());
        assert_eq!(g.reward(&[0, 0]).0, vec![8.0, 7.0]);
    }

    #[test]
    fn single_action_game_is_valid() {
        let g = Game::from_rows(["x", "y"], [["a"], ["b"]], Mode::Simultaneous, vec![vec![1.0, 2.0]]).unwrap();
        assert_eq!(g.profile_count(), 1);
    }

    #[test]
    fn missing_profile_is_reported() {
        let entries: Vec<(Vec<&str>, Vec<f64>)> = (0..7)
            .map(|i| {
                let l = |b: usize, s: [&'static str; 2]| s[(i >> b) & 1];
                (vec![l(2, ["a1", "a2"]), l(1, ["b1", "b2"]), l(0, ["c1", "c2"])], vec![0.0, 0.0, 0.0])
            })
            .collect();
        let err = Game::new(
            ["A", "B", "C"],
            [["a1", "a2"], ["b1", "b2"], ["c1", "c2"]],
            Mode::Simultaneous,
            entries,
        )
        .unwrap_err();
        assert_eq!(err, GameError::MissingProfile("a2,b2,c2".into()));
    }

    #[test]
    fn duplicate_actions_and_bad_lengths() {
        let err = Game::from_rows(["x", "y"], [vec!["a", "a"], vec!["b"]], Mode::Simultaneous, vec![]).unwrap_err();
        assert!(matches!(err, GameError::DuplicateAction { .. }));
        let err = Game::from_rows(["x", "y"], [["a"], ["b"]], Mode::Simultaneous, vec![vec![1.0]]).unwrap_err();
        assert_eq!(err, GameError::LengthMismatch { expected: 2, got: 1 });
    }

    #[test]
    fn sequential_needs_a_permutation() {
        let g = demo();
        assert!(g.with_mode(Mode::Sequential { order: vec![0, 1] }).is_ok());
        assert_eq!(g.with_mode(Mode::Sequential { order: vec![0, 0] }).unwrap_err(), GameError::InvalidMoverOrder);
    }

    #[test]
    fn joint_reward_checks_profile() {
        let g = demo();
        assert_eq!(g.joint_reward(&[0, 0]).unwrap().0, vec![8.0, 7.0]);
        assert!(g.joint_reward(&[0, 5]).is_err());
    }

    #[test]
    fn profile_index_round_trip() {
        let shape = [3, 4, 2];
        for i in 0..24 {
            assert_eq!(flat_index(&shape, &unflatten(&shape, i)), i);
        }
    }
}
