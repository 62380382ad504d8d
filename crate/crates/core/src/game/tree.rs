use std::collections::BTreeMap;

use super::{Game, GameError, Profile, RewardVector};

/// One stage of a staged game. Profiles absent from `continuations` are terminal
/// and pay the stage's own payoffs.
#[derive(Debug, Clone, PartialEq)]
pub struct StageNode {
    pub game: Game,
    pub continuations: BTreeMap<Profile, StageNode>,
}

impl StageNode {
    pub fn leaf(game: Game) -> Self {
        Self { game, continuations: BTreeMap::new() }
    }

    pub fn with_continuation(mut self, profile: Profile, next: StageNode) -> Result<Self, GameError> {
        self.game.check_profile(&profile)?;
        if next.game.players() != self.game.players() {
            return Err(GameError::ContinuationPlayers);
        }
        self.continuations.insert(profile, next);
        Ok(self)
    }

    pub fn depth(&self) -> usize {
        1 + self.continuations.values().map(StageNode::depth).max().unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GameTree {
    pub root: StageNode,
}

impl GameTree {
    pub fn new(root: StageNode) -> Result<Self, GameError> {
        fn check(node: &StageNode) -> Result<(), GameError> {
            for (profile, next) in &node.continuations {
                node.game.check_profile(profile)?;
                if next.game.players() != node.game.players() {
                    return Err(GameError::ContinuationPlayers);
                }
                check(next)?;
            }
            Ok(())
        }
        check(&root)?;
        Ok(Self { root })
    }

    pub fn flat(game: Game) -> Self {
        Self { root: StageNode::leaf(game) }
    }

    pub fn is_flat(&self) -> bool {
        self.root.continuations.is_empty()
    }

    pub fn num_players(&self) -> usize {
        self.root.game.num_players()
    }

    /// Reward at the terminal reached by following one profile per stage.
    pub fn joint_reward(&self, path: &[Profile]) -> Result<RewardVector, GameError> {
        let mut node = &self.root;
        let mut steps = path.iter();
        loop {
            let profile = steps.next().ok_or(GameError::NonTerminalPath)?;
            node.game.check_profile(profile)?;
            match node.continuations.get(profile) {
                Some(next) => node = next,
                None => {
                    if steps.next().is_some() {
                        return Err(GameError::LengthMismatch { expected: 0, got: 1 });
                    }
                    return Ok(node.game.reward(profile).clone());
                }
            }
        }
    }
}

impl From<Game> for GameTree {
    fn from(game: Game) -> Self {
        Self::flat(game)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::Mode;

    fn stage(base: f64) -> Game {
        Game::from_rows(
            ["Gopher", "Bob"],
            [["a1", "a2"], ["b1", "b2"]],
            Mode::Simultaneous,
            (0..4).map(|i| vec![base - i as f64, base - 1.0 - i as f64]).collect(),
        )
        .unwrap()
    }

    #[test]
    fn joint_reward_follows_continuations() {
        let tree = GameTree::new(
            StageNode::leaf(stage(8.0)).with_continuation(vec![1, 1], StageNode::leaf(stage(4.0))).unwrap(),
        )
        .unwrap();
        assert_eq!(tree.joint_reward(&[vec![0, 0]]).unwrap().0, vec![8.0, 7.0]);
        assert_eq!(tree.joint_reward(&[vec![1, 1], vec![0, 1]]).unwrap().0, vec![3.0, 2.0]);
        assert_eq!(tree.joint_reward(&[vec![1, 1]]).unwrap_err(), GameError::NonTerminalPath);
        assert_eq!(tree.root.depth(), 2);
    }

    #[test]
    fn factored_demo_reward() {
        let g = Game::from_rows(
            ["Gopher", "Bob"],
            [["a1", "a2"], ["b1", "b2"]],
            Mode::Simultaneous,
            vec![vec![-3.0, -2.0], vec![-1.0, -4.0], vec![1.0, 2.0], vec![3.0, 4.0]],
        )
        .unwrap();
        assert_eq!(GameTree::flat(g).joint_reward(&[vec![1, 1]]).unwrap().0, vec![3.0, 4.0]);
    }
}
