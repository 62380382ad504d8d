use crate::game::{Game, Objective};

use super::{ActionChoice, OracleError};

/// One action distribution per player. The responding player's entry is ignored.
#[derive(Debug, Clone, PartialEq)]
pub struct StrategyProfile(pub Vec<Vec<f64>>);

impl StrategyProfile {
    pub fn uniform(game: &Game) -> Self {
        Self((0..game.num_players()).map(|p| vec![1.0; game.actions(p).len()]).collect())
    }

    pub fn set(&mut self, player: usize, dist: Vec<f64>) {
        self.0[player] = dist;
    }
}

/// Uniform distribution over `support` for `player`.
pub fn uniform_over(game: &Game, player: usize, support: &[usize]) -> Vec<f64> {
    let mut d = vec![0.0; game.actions(player).len()];
    for &i in support {
        d[i] = 1.0;
    }
    d
}

/// Expected objective value of each of `player`'s actions when every other
/// player draws independently from its distribution in `profile`.
pub fn expected_values(
    game: &Game,
    player: usize,
    objective: &Objective,
    profile: &StrategyProfile,
) -> Result<Vec<f64>, OracleError> {
    let n = game.num_players();
    let mut norms = vec![1.0; n];
    for q in game.opponents(player) {
        let d = &profile.0[q];
        if d.len() != game.actions(q).len() {
            return Err(OracleError::EmptySupport(q));
        }
        let total: f64 = d.iter().sum();
        if total.is_nan() || total <= 0.0 || d.iter().any(|&x| x < 0.0) {
            return Err(OracleError::EmptySupport(q));
        }
        norms[q] = total;
    }
    let mut values = vec![0.0; game.actions(player).len()];
    for prof in game.profiles() {
        let mut w = 1.0;
        for q in game.opponents(player) {
            w *= profile.0[q][prof[q]] / norms[q];
        }
        if w == 0.0 {
            continue;
        }
        values[prof[player]] += w * objective.apply(game.reward(&prof))?;
    }
    Ok(values)
}

/// Naive player: all other players act uniformly at random.
pub fn level0(game: &Game, player: usize, objective: &Objective) -> Result<ActionChoice, OracleError> {
    best_response(game, player, objective, &StrategyProfile::uniform(game))
}

pub fn best_response(
    game: &Game,
    player: usize,
    objective: &Objective,
    opponents: &StrategyProfile,
) -> Result<ActionChoice, OracleError> {
    if player >= game.num_players() {
        return Err(crate::game::GameError::UnknownPlayer(format!("#{player}")).into());
    }
    let values = expected_values(game, player, objective, opponents)?;
    Ok(ActionChoice::from_values(player, game.actions(player).to_vec(), values))
}

/// Level-k reasoning: level 0 is naive; level k best-responds to every
/// opponent reasoning at level k-1 (uniform over that opponent's argmax set).
/// `objectives` holds one objective per player.
pub fn solve_level_k(
    game: &Game,
    player: usize,
    k: usize,
    objectives: &[Objective],
) -> Result<ActionChoice, OracleError> {
    if objectives.len() != game.num_players() {
        return Err(crate::game::GameError::LengthMismatch { expected: game.num_players(), got: objectives.len() }.into());
    }
    if k == 0 {
        return level0(game, player, &objectives[player]);
    }
    let mut profile = StrategyProfile::uniform(game);
    for q in game.opponents(player) {
        let opp = solve_level_k(game, q, k - 1, objectives)?;
        profile.set(q, uniform_over(game, q, &opp.best));
    }
    best_response(game, player, &objectives[player], &profile)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::Mode;

    fn g(rows: Vec<Vec<f64>>) -> Game {
        Game::from_rows(["Gopher", "Bob"], [["a1", "a2"], ["b1", "b2"]], Mode::Simultaneous, rows).unwrap()
    }

    fn demo() -> Game {
        g(vec![vec![8.0, 7.0], vec![6.0, 5.0], vec![4.0, 3.0], vec![2.0, 1.0]])
    }

    fn factored() -> Game {
        g(vec![vec![-3.0, -2.0], vec![-1.0, -4.0], vec![1.0, 2.0], vec![3.0, 4.0]])
    }

    #[test]
    fn level0_on_demo_games() {
        let bob = level0(&demo(), 1, &Objective::max_own(1)).unwrap();
        assert_eq!(bob.values, vec![5.0, 3.0]);
        assert_eq!(bob.best_labels(), vec!["b1"]);
        let bob = level0(&factored(), 1, &Objective::max_own(1)).unwrap();
        assert_eq!(bob.values, vec![0.0, 0.0]);
        assert_eq!(bob.best_labels(), vec!["b1", "b2"]);
    }

    #[test]
    fn best_response_on_demo_games() {
        let game = demo();
        let mut p = StrategyProfile::uniform(&game);
        p.set(1, uniform_over(&game, 1, &[0]));
        let br = best_response(&game, 0, &Objective::max_own(0), &p).unwrap();
        assert_eq!(br.best_labels(), vec!["a1"]);
        assert_eq!(br.best_value(), 8.0);

        let game = factored();
        let mut p = StrategyProfile::uniform(&game);
        p.set(1, uniform_over(&game, 1, &[0, 1]));
        let br = best_response(&game, 0, &Objective::max_own(0), &p).unwrap();
        assert_eq!(br.values, vec![-2.0, 2.0]);
        assert_eq!(br.best_labels(), vec!["a2"]);
    }

    #[test]
    fn point_mass_with_flat_payoffs_ties_everything() {
        let game = g(vec![vec![1.0, 0.0]; 4]);
        let mut p = StrategyProfile::uniform(&game);
        p.set(1, vec![0.0, 1.0]);
        assert_eq!(best_response(&game, 0, &Objective::max_own(0), &p).unwrap().best, vec![0, 1]);
    }

    #[test]
    fn empty_support_is_an_error() {
        let game = demo();
        let mut p = StrategyProfile::uniform(&game);
        p.set(1, vec![0.0, 0.0]);
        assert_eq!(best_response(&game, 0, &Objective::max_own(0), &p).unwrap_err(), OracleError::EmptySupport(1));
    }

    #[test]
    fn dominant_strategy_is_constant_across_levels() {
        let objs = Objective::all_max(2);
        let levels: Vec<_> = (0..5).map(|k| solve_level_k(&demo(), 0, k, &objs).unwrap().best).collect();
        assert!(levels.iter().all(|b| b == &vec![0]));
    }

    #[test]
    fn level1_is_best_response_to_level0() {
        let objs = Objective::all_max(2);
        let game = factored();
        let opp = level0(&game, 1, &objs[1]).unwrap();
        let mut p = StrategyProfile::uniform(&game);
        p.set(1, uniform_over(&game, 1, &opp.best));
        assert_eq!(solve_level_k(&game, 0, 1, &objs).unwrap(), best_response(&game, 0, &objs[0], &p).unwrap());
    }
}
