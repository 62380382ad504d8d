//! Level-k solutions of a 2x2 game, simultaneous and sequential.
//!
//! `cargo run --example solve_game`

use strategos::game::{Game, GameTree, Mode, Objective};
use strategos::oracle::{solve_level_k, solve_tree};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // Rows are (Gopher, Bob) rewards for (a1,b1), (a1,b2), (a2,b1), (a2,b2).
    let game = Game::from_rows(
        ["Gopher", "Bob"],
        [["a1", "a2"], ["b1", "b2"]],
        Mode::Simultaneous,
        vec![vec![3.0, 3.0], vec![0.0, 5.0], vec![5.0, 0.0], vec![1.0, 1.0]],
    )?;
    let objectives = Objective::all_max(2);
    for k in 0..3 {
        let choice = solve_level_k(&game, 0, k, &objectives)?;
        println!("level {k}: values {:?}, best {:?}", choice.values, choice.best_labels());
    }
    let sequential = GameTree::flat(game.with_mode(Mode::Sequential { order: vec![0, 1] })?);
    let choice = solve_tree(&sequential, 0, &objectives, 0)?;
    println!("Gopher moving first: values {:?}, best {:?}", choice.values, choice.best_labels());
    Ok(())
}
