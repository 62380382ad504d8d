//! Iterated reasoning as a chain of contexts, one level per stage.
//!
//! `cargo run --example cascade`

use strategos::dsl::{run_cascade, CascadeConfig, LevelBackend};
use strategos::game::{Game, Mode, Objective};
use strategos::oracle::solve_level_k;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // A cyclic game where Gopher's a1 looks best against a naive opponent.
    let game = Game::from_rows(
        ["Gopher", "Bob"],
        [["a1", "a2", "a3"], ["b1", "b2", "b3"]],
        Mode::Simultaneous,
        vec![
            vec![2.0, 1.0], vec![0.0, 3.0], vec![4.0, 0.0],
            vec![3.0, 0.0], vec![1.0, 1.0], vec![0.0, 3.0],
            vec![0.0, 3.0], vec![3.0, 0.0], vec![1.0, 1.0],
        ],
    )?;
    let objectives = Objective::all_max(2);
    for levels in 1..=3 {
        let out = run_cascade(&game, 0, &objectives, &CascadeConfig::new(levels, LevelBackend::Oracle))?;
        let stages: Vec<String> =
            out.stages.iter().map(|s| format!("{}@{} -> {:?}", game.player_name(s.player), s.level, s.predicted)).collect();
        let oracle = solve_level_k(&game, 0, levels, &objectives)?;
        println!("levels {levels}: {} (oracle {:?}) via {}", out.action, oracle.best_labels(), stages.join(", "));
    }
    Ok(())
}
