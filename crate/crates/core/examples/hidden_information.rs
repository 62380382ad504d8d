//! Beliefs over a hidden state, and whether an announcement can be trusted.
//!
//! `cargo run --example hidden_information`

use strategos::compiler::compile_belief_trace;
use strategos::game::{CommunicationGame, Game, HiddenStateGame, Mode, Objective};
use strategos::oracle::{best_response_under_belief, hidden_state_posterior, infer_truthfulness};

fn state(rows: Vec<Vec<f64>>) -> Result<Game, Box<dyn std::error::Error>> {
    Ok(Game::from_rows(["Gopher", "Bob"], [["a1", "a2"], ["b1", "b2"]], Mode::Simultaneous, rows)?)
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // Gopher knows which card was drawn; Bob sees only Gopher's move.
    let hearts = state(vec![vec![5.0, 1.0], vec![5.0, 3.0], vec![0.0, 2.0], vec![0.0, 0.0]])?;
    let spades = state(vec![vec![0.0, 0.0], vec![0.0, 4.0], vec![5.0, 2.0], vec![5.0, 1.0]])?;
    let hs = HiddenStateGame::uniform(vec![("hearts".into(), hearts), ("spades".into(), spades)], 1, 0)?;
    for observed in 0..2 {
        let posterior = hidden_state_posterior(&hs, observed)?;
        let reply = best_response_under_belief(&hs, &posterior, observed, &Objective::max_own(1))?;
        println!("Gopher plays a{}: posterior {:?}, Bob replies {:?}", observed + 1, posterior.probs, reply.best_labels());
    }
    println!("{}", compile_belief_trace(&hs, 0, &Objective::max_own(1))?.text);

    // Bob announces b1 before moving; Gopher decides whether to believe it.
    let base = state(vec![vec![3.0, 0.0], vec![0.0, 3.0], vec![0.0, 3.0], vec![3.0, 0.0]])?;
    let cg = CommunicationGame::new(base, 1, "b1")?;
    let t = infer_truthfulness(&cg, &Objective::max_own(0))?;
    println!("announcement b1: {:?}, Bob predicted to play {:?}", t.belief, t.predicted);
    Ok(())
}
