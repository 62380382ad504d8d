//! The strategic demonstration prompt for one game, and its baselines.
//!
//! `cargo run --example compile_prompt`

use strategos::compiler::{build_demo_set, check_arithmetic, canonical_demo_games, DemoStyle, Problem};
use strategos::gateway::estimate_tokens;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let [_, eval_game] = canonical_demo_games();
    let problem = Problem::matrix(eval_game, 1);
    let strategic = build_demo_set(&problem, DemoStyle::Strategic)?;
    let prompt = strategic.flatten();
    println!("{prompt}");
    println!("---");
    println!("arithmetic slips: {}", check_arithmetic(&prompt).len());
    for style in [DemoStyle::Strategic, DemoStyle::FewShot, DemoStyle::ZeroShot, DemoStyle::ZeroShotCot] {
        println!("{style:?}: ~{} tokens", estimate_tokens(&build_demo_set(&problem, style)?.flatten()));
    }
    println!("oracle answer: {:?}", problem.oracle_best()?.iter().map(|&i| &problem.actions()[i]).collect::<Vec<_>>());
    Ok(())
}
