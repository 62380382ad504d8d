//! Parsing and evaluating tool calls against a game.
//!
//! `cargo run --example tool_calls`

use strategos::compiler::canonical_demo_games;
use strategos::dsl::{eval_call, parse_call, EvalContext};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let game = &canonical_demo_games()[1];
    let ctx = EvalContext::oracle(game);
    for src in [
        "mean([7, 3])",
        "compare(Gopher, max, [a1=8, a2=4])",
        "compare(Bob, max, [b1=0, b2=0])",
        "search(Bob, Gopher, max, b1)",
        "search(Gopher, Bob, max, a2, [bob[b1, b2]])",
    ] {
        let call = parse_call(src)?;
        println!("{call} = {}", eval_call(&call, &ctx)?);
    }
    match parse_call("mean([7, 3)") {
        Err(e) => println!("mean([7, 3) -> {e}"),
        Ok(c) => println!("unexpectedly parsed {c}"),
    }
    Ok(())
}
