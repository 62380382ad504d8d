//! Factored reasoning on a 5x5 game: a scripted model writes tool calls and
//! the intercept loop answers each `search` from the oracle.
//!
//! `cargo run --example factored_search`

use strategos::compiler::{compile_factored_demos, compile_factored_recursive, factored_question, Problem};
use strategos::dsl::{intercept_loop, EvalContext, InterceptConfig};
use strategos::gateway::{constrained_action, ScriptedBackend};
use strategos::harness::{generate_suite, Family, SuiteSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let games = generate_suite(&SuiteSpec::new(Family::LargerActions, 0))?;
    let g = games.iter().find(|g| g.class == "5x5").ok_or("no 5x5 game")?;
    let Problem::Game { tree, player, objectives, .. } = &g.problem else { return Err("not a game".into()) };
    let game = &tree.root.game;

    let demos = compile_factored_demos()?;
    let prompt = demos.recursive_prompt(&factored_question(game, *player, objectives)?);
    // Stand in for the model: its continuation is the compiled trace with the tool results left out.
    let trace = compile_factored_recursive(game, *player, objectives)?;
    let backend = ScriptedBackend::new("compiled-trace");
    backend.script(prompt.clone(), trace.text.strip_prefix("A:").unwrap_or(&trace.text));

    let ctx = EvalContext::oracle(game);
    let run = intercept_loop(&prompt, &g.problem.action_marker(), &backend, &ctx, &InterceptConfig::default())?;
    for call in &run.calls {
        println!("{} = {}", call.call, call.value);
    }
    let chosen = constrained_action(&run.action_tail, g.problem.actions(), None)?.action;
    let best: Vec<_> = g.problem.oracle_best()?.iter().map(|&i| g.problem.actions()[i].clone()).collect();
    println!("{}: chose {chosen}, oracle {best:?}, {} sub-contexts", g.id, ctx.subcontexts());
    Ok(())
}
