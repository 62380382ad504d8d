//! Context sizes of factored and unfactored runs.

use strategos::compiler::{
    build_demo_set, compile_factored_base, compile_factored_demos, compile_factored_recursive, factored_base_question,
    factored_question, DemoStyle, Problem,
};
use strategos::dsl::{intercept_loop, EvalContext, InterceptConfig};
use strategos::gateway::{constrained_action, estimate_tokens, ScriptedBackend};
use strategos::harness::SuiteGame;

pub const BUDGET: usize = 2048;

/// Largest context a factored run needs: the recursive prompt with its trace,
/// or a base prompt with its answer.
pub fn largest_factored_context(problem: &Problem) -> usize {
    let demos = compile_factored_demos().unwrap();
    let Problem::Game { tree, player, objectives, .. } = problem else { unreachable!() };
    let game = &tree.root.game;
    let prompt = demos.recursive_prompt(&factored_question(game, *player, objectives).unwrap());
    let trace = compile_factored_recursive(game, *player, objectives).unwrap();
    let continuation = trace.text.strip_prefix("A:").unwrap();
    let backend = ScriptedBackend::new("scripted");
    backend.script(prompt.clone(), continuation);
    let ctx = EvalContext::oracle(game);
    let run = intercept_loop(&prompt, &problem.action_marker(), &backend, &ctx, &InterceptConfig::default()).unwrap();
    let mut largest = estimate_tokens(&format!("{prompt}{continuation}"));
    for call in run.calls.iter().filter(|c| c.call.name == "search") {
        let q = ctx.search_query(&call.call.args).unwrap();
        let base = format!("{}{}", demos.base_prompt(&factored_base_question(game, &q).unwrap()), compile_factored_base(game, &q).unwrap().text);
        largest = largest.max(estimate_tokens(&base));
    }
    largest
}

/// Tokens of the strategic prompt plus its compiled trace.
pub fn unfactored_context(problem: &Problem) -> usize {
    let prompt = build_demo_set(problem, DemoStyle::Strategic).unwrap().flatten();
    estimate_tokens(&format!("{prompt}{}", problem.trace().unwrap().text))
}

/// Runs the compiled factored trace through the intercept loop with oracle
/// search and checks the chosen action against the oracle.
pub fn factored_matches_oracle(g: &SuiteGame) -> Result<(), String> {
    let demos = compile_factored_demos().unwrap();
    let Problem::Game { tree, player, objectives, .. } = &g.problem else { return Err(format!("{}: not a game", g.id)) };
    let game = &tree.root.game;
    let prompt = demos.recursive_prompt(&factored_question(game, *player, objectives).unwrap());
    let trace = compile_factored_recursive(game, *player, objectives).unwrap();
    let backend = ScriptedBackend::new("scripted");
    backend.script(prompt.clone(), trace.text.strip_prefix("A:").unwrap());
    let ctx = EvalContext::oracle(game);
    let run = intercept_loop(&prompt, &g.problem.action_marker(), &backend, &ctx, &InterceptConfig::default())
        .map_err(|e| format!("{}: {e}", g.id))?;
    let chosen = constrained_action(&run.action_tail, g.problem.actions(), None).map_err(|e| format!("{}: {e}", g.id))?.action;
    let best = g.problem.oracle_best().unwrap();
    if !best.iter().any(|&i| g.problem.actions()[i] == chosen) {
        return Err(format!("{}: chose {chosen}", g.id));
    }
    // Every sub-context is a search; the cap is one per action plus one.
    let cap = game.all_actions().iter().map(Vec::len).sum::<usize>() + 1;
    if ctx.subcontexts() > cap {
        return Err(format!("{}: {} sub-contexts", g.id, ctx.subcontexts()));
    }
    Ok(())
}
