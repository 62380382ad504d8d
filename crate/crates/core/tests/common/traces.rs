//! Every reasoning trace the library can compile for the built-in suites.

use strategos::compiler::{
    build_demo_set, canonical_demo_games, compile_factored_demos, compile_proposal_trace, default_negotiation_demo,
    proposal_tries, render_episode, DemoStyle, Problem,
};
use strategos::harness::{generate_suite, Family, SuiteSpec};
use strategos::negotiation::generate_contexts;
use strategos::oracle::Fairness;

/// `(label, text)` for each trace.
pub fn all_traces() -> Vec<(String, String)> {
    let mut out = Vec::new();
    for family in Family::ALL {
        let Ok(games) = generate_suite(&SuiteSpec { family, variations: 5, seed: 0 }) else { continue };
        for g in games {
            if let Ok(t) = g.problem.trace() {
                out.push((g.id.clone(), t.text));
            }
            let demos = build_demo_set(&g.problem, DemoStyle::Strategic).expect("demo set");
            out.push((format!("{} demos", g.id), demos.flatten()));
        }
    }
    for (i, game) in canonical_demo_games().into_iter().enumerate() {
        for player in 0..2 {
            let t = Problem::matrix(game.clone(), player).trace().expect("canonical trace");
            out.push((format!("canonical {i} player {player}"), t.text));
        }
    }
    let factored = compile_factored_demos().expect("factored demos");
    for (q, t) in factored.recursive.iter().chain(&factored.base) {
        out.push((q.lines().next().unwrap_or_default().to_string(), t.text.clone()));
    }
    for (i, ctx) in generate_contexts(0, 100).iter().enumerate() {
        for fairness in [Fairness::Equality, Fairness::Rawlsian] {
            let tries = proposal_tries(&ctx.pot, &ctx.values_a, &ctx.values_b, fairness, 3);
            let t = compile_proposal_trace(&ctx.pot, &ctx.values_a, &ctx.values_b, fairness, &tries).expect("proposal trace");
            out.push((format!("broker context {i} {fairness}"), t.text));
        }
    }
    out.push(("negotiation episode".into(), render_episode(&default_negotiation_demo()).expect("episode")));
    out
}
