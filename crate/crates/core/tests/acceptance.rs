//! One PASS/FAIL line per acceptance criterion; exits non-zero on any failure.

mod common;

use std::process::ExitCode;

use strategos::compiler::{check_arithmetic, default_negotiation_demo, AgentMethod, Problem};
use strategos::dsl::{eval_call, parse_call, EvalContext, Value};
use strategos::gateway::{estimate_tokens, ReplayBackend};
use strategos::harness::{
    generate_suite, random_proposal_gap, run_experiment, ExperimentBackend, ExperimentConfig, Family, Method, SuiteSpec,
};
use strategos::negotiation::{agent_turn, broker_propose, load_contexts, BrokerMode, NegotiationAction, Outcome, ValueBelief};
use strategos::oracle::Fairness;

use common::reference::{reference_fixture, reference_session};
use common::factored::{factored_matches_oracle, largest_factored_context, unfactored_context, BUDGET};
use common::stub::{evaluate, spawn_stub};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok { Ok(()) } else { Err(msg()) }
}

fn golden_prompts() -> Check {
    let pairs = common::golden::all_pairs();
    for (name, actual, expected) in &pairs {
        if let Some(diff) = common::golden::first_difference(actual, expected) {
            return Err(format!("{name}: {diff}"));
        }
    }
    let traces = common::traces::all_traces();
    let slips: usize = traces.iter().map(|(_, t)| check_arithmetic(t).len()).sum();
    ensure(slips == 0, || format!("{slips} arithmetic slips"))?;
    Ok(format!("{} reference prompts exact, {} traces with no arithmetic slips", pairs.len(), traces.len()))
}

fn oracle_soundness() -> Check {
    let mut counts = Vec::new();
    for (family, expected) in [
        (Family::Simultaneous, 35),
        (Family::Sequential, 35),
        (Family::TwoStage, 30),
        (Family::HiddenState, 15),
        (Family::Communication, 50),
    ] {
        let games = generate_suite(&SuiteSpec::new(family, 0)).map_err(|e| e.to_string())?;
        ensure(games.len() == expected, || format!("{family}: {} games, expected {expected}", games.len()))?;
        for g in &games {
            let best = g.problem.oracle_best().map_err(|e| format!("{}: {e}", g.id))?;
            ensure(best == common::naive_best(&g.problem), || format!("{family} {}: disagrees with re-enumeration", g.id))?;
        }
        counts.push(format!("{family} {}/{}", games.len(), games.len()));
    }
    Ok(counts.join(", "))
}

fn pipeline_soundness() -> Check {
    let mut out = Vec::new();
    let mut run = |family: Family, method: Method, need: usize, total: usize| -> Result<(), String> {
        let games = generate_suite(&SuiteSpec::new(family, 0)).map_err(|e| e.to_string())?;
        let report = run_experiment(family.name(), &games, &[method], ExperimentBackend::Oracle, &ExperimentConfig::default());
        let s = report.summary(method).ok_or("missing summary")?;
        ensure(s.total == total && s.correct >= need, || format!("{family} {method}: {}", s.display))?;
        out.push(format!("{family} {method} {}", s.display));
        Ok(())
    };
    run(Family::Simultaneous, Method::Strategic, 35, 35)?;
    run(Family::Sequential, Method::Strategic, 35, 35)?;
    run(Family::Objectives, Method::Strategic, 5 * 35, 5 * 35)?;
    run(Family::HiddenState, Method::Strategic, 15, 15)?;
    run(Family::Communication, Method::Strategic, 50, 50)?;
    run(Family::TwoStage, Method::Strategic, 27, 30)?;
    run(Family::Simultaneous, Method::Cascade2, 35, 35)?;
    Ok(out.join("; "))
}

fn factored_equivalence() -> Check {
    let mut games = Vec::new();
    for family in [Family::LargerActions, Family::MultiPlayer] {
        games.extend(generate_suite(&SuiteSpec::new(family, 0)).map_err(|e| e.to_string())?);
    }
    let mut shapes: Vec<String> = games
        .iter()
        .map(|g| match &g.problem {
            Problem::Game { tree, .. } if tree.num_players() > 2 => format!("{}-player", tree.num_players()),
            _ => g.class.clone(),
        })
        .collect();
    shapes.dedup();
    for g in &games {
        factored_matches_oracle(g)?;
    }
    let mut sizes = Vec::new();
    for g in games.iter().filter(|g| g.class.contains('x')) {
        let (flat, factored) = (unfactored_context(&g.problem), largest_factored_context(&g.problem));
        let large = g.class == "5x5" || g.class == "6x6";
        ensure(large == (flat > BUDGET), || format!("{}: unfactored {flat} tokens", g.id))?;
        ensure(factored <= BUDGET, || format!("{}: factored {factored} tokens", g.id))?;
        if !sizes.iter().any(|(c, _, _)| *c == g.class) {
            let trace_only = estimate_tokens(&g.problem.trace().map_err(|e| e.to_string())?.text);
            sizes.push((g.class.clone(), flat, trace_only));
        }
    }
    let sizes: Vec<String> = sizes.iter().map(|(c, n, t)| format!("{c} {n} (trace alone {t})")).collect();
    Ok(format!("{} games over [{}] match the oracle; unfactored prompt+trace tokens vs budget {BUDGET}: {}", games.len(), shapes.join(", "), sizes.join(", ")))
}

fn broker_metrics() -> Check {
    let contexts = load_contexts(concat!(env!("CARGO_MANIFEST_DIR"), "/data/contexts.txt")).map_err(|e| e.to_string())?;
    ensure(contexts.len() >= 100, || format!("{} contexts", contexts.len()))?;
    let mut out = Vec::new();
    for (fairness, reference) in [(Fairness::Equality, 4.08), (Fairness::Rawlsian, 4.06)] {
        let gap = random_proposal_gap(&contexts, fairness, 1000, 17).map_err(|e| e.to_string())?;
        ensure((gap - reference).abs() <= 0.6, || format!("{fairness} random gap {gap:.3} vs {reference} ± 0.6"))?;
        for c in &contexts {
            let r = broker_propose(&c.pot, &c.values_a, &c.values_b, fairness, 3, BrokerMode::Oracle).map_err(|e| e.to_string())?;
            ensure(r.gap == 0, || format!("{fairness} oracle gap {} on {c:?}", r.gap))?;
        }
        out.push(format!("{fairness} random {gap:.2} (ref {reference}), oracle 0"));
    }
    Ok(format!("{} contexts: {}", contexts.len(), out.join("; ")))
}

fn negotiation() -> Check {
    let stats = common::sim::simulate_sessions(10_000, 7);
    ensure(stats.violations.is_empty(), || format!("{} violations, first: {}", stats.violations.len(), stats.violations[0]))?;
    let backend = ReplayBackend::open(reference_fixture()).map_err(|e| e.to_string())?;
    let demos = [default_negotiation_demo()];
    let mut session = reference_session();
    let mut proposals = Vec::new();
    for bob in [NegotiationAction::propose(0, 3, 1), NegotiationAction::propose(0, 2, 1)] {
        session = session.apply(1, bob).map_err(|e| e.to_string())?;
        let turn = agent_turn(&session, 0, &ValueBelief::default(), &demos, AgentMethod::Strategic, &backend)
            .map_err(|e| e.to_string())?;
        proposals.push(turn.action);
        session = session.apply(0, turn.action).map_err(|e| e.to_string())?;
    }
    let expected = [NegotiationAction::propose(1, 4, 0), NegotiationAction::propose(1, 3, 0)];
    ensure(proposals == expected, || format!("replayed proposals {proposals:?}"))?;
    let closed = session.apply(1, NegotiationAction::Accept).map_err(|e| e.to_string())?;
    ensure(matches!(closed.outcome, Outcome::Accepted { rewards: [7, 6], .. }), || format!("{:?}", closed.outcome))?;
    Ok(format!(
        "{} sessions ({} actions, {} accepted, {} rejected) with 0 violations; reference proposals reproduced",
        stats.sessions, stats.actions, stats.accepted, stats.rejected
    ))
}

fn dsl() -> Check {
    let n = common::fuzz::dsl_roundtrip(10_000, 11)?;
    let game = &strategos::compiler::canonical_demo_games()[1];
    let ctx = EvalContext::oracle(game);
    let cases = [
        ("mean([7, 3])", Value::Number(5.0)),
        ("compare(Bob, max, [b1=0, b2=0])", Value::Actions(vec!["b1".into(), "b2".into()])),
        ("search(Gopher, Bob, max, a2, [bob[b1, b2]])", Value::Number(2.0)),
    ];
    for (src, expected) in &cases {
        let call = parse_call(src).map_err(|e| format!("{src}: {e}"))?;
        let got = eval_call(&call, &ctx).map_err(|e| format!("{src}: {e}"))?;
        ensure(&got == expected, || format!("{src} = {got}"))?;
    }
    Ok(format!("{n} fuzzed calls round-trip; worked calls give 5, [b1, b2], 2"))
}

fn replay_determinism() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let transcript = dir.path().join("run.jsonl");
    let t = transcript.to_str().ok_or("path")?;
    let live = evaluate(dir.path(), "live.json", &["--backend", "http", "--record", t], &spawn_stub());
    let replay = ["--backend", "replay", "--transcript", t];
    let a = evaluate(dir.path(), "a.json", &replay, "http://127.0.0.1:9/unused");
    evaluate(dir.path(), "b.json", &replay, "http://127.0.0.1:9/unused");
    let read = |n: &str| std::fs::read(dir.path().join(n)).map_err(|e| e.to_string());
    let (ra, rb) = (read("a.json")?, read("b.json")?);
    ensure(ra == rb, || "replayed reports differ".into())?;
    ensure(a.trials == live.trials, || "replayed trials differ from the recorded run".into())?;
    Ok(format!("{} trials recorded, two replays byte-identical ({} bytes)", live.trials.len(), ra.len()))
}

fn main() -> ExitCode {
    let checks: [Criterion; 8] = [
        ("golden prompts", golden_prompts),
        ("oracle soundness", oracle_soundness),
        ("pipeline soundness", pipeline_soundness),
        ("factored equivalence", factored_equivalence),
        ("broker metrics", broker_metrics),
        ("negotiation protocol", negotiation),
        ("tool-call DSL", dsl),
        ("replay determinism", replay_determinism),
    ];
    let mut failed = 0;
    for (name, check) in checks {
        match std::panic::catch_unwind(check) {
            Ok(Ok(detail)) => println!("PASS {name}: {detail}"),
            Ok(Err(why)) => {
                failed += 1;
                println!("FAIL {name}: {why}");
            }
            Err(_) => {
                failed += 1;
                println!("FAIL {name}: panicked");
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", checks.len() - failed, checks.len());
    if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
