//! With the scripted-oracle backend every suite must score perfectly: the
//! prompts, the continuation, action constraining and scoring all agree.

use strategos::harness::{
    generate_suite, run_experiment, ExperimentBackend, ExperimentConfig, Family, Method, SuiteSpec,
};

const GAME_FAMILIES: [Family; 8] = [
    Family::Simultaneous,
    Family::Sequential,
    Family::TwoStage,
    Family::LargerActions,
    Family::MultiPlayer,
    Family::HiddenState,
    Family::Communication,
    Family::Objectives,
];

#[test]
fn oracle_backend_scores_every_suite_perfectly() {
    let methods = [Method::Strategic, Method::ZeroShot, Method::ZeroShotCot, Method::FewShot];
    for family in GAME_FAMILIES {
        for seed in [0, 1] {
            let games = generate_suite(&SuiteSpec::new(family, seed)).unwrap();
            let report = run_experiment(family.name(), &games, &methods, ExperimentBackend::Oracle, &ExperimentConfig::default());
            for m in &report.methods {
                let first_miss = report.trials.iter().find(|t| t.method == m.method && !t.correct);
                assert_eq!(m.correct, m.total, "{family} seed {seed} {}: {first_miss:?}", m.method);
            }
        }
    }
}

#[test]
fn factored_method_is_perfect_where_it_applies() {
    for family in [Family::Simultaneous, Family::LargerActions, Family::MultiPlayer, Family::Objectives] {
        let games = generate_suite(&SuiteSpec::new(family, 0)).unwrap();
        let report = run_experiment(family.name(), &games, &[Method::Factored], ExperimentBackend::Oracle, &ExperimentConfig::default());
        let s = report.summary(Method::Factored).unwrap();
        let first_miss = report.trials.iter().find(|t| !t.correct);
        assert_eq!(s.correct, s.total, "{family}: {first_miss:?}");
    }
}

#[test]
fn report_accuracy_is_recomputable_from_trials() {
    let games = generate_suite(&SuiteSpec::new(Family::Simultaneous, 3)).unwrap();
    let report = run_experiment("simultaneous-2x2", &games, &[Method::Random, Method::Strategic], ExperimentBackend::Oracle, &ExperimentConfig::default());
    let json = serde_json::to_string(&report).unwrap();
    let back: strategos::harness::ExperimentReport = serde_json::from_str(&json).unwrap();
    for m in &back.methods {
        let recount = back.trials.iter().filter(|t| t.method == m.method && t.chosen.as_ref().is_some_and(|c| t.oracle_best.contains(c))).count();
        assert_eq!(recount, m.correct);
    }
}

#[test]
fn random_method_tracks_its_analytic_expectation() {
    // Expected accuracy of a uniform pick is |argmax| / |actions| per game.
    let mut games = Vec::new();
    for seed in 0..20 {
        games.extend(generate_suite(&SuiteSpec::new(Family::LargerActions, seed)).unwrap().into_iter().map(|mut g| {
            g.id = format!("seed{seed}-{}", g.id);
            g
        }));
    }
    let report = run_experiment("larger-actions", &games, &[Method::Random], ExperimentBackend::Oracle, &ExperimentConfig::default());
    let expected: f64 = report.trials.iter().map(|t| {
        let g = games.iter().find(|g| g.id == t.game_id).unwrap();
        t.oracle_best.len() as f64 / g.problem.actions().len() as f64
    }).sum::<f64>() / report.trials.len() as f64;
    let acc = report.summary(Method::Random).unwrap().accuracy;
    // 400 draws: three standard errors is under 0.07.
    assert!((acc - expected).abs() < 0.07, "{acc} vs {expected}");
}
