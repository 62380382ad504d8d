use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use crate::compiler::{
    build_demo_set, build_level_n_demo_set, compile_factored_base, compile_level_n_trace, compile_factored_demos, compile_factored_recursive, factored_base_question,
    factored_question, FactoredDemos, Problem,
};
use crate::dsl::{intercept_loop, run_cascade, CascadeConfig, EvalContext, InterceptConfig, LevelBackend};
use crate::game::{Game, GameTree, Mode, Objective};
use crate::oracle::solve_level_k;
use crate::gateway::{answer_with_action, constrained_action, estimate_tokens, CompletionBackend, ScriptedBackend};

use super::report::{ExperimentReport, TrialResult};
use super::{HarnessError, Method, SuiteGame};

/// Who answers the prompts of an experiment.
#[derive(Clone, Copy)]
pub enum ExperimentBackend<'a> {
    /// A scripted backend per trial that continues each prompt the way the
    /// compiler would, from the oracle's solution.
    Oracle,
    Model(&'a dyn CompletionBackend),
}

impl ExperimentBackend<'_> {
    pub fn id(&self) -> String {
        match self {
            ExperimentBackend::Oracle => "scripted-oracle".into(),
            ExperimentBackend::Model(b) => b.id(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExperimentConfig {
    /// Trials in flight at once.
    pub parallelism: usize,
    /// Seeds the random method.
    pub seed: u64,
    /// `max_tokens` for a reasoning completion.
    pub reasoning_tokens: u32,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self { parallelism: 4, seed: 0, reasoning_tokens: 2048 }
    }
}

/// Continuation text after the prompt's trailing `A:`.
fn after_answer_prefix(text: &str) -> &str {
    text.strip_prefix("A:").unwrap_or(text)
}

struct Attempt {
    chosen: String,
    prompt_tokens: usize,
    trace: Option<String>,
}

fn random_choice(game: &SuiteGame, seed: u64) -> String {
    let digest = Sha256::digest(game.id.as_bytes());
    let salt = u64::from_le_bytes(digest[..8].try_into().expect("8 bytes"));
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ salt);
    game.problem.actions().choose(&mut rng).expect("non-empty action set").clone()
}

fn demo_attempt(
    problem: &Problem,
    method: Method,
    backend: ExperimentBackend,
    config: &ExperimentConfig,
) -> Result<Attempt, HarnessError> {
    let style = method.demo_style().expect("demo method");
    let prompt = build_demo_set(problem, style)?.flatten();
    let marker = problem.action_marker();
    let scripted;
    let backend: &dyn CompletionBackend = match backend {
        ExperimentBackend::Model(b) => b,
        ExperimentBackend::Oracle => {
            scripted = ScriptedBackend::new("scripted-oracle");
            let continuation = match method {
                Method::Strategic => after_answer_prefix(&problem.trace()?.text).to_string(),
                _ => {
                    let best = problem.oracle_best()?;
                    format!("{marker}{}\n", problem.actions()[best[0]])
                }
            };
            scripted.script(prompt.clone(), continuation);
            &scripted
        }
    };
    let answer = answer_with_action(backend, &prompt, &marker, problem.actions(), config.reasoning_tokens)?;
    Ok(Attempt {
        chosen: answer.action.action,
        prompt_tokens: estimate_tokens(&prompt),
        trace: Some(format!("{}{marker}{}", answer.reasoning, answer.tail)),
    })
}

/// Registers the recursive trace and the base-case answer of every search it
/// makes, so the scripted backend serves the whole factored run.
fn script_factored(
    scripted: &ScriptedBackend,
    game: &Game,
    player: usize,
    objectives: &[Objective],
    prompt: &str,
    marker: &str,
    demos: &FactoredDemos,
) -> Result<(), HarnessError> {
    let trace = compile_factored_recursive(game, player, objectives)?;
    let probe = ScriptedBackend::new("probe");
    probe.script(prompt, after_answer_prefix(&trace.text));
    let oracle = EvalContext::oracle(game).with_max_subcontexts(usize::MAX);
    let run = intercept_loop(prompt, marker, &probe, &oracle, &InterceptConfig::default())?;
    for tool in run.calls.iter().filter(|t| t.call.name == "search") {
        let query = oracle.search_query(&tool.call.args)?;
        let base = compile_factored_base(game, &query)?;
        scripted.script(demos.base_prompt(&factored_base_question(game, &query)?), after_answer_prefix(&base.text));
    }
    scripted.script(prompt, after_answer_prefix(&trace.text));
    Ok(())
}

fn factored_attempt(problem: &Problem, backend: ExperimentBackend) -> Result<Attempt, HarnessError> {
    let (game, player, objectives) = flat_game(problem, "factored prompting")?;
    let demos = compile_factored_demos()?;
    let prompt = demos.recursive_prompt(&factored_question(game, player, objectives)?);
    let marker = problem.action_marker();
    let scripted;
    let backend: &dyn CompletionBackend = match backend {
        ExperimentBackend::Model(b) => b,
        ExperimentBackend::Oracle => {
            scripted = ScriptedBackend::new("scripted-oracle");
            script_factored(&scripted, game, player, objectives, &prompt, &marker, &demos)?;
            &scripted
        }
    };
    let ctx = EvalContext::model(game, backend, &demos);
    let run = intercept_loop(&prompt, &marker, backend, &ctx, &InterceptConfig::default())?;
    let chosen = constrained_action(&run.action_tail, problem.actions(), None)?.action;
    Ok(Attempt { chosen, prompt_tokens: estimate_tokens(&prompt), trace: Some(format!("{}{}", run.text, run.action_tail)) })
}

/// The flat simultaneous two-player game a level-1 problem asks about.
fn flat_game<'p>(problem: &'p Problem, what: &str) -> Result<(&'p Game, usize, &'p [Objective]), HarnessError> {
    let Problem::Game { tree, player, objectives, opponent_level: 0 } = problem else {
        return Err(HarnessError::Unsupported(format!("{what} covers level-1 game problems")));
    };
    if !tree.is_flat() || tree.root.game.mode() != &Mode::Simultaneous {
        return Err(HarnessError::Unsupported(format!("{what} covers single-stage simultaneous games")));
    }
    Ok((&tree.root.game, *player, objectives))
}

/// Cascade levels of the `cascade-2` method.
const CASCADE_LEVELS: usize = 2;

/// Registers every stage's prompt with the compiled answer for the stage below's oracle prediction.
fn script_cascade(scripted: &ScriptedBackend, game: &Game, player: usize, objectives: &[Objective]) -> Result<(), HarnessError> {
    let mut below: Option<(usize, Vec<usize>)> = None;
    for level in 1..=CASCADE_LEVELS {
        let who = if (CASCADE_LEVELS - level).is_multiple_of(2) { player } else { 1 - player };
        let (prompt, trace) = match &below {
            None => {
                let problem = Problem::Game {
                    tree: GameTree::flat(game.clone()),
                    player: who,
                    objectives: objectives.to_vec(),
                    opponent_level: 0,
                };
                (build_demo_set(&problem, crate::compiler::DemoStyle::Strategic)?.flatten(), problem.trace()?)
            }
            Some((q, set)) => {
                let mut given = vec![Vec::new(); 2];
                given[*q] = set.clone();
                (
                    build_level_n_demo_set(game, who, objectives, &given)?.flatten(),
                    compile_level_n_trace(game, who, objectives, &given)?,
                )
            }
        };
        scripted.script(prompt, after_answer_prefix(&trace.text));
        below = Some((who, solve_level_k(game, who, level, objectives)?.best));
    }
    Ok(())
}

fn cascade_attempt(problem: &Problem, backend: ExperimentBackend) -> Result<Attempt, HarnessError> {
    let (game, player, objectives) = flat_game(problem, "a cascade")?;
    if game.num_players() != 2 {
        return Err(HarnessError::Unsupported("cascades are two-player".into()));
    }
    let scripted;
    let backend: &dyn CompletionBackend = match backend {
        ExperimentBackend::Model(b) => b,
        ExperimentBackend::Oracle => {
            scripted = ScriptedBackend::new("scripted-oracle");
            script_cascade(&scripted, game, player, objectives)?;
            &scripted
        }
    };
    let out = run_cascade(game, player, objectives, &CascadeConfig::new(CASCADE_LEVELS, LevelBackend::Model(backend)))?;
    let prompt_tokens = out.stages.iter().filter_map(|s| s.prompt.as_deref()).map(estimate_tokens).max().unwrap_or(0);
    let trace = out.stages.iter().filter_map(|s| s.response.clone()).collect::<Vec<_>>().join("\n\n");
    Ok(Attempt { chosen: out.action, prompt_tokens, trace: Some(trace) })
}

/// Argmax labels the trial is scored against.
fn target(problem: &Problem, method: Method) -> Result<Vec<usize>, HarnessError> {
    match method {
        Method::Cascade2 => {
            let (game, player, objectives) = flat_game(problem, "a cascade")?;
            Ok(solve_level_k(game, player, CASCADE_LEVELS, objectives)?.best)
        }
        _ => Ok(problem.oracle_best()?),
    }
}

/// Runs one trial. Failures are recorded in the result, never returned.
pub fn run_trial(game: &SuiteGame, method: Method, backend: ExperimentBackend, config: &ExperimentConfig) -> TrialResult {
    let problem = &game.problem;
    let oracle_best: Vec<String> = match target(problem, method) {
        Ok(best) => best.iter().map(|&i| problem.actions()[i].clone()).collect(),
        Err(e) => return failed(game, method, Vec::new(), e),
    };
    let attempt = match method {
        Method::Random => Ok(Attempt { chosen: random_choice(game, config.seed), prompt_tokens: 0, trace: None }),
        Method::Factored => factored_attempt(problem, backend),
        Method::Cascade2 => cascade_attempt(problem, backend),
        _ => demo_attempt(problem, method, backend, config),
    };
    match attempt {
        Ok(a) => TrialResult {
            game_id: game.id.clone(),
            class: game.class.clone(),
            method,
            correct: oracle_best.contains(&a.chosen),
            chosen: Some(a.chosen),
            oracle_best,
            error: None,
            prompt_tokens: a.prompt_tokens,
            trace: a.trace,
        },
        Err(e) => failed(game, method, oracle_best, e),
    }
}

fn failed(game: &SuiteGame, method: Method, oracle_best: Vec<String>, error: HarnessError) -> TrialResult {
    tracing::warn!(game = %game.id, %method, %error, "trial failed");
    TrialResult {
        game_id: game.id.clone(),
        class: game.class.clone(),
        method,
        chosen: None,
        oracle_best,
        correct: false,
        error: Some(error.to_string()),
        prompt_tokens: 0,
        trace: None,
    }
}

/// Every (game, method) trial, run on up to `config.parallelism` threads.
pub fn run_experiment(
    suite: &str,
    games: &[SuiteGame],
    methods: &[Method],
    backend: ExperimentBackend,
    config: &ExperimentConfig,
) -> ExperimentReport {
    let jobs: Vec<(&SuiteGame, Method)> = games.iter().flat_map(|g| methods.iter().map(move |&m| (g, m))).collect();
    let next = AtomicUsize::new(0);
    let results = Mutex::new(Vec::with_capacity(jobs.len()));
    std::thread::scope(|s| {
        for _ in 0..config.parallelism.max(1).min(jobs.len().max(1)) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(&(game, method)) = jobs.get(i) else { break };
                let result = run_trial(game, method, backend, config);
                results.lock().expect("results lock poisoned").push(result);
            });
        }
    });
    let trials = results.into_inner().expect("results lock poisoned");
    ExperimentReport::from_trials(suite, config.seed, &backend.id(), trials)
}
