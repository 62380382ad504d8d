//! Command-line front door: compile prompts, solve games, run experiments,
//! broker deals, serve live negotiations and evaluate tool calls.

use std::error::Error;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tracing_subscriber::EnvFilter;

use strategos::compiler::{build_demo_set, canonical_demo_games, DemoStyle, Problem};
use strategos::dsl::{eval_call, parse_call, EvalContext};
use strategos::game::{json as game_json, Game, GameTree, Objective};
use strategos::gateway::{CompletionBackend, GatewayConfig, HttpBackend, RecordingBackend, ReplayBackend};
use strategos::harness::{
    generate_suite, random_proposal_gap, run_experiment, ExperimentBackend, ExperimentConfig, Family, Method, SuiteSpec,
};
use strategos::negotiation::{broker_propose, generate_contexts, load_contexts, BrokerMode, NegotiationContext};
use strategos::oracle::{solve_level_k, solve_tree, Fairness};
use strategos::service::{serve, ServiceConfig};

type CliResult<T = ()> = Result<T, Box<dyn Error>>;

#[derive(Parser)]
#[command(name = "strategos", version, about = "Strategic reasoning toolkit for language-model agents")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compile the demonstration prompt for a game.
    Compile(CompileArgs),
    /// Solve a game with the exact oracle.
    Solve(SolveArgs),
    /// Run methods over a generated suite and write a report.
    Evaluate(EvaluateArgs),
    /// Propose fair splits for negotiation contexts and report the gap to the optimum.
    Broker(BrokerArgs),
    /// Serve the live negotiation API.
    Serve(ServeArgs),
    /// Tool-call language utilities.
    Dsl {
        #[command(subcommand)]
        command: DslCommand,
    },
}

/// One game, from a JSON file or a generated suite.
#[derive(Args)]
struct GameSource {
    /// Game document (`strategos/game-v1`).
    #[arg(long, conflicts_with = "suite")]
    game: Option<PathBuf>,
    /// Player whose decision is asked about, for `--game`.
    #[arg(long, default_value_t = 0)]
    player: usize,
    /// Suite family to draw a game from.
    #[arg(long)]
    suite: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Position of the game within the suite.
    #[arg(long, default_value_t = 0)]
    index: usize,
}

impl GameSource {
    fn problem(&self) -> CliResult<(String, Problem)> {
        match (&self.game, &self.suite) {
            (Some(path), _) => {
                let tree = read_game(path)?;
                let objectives = Objective::all_max(tree.root.game.num_players());
                Ok((path.display().to_string(), Problem::Game { tree, player: self.player, objectives, opponent_level: 0 }))
            }
            (None, Some(family)) => {
                let games = generate_suite(&SuiteSpec::new(Family::parse(family)?, self.seed))?;
                let n = games.len();
                let g = games.into_iter().nth(self.index).ok_or_else(|| format!("suite {family} has {n} games"))?;
                Ok((g.id, g.problem))
            }
            (None, None) => Err("give --game FILE or --suite FAMILY".into()),
        }
    }
}

fn read_game(path: &Path) -> CliResult<GameTree> {
    Ok(game_json::from_json(&std::fs::read_to_string(path)?)?)
}

#[derive(Clone, Copy, ValueEnum)]
enum StyleArg {
    Strategic,
    Fewshot,
    #[value(name = "0shot")]
    ZeroShot,
    #[value(name = "0shot-cot")]
    ZeroShotCot,
}

impl From<StyleArg> for DemoStyle {
    fn from(s: StyleArg) -> Self {
        match s {
            StyleArg::Strategic => DemoStyle::Strategic,
            StyleArg::Fewshot => DemoStyle::FewShot,
            StyleArg::ZeroShot => DemoStyle::ZeroShot,
            StyleArg::ZeroShotCot => DemoStyle::ZeroShotCot,
        }
    }
}

#[derive(Args)]
struct CompileArgs {
    #[command(flatten)]
    source: GameSource,
    #[arg(long, value_enum, default_value = "strategic")]
    style: StyleArg,
    /// Print the prompt text instead of the JSON demo set.
    #[arg(long)]
    flat: bool,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    source: GameSource,
    /// Reasoning level of the solved player; opponents reason one level lower.
    #[arg(long, default_value_t = 1)]
    level: usize,
    /// Solve every game of the suite instead of one.
    #[arg(long)]
    all: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BackendKind {
    Http,
    Replay,
    Oracle,
}

#[derive(Args)]
struct BackendArgs {
    #[arg(long, value_enum, default_value = "oracle")]
    backend: BackendKind,
    /// Transcript served by `--backend replay`.
    #[arg(long)]
    transcript: Option<PathBuf>,
    /// Record every `--backend http` exchange to this transcript.
    #[arg(long)]
    record: Option<PathBuf>,
    /// Config file with a `[gateway]` section.
    #[arg(long)]
    config: Option<PathBuf>,
}

impl BackendArgs {
    /// The model backend, or `None` for the oracle.
    fn model(&self) -> CliResult<Option<Arc<dyn CompletionBackend>>> {
        Ok(match self.backend {
            BackendKind::Oracle => None,
            BackendKind::Replay => {
                let path = self.transcript.as_ref().ok_or("--backend replay needs --transcript")?;
                Some(Arc::new(ReplayBackend::open(path)?))
            }
            BackendKind::Http => {
                let http = HttpBackend::new(GatewayConfig::load(self.config.as_deref())?);
                match &self.record {
                    Some(path) => Some(Arc::new(RecordingBackend::create(http, path)?)),
                    None => Some(Arc::new(http)),
                }
            }
        })
    }
}

#[derive(Args)]
struct EvaluateArgs {
    #[arg(long)]
    suite: String,
    /// Comma-separated methods.
    #[arg(long, default_value = "strategic", value_delimiter = ',')]
    method: Vec<String>,
    #[command(flatten)]
    backend: BackendArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Payoff variants per game class.
    #[arg(long, default_value_t = 5)]
    variations: usize,
    #[arg(long, default_value_t = 4)]
    parallelism: usize,
    /// Report path; a Markdown table is written next to it.
    #[arg(long, default_value = "report.json")]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum BrokerKind {
    Oracle,
    Heuristic,
    Model,
    Random,
}

#[derive(Args)]
struct BrokerArgs {
    /// Context file (line or JSON format); generated contexts are used otherwise.
    #[arg(long)]
    contexts: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Contexts to generate without `--contexts`.
    #[arg(long, default_value_t = 100)]
    count: usize,
    #[arg(long, default_value = "equality")]
    fairness: String,
    #[arg(long, value_enum, default_value = "oracle")]
    mode: BrokerKind,
    #[arg(long, default_value_t = 3)]
    tries: usize,
    /// Monte-Carlo draws per context for `--mode random`.
    #[arg(long, default_value_t = 1000)]
    draws: usize,
    #[command(flatten)]
    backend: BackendArgs,
}

#[derive(Args)]
struct ServeArgs {
    #[arg(long, default_value_t = 8080)]
    port: u16,
    #[arg(long, default_value = "127.0.0.1")]
    host: String,
    /// Directory of session logs.
    #[arg(long, default_value = "./sessions")]
    data: PathBuf,
    /// Origin allowed by CORS; repeat for several. Any origin when omitted.
    #[arg(long = "cors-origin")]
    cors_origins: Vec<String>,
    #[command(flatten)]
    backend: BackendArgs,
}

#[derive(Subcommand)]
enum DslCommand {
    /// Parse and evaluate one tool call against a game.
    Eval {
        call: String,
        /// Game document; the two-action demonstration game with tied replies by default.
        #[arg(long)]
        game: Option<PathBuf>,
    },
}

fn compile(args: CompileArgs) -> CliResult {
    let (_, problem) = args.source.problem()?;
    let set = build_demo_set(&problem, args.style.into())?;
    if args.flat {
        println!("{}", set.flatten());
    } else {
        println!("{}", serde_json::to_string_pretty(&set)?);
    }
    Ok(())
}

fn solve_one(id: &str, problem: &Problem, level: usize) -> CliResult<serde_json::Value> {
    let best: Vec<usize> = match problem {
        Problem::Game { tree, player, objectives, .. } if tree.root.continuations.is_empty() => {
            solve_level_k(&tree.root.game, *player, level, objectives)?.best
        }
        Problem::Game { tree, player, objectives, .. } => solve_tree(tree, *player, objectives, level.saturating_sub(1))?.best,
        _ => problem.oracle_best()?,
    };
    let best: Vec<&str> = best.iter().map(|&i| problem.actions()[i].as_str()).collect();
    Ok(serde_json::json!({"id": id, "player": problem.player_name(), "best": best}))
}

fn solve(args: SolveArgs) -> CliResult {
    if args.all {
        let family = args.source.suite.as_deref().ok_or("--all needs --suite")?;
        for g in generate_suite(&SuiteSpec::new(Family::parse(family)?, args.source.seed))? {
            println!("{}", solve_one(&g.id, &g.problem, args.level)?);
        }
    } else {
        let (id, problem) = args.source.problem()?;
        println!("{}", serde_json::to_string_pretty(&solve_one(&id, &problem, args.level)?)?);
    }
    Ok(())
}

fn evaluate(args: EvaluateArgs) -> CliResult {
    let methods = args.method.iter().map(|m| Method::parse(m)).collect::<Result<Vec<_>, _>>()?;
    let spec = SuiteSpec { family: Family::parse(&args.suite)?, variations: args.variations, seed: args.seed };
    let games = generate_suite(&spec)?;
    let model = args.backend.model()?;
    let backend = match &model {
        Some(b) => ExperimentBackend::Model(b.as_ref()),
        None => ExperimentBackend::Oracle,
    };
    let config = ExperimentConfig { parallelism: args.parallelism, seed: args.seed, ..ExperimentConfig::default() };
    let report = run_experiment(spec.family.name(), &games, &methods, backend, &config);
    report.write(&args.out)?;
    print!("{}", report.to_markdown());
    Ok(())
}

fn broker(args: BrokerArgs) -> CliResult {
    let fairness = Fairness::parse(&args.fairness).ok_or_else(|| format!("unknown fairness {:?}", args.fairness))?;
    let contexts: Vec<NegotiationContext> = match &args.contexts {
        Some(path) => load_contexts(path)?,
        None => generate_contexts(args.seed, args.count),
    };
    if let BrokerKind::Random = args.mode {
        let gap = random_proposal_gap(&contexts, fairness, args.draws, args.seed)?;
        let summary = serde_json::json!({"mode": "random", "fairness": fairness.to_string(), "contexts": contexts.len(), "mean_gap": gap});
        println!("{}", serde_json::to_string_pretty(&summary)?);
        return Ok(());
    }
    let model = match args.mode {
        BrokerKind::Model => Some(args.backend.model()?.ok_or("--mode model needs --backend http or replay")?),
        _ => None,
    };
    let mut gaps = Vec::with_capacity(contexts.len());
    for ctx in &contexts {
        let mode = match (&args.mode, &model) {
            (BrokerKind::Model, Some(b)) => BrokerMode::Model(b.as_ref()),
            (BrokerKind::Heuristic, _) => BrokerMode::Heuristic,
            _ => BrokerMode::Oracle,
        };
        let result = broker_propose(&ctx.pot, &ctx.values_a, &ctx.values_b, fairness, args.tries, mode)?;
        println!("{}", serde_json::to_string(&result)?);
        gaps.push(result.gap as f64);
    }
    let mean = if gaps.is_empty() { 0.0 } else { gaps.iter().sum::<f64>() / gaps.len() as f64 };
    eprintln!("{} contexts, {fairness} fairness, mean gap {mean:.2}", gaps.len());
    Ok(())
}

fn dsl_eval(call: &str, game: Option<&Path>) -> CliResult {
    let game: Game = match game {
        Some(path) => read_game(path)?.root.game,
        None => canonical_demo_games()[1].clone(),
    };
    let value = eval_call(&parse_call(call)?, &EvalContext::oracle(&game))?;
    println!("{value}");
    Ok(())
}

async fn serve_cmd(args: ServeArgs) -> CliResult {
    let backend = args.backend.model()?.ok_or("serve needs --backend http or replay")?;
    let listener = tokio::net::TcpListener::bind((args.host.as_str(), args.port)).await?;
    let config = ServiceConfig { data_dir: args.data, cors_origins: args.cors_origins };
    serve(listener, config, backend).await?;
    Ok(())
}

fn main() {
    tracing_subscriber::fmt().with_env_filter(EnvFilter::from_default_env()).with_writer(std::io::stderr).init();
    let result = match Cli::parse().command {
        Command::Compile(a) => compile(a),
        Command::Solve(a) => solve(a),
        Command::Evaluate(a) => evaluate(a),
        Command::Broker(a) => broker(a),
        Command::Dsl { command: DslCommand::Eval { call, game } } => dsl_eval(&call, game.as_deref()),
        Command::Serve(a) => tokio::runtime::Runtime::new().map_err(Into::into).and_then(|rt| rt.block_on(serve_cmd(a))),
    };
    if let Err(e) = result {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
