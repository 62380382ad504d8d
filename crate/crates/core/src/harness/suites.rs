//! Seeded game-suite generators. Each 2x2 class is an ordinal template:
//! the generator draws distinct integers, sorts them, and places them by
//! rank, so every variant satisfies its class's ordering constraints.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::compiler::Problem;
use crate::game::{CommunicationGame, Game, GameTree, HiddenStateGame, Mode, Objective, StageNode};
use crate::oracle::level0;

use super::HarnessError;

pub const PLAYER_NAMES: [&str; 5] = ["Gopher", "Bob", "Carol", "Dave", "Erin"];
pub const VARIANTS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    #[serde(rename = "simultaneous-2x2")]
    Simultaneous,
    #[serde(rename = "sequential-2x2")]
    Sequential,
    TwoStage,
    LargerActions,
    MultiPlayer,
    HiddenState,
    Communication,
    Objectives,
    /// Fair-deal brokering over negotiation contexts; not a game suite.
    Broker,
    /// Live negotiation over negotiation contexts; not a game suite.
    Negotiation,
}

impl Family {
    pub const ALL: [Family; 10] = [
        Family::Simultaneous,
        Family::Sequential,
        Family::TwoStage,
        Family::LargerActions,
        Family::MultiPlayer,
        Family::HiddenState,
        Family::Communication,
        Family::Objectives,
        Family::Broker,
        Family::Negotiation,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Simultaneous => "simultaneous-2x2",
            Family::Sequential => "sequential-2x2",
            Family::TwoStage => "two-stage",
            Family::LargerActions => "larger-actions",
            Family::MultiPlayer => "multi-player",
            Family::HiddenState => "hidden-state",
            Family::Communication => "communication",
            Family::Objectives => "objectives",
            Family::Broker => "broker",
            Family::Negotiation => "negotiation",
        }
    }

    pub fn parse(s: &str) -> Result<Self, HarnessError> {
        Family::ALL.into_iter().find(|f| f.name() == s).ok_or_else(|| HarnessError::UnknownFamily(s.to_string()))
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteSpec {
    pub family: Family,
    /// Payoff variants per game class.
    pub variations: usize,
    pub seed: u64,
}

impl SuiteSpec {
    pub fn new(family: Family, seed: u64) -> Self {
        Self { family, variations: VARIANTS, seed }
    }
}

/// One generated problem with a stable id such as `prisoners-dilemma-3`.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteGame {
    pub id: String,
    pub class: String,
    pub problem: Problem,
}

/// The seven 2x2 classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GameClass {
    PrisonersDilemma,
    Chicken,
    StagHunt,
    BattleOfTheSexes,
    MarketEntry,
    ImbalancedMatchingPennies,
    Deadlock,
}

impl GameClass {
    pub const ALL: [GameClass; 7] = [
        GameClass::PrisonersDilemma,
        GameClass::Chicken,
        GameClass::StagHunt,
        GameClass::BattleOfTheSexes,
        GameClass::MarketEntry,
        GameClass::ImbalancedMatchingPennies,
        GameClass::Deadlock,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GameClass::PrisonersDilemma => "prisoners-dilemma",
            GameClass::Chicken => "chicken",
            GameClass::StagHunt => "stag-hunt",
            GameClass::BattleOfTheSexes => "battle-of-the-sexes",
            GameClass::MarketEntry => "market-entry",
            GameClass::ImbalancedMatchingPennies => "imbalanced-matching-pennies",
            GameClass::Deadlock => "deadlock",
        }
    }

    /// Whether `g` satisfies this class's ordinal constraints.
    pub fn check(self, g: &Game) -> bool {
        let r = |a: usize, b: usize, p: usize| g.reward(&[a, b]).get(p);
        let symmetric = (0..2).all(|a| (0..2).all(|b| r(a, b, 0) == r(b, a, 1)));
        // Symmetric dilemma payoffs: reward (both a1), sucker, temptation, punishment (both a2).
        let (rr, s, t, p) = (r(0, 0, 0), r(0, 1, 0), r(1, 0, 0), r(1, 1, 0));
        match self {
            GameClass::PrisonersDilemma => symmetric && t > rr && rr > p && p > s,
            GameClass::Chicken => symmetric && t > rr && rr > s && s > p,
            GameClass::StagHunt => symmetric && rr > t && t > p && p > s,
            GameClass::Deadlock => symmetric && t > p && p > rr && rr > s,
            GameClass::BattleOfTheSexes => {
                let (h, l) = (r(0, 0, 0), r(0, 0, 1));
                symmetric_bos(g) && h > l && l > r(0, 1, 0).max(r(1, 0, 0))
            }
            GameClass::MarketEntry => {
                // Gopher enters (a1) or stays out (a2); Bob fights (b1) or accommodates (b2).
                r(0, 1, 0) > r(1, 0, 0)
                    && r(1, 0, 0) == r(1, 1, 0)
                    && r(1, 0, 0) > r(0, 0, 0)
                    && r(1, 0, 1) == r(1, 1, 1)
                    && r(1, 0, 1) > r(0, 1, 1)
                    && r(0, 1, 1) > r(0, 0, 1)
            }
            GameClass::ImbalancedMatchingPennies => {
                (0..2).all(|a| (0..2).all(|b| r(a, b, 0) == -r(a, b, 1)))
                    && r(0, 0, 0) > 0.0
                    && r(1, 1, 0) > 0.0
                    && r(0, 1, 0) < 0.0
                    && r(1, 0, 0) < 0.0
                    && r(0, 0, 0) != r(1, 1, 0)
            }
        }
    }

    fn instantiate(self, rng: &mut ChaCha8Rng) -> Game {
        let d = distinct_desc(rng, 4);
        let rows = match self {
            GameClass::PrisonersDilemma => dilemma(d[1], d[3], d[0], d[2]),
            GameClass::Chicken => dilemma(d[1], d[2], d[0], d[3]),
            GameClass::StagHunt => dilemma(d[0], d[3], d[1], d[2]),
            GameClass::Deadlock => dilemma(d[2], d[3], d[0], d[1]),
            GameClass::BattleOfTheSexes => {
                let d = distinct_desc(rng, 3);
                vec![vec![d[0], d[1]], vec![d[2], d[2]], vec![d[2], d[2]], vec![d[1], d[0]]]
            }
            GameClass::MarketEntry => {
                let e = distinct_desc(rng, 3);
                let i = distinct_desc(rng, 3);
                vec![vec![e[2], i[2]], vec![e[0], i[1]], vec![e[1], i[0]], vec![e[1], i[0]]]
            }
            GameClass::ImbalancedMatchingPennies => {
                let w = distinct_desc_in(rng, 2, 1, 9);
                let (x, y) = (rng.random_range(1..=9) as f64, rng.random_range(1..=9) as f64);
                vec![vec![w[0], -w[0]], vec![-x, x], vec![-y, y], vec![w[1], -w[1]]]
            }
        };
        two_by_two(rows, Mode::Simultaneous)
    }
}

fn symmetric_bos(g: &Game) -> bool {
    let r = |a: usize, b: usize, p: usize| g.reward(&[a, b]).get(p);
    r(0, 0, 0) == r(1, 1, 1) && r(0, 0, 1) == r(1, 1, 0)
}

/// Symmetric 2x2 rows from (both a1, sucker, temptation, both a2) payoffs.
fn dilemma(reward: f64, sucker: f64, temptation: f64, punishment: f64) -> Vec<Vec<f64>> {
    vec![vec![reward, reward], vec![sucker, temptation], vec![temptation, sucker], vec![punishment, punishment]]
}

fn distinct_desc_in(rng: &mut ChaCha8Rng, n: usize, lo: i32, hi: i32) -> Vec<f64> {
    let mut pool: Vec<i32> = (lo..=hi).collect();
    pool.shuffle(rng);
    let mut picked: Vec<i32> = pool.into_iter().take(n).collect();
    picked.sort_unstable_by(|a, b| b.cmp(a));
    picked.into_iter().map(f64::from).collect()
}

fn distinct_desc(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    distinct_desc_in(rng, n, -5, 10)
}

fn actions_for(n: usize, k: &[usize]) -> Vec<Vec<String>> {
    (0..n).map(|p| (1..=k[p]).map(|i| format!("{}{i}", (b'a' + p as u8) as char)).collect()).collect()
}

fn two_by_two(rows: Vec<Vec<f64>>, mode: Mode) -> Game {
    Game::from_rows(["Gopher", "Bob"], actions_for(2, &[2, 2]), mode, rows).expect("2x2 template")
}

fn random_game(rng: &mut ChaCha8Rng, shape: &[usize]) -> Game {
    let n = shape.len();
    let total: usize = shape.iter().product();
    let rows = (0..total).map(|_| (0..n).map(|_| rng.random_range(-5..=10) as f64).collect()).collect();
    Game::from_rows(PLAYER_NAMES[..n].iter().copied(), actions_for(n, shape), Mode::Simultaneous, rows).expect("random game")
}

fn rng_for(seed: u64, family: Family) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ (family as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn level1(game: Game, player: usize, objectives: Vec<Objective>) -> Problem {
    Problem::Game { tree: GameTree::flat(game), player, objectives, opponent_level: 0 }
}

/// The 35 simultaneous 2x2 games: seven classes, five variants each.
pub fn classic_games(seed: u64, variations: usize) -> Vec<(String, GameClass, Game)> {
    let mut rng = rng_for(seed, Family::Simultaneous);
    let mut out = Vec::new();
    for class in GameClass::ALL {
        for v in 1..=variations {
            out.push((format!("{}-{v}", class.name()), class, class.instantiate(&mut rng)));
        }
    }
    out
}

/// Everyone cooperates (a1) or defects (a2); defecting gains `t`, each other cooperator gives `b`.
fn n_player_dilemma(n: usize, rng: &mut ChaCha8Rng) -> Game {
    let b = rng.random_range(2..=4) as f64;
    let t = rng.random_range(1..b as i32) as f64;
    let shape = vec![2; n];
    let rows = game_profiles(&shape)
        .map(|p| {
            (0..n)
                .map(|i| {
                    let others = p.iter().enumerate().filter(|&(j, &a)| j != i && a == 0).count() as f64;
                    b * others + if p[i] == 1 { t } else { 0.0 }
                })
                .collect()
        })
        .collect();
    Game::from_rows(PLAYER_NAMES[..n].iter().copied(), actions_for(n, &shape), Mode::Simultaneous, rows).expect("dilemma")
}

/// Swerve (a1) or go straight (a2): straight wins `w` if everyone else swerves,
/// crashes for `-c` if anyone else goes straight; swerving pays 0.
fn n_player_chicken(n: usize, rng: &mut ChaCha8Rng) -> Game {
    let w = rng.random_range(2..=6) as f64;
    let c = rng.random_range(3..=8) as f64;
    let shape = vec![2; n];
    let rows = game_profiles(&shape)
        .map(|p| {
            (0..n)
                .map(|i| {
                    let others_straight = p.iter().enumerate().any(|(j, &a)| j != i && a == 1);
                    match (p[i], others_straight) {
                        (0, _) => 0.0,
                        (_, false) => w,
                        (_, true) => -c,
                    }
                })
                .collect()
        })
        .collect();
    Game::from_rows(PLAYER_NAMES[..n].iter().copied(), actions_for(n, &shape), Mode::Simultaneous, rows).expect("chicken")
}

fn game_profiles(shape: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    let total: usize = shape.iter().product();
    (0..total).map(move |mut i| {
        let mut p = vec![0; shape.len()];
        for k in (0..shape.len()).rev() {
            p[k] = i % shape[k];
            i /= shape[k];
        }
        p
    })
}

/// Objective settings of the objectives suite, as (Gopher, Bob) keywords.
pub const OBJECTIVE_SETTINGS: [(&str, &str); 5] =
    [("help", "max"), ("welfare", "max"), ("daxity", "max"), ("max", "help"), ("max", "daxity")];

/// The games of a suite, in a fixed order determined by `(family, variations, seed)`.
pub fn generate_suite(spec: &SuiteSpec) -> Result<Vec<SuiteGame>, HarnessError> {
    let (seed, k) = (spec.seed, spec.variations);
    let mut rng = rng_for(seed, spec.family);
    let classic = classic_games(seed, k);
    let game = |id: String, class: &str, problem: Problem| SuiteGame { id, class: class.to_string(), problem };
    Ok(match spec.family {
        Family::Broker | Family::Negotiation => return Err(HarnessError::NotAGameSuite(spec.family.name().into())),
        Family::Simultaneous => classic
            .into_iter()
            .map(|(id, class, g)| game(id, class.name(), level1(g, 0, Objective::all_max(2))))
            .collect(),
        Family::Sequential => classic
            .into_iter()
            .map(|(id, class, g)| {
                let g = g.with_mode(Mode::Sequential { order: vec![0, 1] }).expect("two players");
                game(id, class.name(), level1(g, 0, Objective::all_max(2)))
            })
            .collect(),
        Family::TwoStage => {
            let mut out = Vec::new();
            for (name, first, second) in [
                ("simultaneous-then-sequential", Mode::Simultaneous, Mode::Sequential { order: vec![0, 1] }),
                ("sequential-then-simultaneous", Mode::Sequential { order: vec![0, 1] }, Mode::Simultaneous),
            ] {
                for v in 1..=3 * k {
                    let a = random_game(&mut rng, &[2, 2]).with_mode(first.clone()).expect("2x2");
                    let b = random_game(&mut rng, &[2, 2]).with_mode(second.clone()).expect("2x2");
                    let root = StageNode::leaf(a).with_continuation(vec![1, 1], StageNode::leaf(b)).expect("valid profile");
                    let tree = GameTree::new(root).expect("same players");
                    let problem = Problem::Game { tree, player: 0, objectives: Objective::all_max(2), opponent_level: 0 };
                    out.push(game(format!("{name}-{v}"), name, problem));
                }
            }
            out
        }
        Family::LargerActions => {
            let mut out = Vec::new();
            for shape in [[3, 3], [4, 3], [5, 5], [6, 6]] {
                let class = format!("{}x{}", shape[0], shape[1]);
                for v in 1..=k {
                    out.push(game(format!("{class}-{v}"), &class, level1(random_game(&mut rng, &shape), 0, Objective::all_max(2))));
                }
            }
            out
        }
        Family::MultiPlayer => {
            let mut out = Vec::new();
            for n in 3..=5 {
                let pd = n_player_dilemma(n, &mut rng);
                out.push(game(format!("{n}-player-prisoners-dilemma"), "prisoners-dilemma", level1(pd, 0, Objective::all_max(n))));
                let ch = n_player_chicken(n, &mut rng);
                out.push(game(format!("{n}-player-chicken"), "chicken", level1(ch, 0, Objective::all_max(n))));
                for v in 1..=k.saturating_sub(2) {
                    let g = random_game(&mut rng, &vec![2; n]);
                    out.push(game(format!("{n}-player-random-{v}"), "random", level1(g, 0, Objective::all_max(n))));
                }
            }
            out
        }
        Family::HiddenState => hidden_suite(&mut rng, k),
        Family::Communication => {
            let classes = [
                GameClass::PrisonersDilemma,
                GameClass::Chicken,
                GameClass::StagHunt,
                GameClass::BattleOfTheSexes,
                GameClass::MarketEntry,
            ];
            let mut out = Vec::new();
            for class in classes {
                for v in 1..=k {
                    let g = class.instantiate(&mut rng);
                    for said in ["b1", "b2"] {
                        let cg = CommunicationGame::new(g.clone(), 1, said).expect("valid announcement");
                        let problem = Problem::Communication { game: cg, objective: Objective::max_own(0) };
                        out.push(game(format!("{}-{v}-says-{said}", class.name()), class.name(), problem));
                    }
                }
            }
            out
        }
        Family::Objectives => {
            let mut out = Vec::new();
            for (gk, bk) in OBJECTIVE_SETTINGS {
                let objectives =
                    vec![Objective::from_keyword(gk, 0, 2).expect("keyword"), Objective::from_keyword(bk, 1, 2).expect("keyword")];
                for (id, class, g) in &classic {
                    out.push(game(format!("{gk}-{bk}-{id}"), class.name(), level1(g.clone(), 0, objectives.clone())));
                }
            }
            out
        }
    })
}

/// Hidden-state structures over two or three states, observed by Gopher:
/// Bob's naive choice reveals the state, pools both states, or separates one
/// state from two that pool.
fn hidden_suite(rng: &mut ChaCha8Rng, variations: usize) -> Vec<SuiteGame> {
    let labels = ["hearts", "spades", "clubs"];
    let mut out = Vec::new();
    for (name, states, want) in [
        ("revealing", 2, vec![vec![0], vec![1]]),
        ("pooling", 2, vec![vec![0], vec![0]]),
        ("partial", 3, vec![vec![0], vec![0], vec![1]]),
    ] {
        for v in 1..=variations {
            let games: Vec<Game> = (0..states)
                .map(|s| loop {
                    let g = random_game(rng, &[2, 2]);
                    let bob = level0(&g, 1, &Objective::max_own(1)).expect("valid game");
                    if bob.best == want[s] {
                        break g;
                    }
                })
                .collect();
            let hs = HiddenStateGame::uniform(
                games.into_iter().enumerate().map(|(i, g)| (labels[i].to_string(), g)).collect(),
                0,
                1,
            )
            .expect("consistent states");
            // Pooled states all play b1, so only b1 is a consistent observation there.
            let observed = if name == "pooling" { 0 } else { rng.random_range(0..2) };
            let problem = Problem::Hidden { game: hs, observed, objective: Objective::max_own(0) };
            out.push(SuiteGame { id: format!("{name}-{v}"), class: name.to_string(), problem });
        }
    }
    out
}
