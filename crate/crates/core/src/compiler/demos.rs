//! Few-shot prompt assembly: demonstrations chosen to match the evaluation
//! problem's family, followed by the evaluation question.

use serde::{Deserialize, Serialize};

use crate::game::{CommunicationGame, Game, GameTree, HiddenStateGame, Mode, Objective, ObjectiveKind, StageNode};
use crate::gateway::estimate_tokens;
use crate::oracle::{best_response_under_belief, hidden_state_posterior, infer_truthfulness, solve_tree};

use super::belief::{compile_belief_trace, compile_communication_trace, render_communication_question, render_hidden_question};
use super::matrix::{compile_exhaustive, compile_level_n_trace, render_level_n_question, render_question};
use super::{CompileError, ReasoningTrace, SpanKind, TraceBuilder};

/// The descending-payoff game (8,7 ... 2,1) and the tie game where Bob's naive values are equal.
pub fn canonical_demo_games() -> [Game; 2] {
    let mk = |rows: [[f64; 2]; 4]| {
        Game::from_rows(
            ["Gopher", "Bob"],
            [["a1", "a2"], ["b1", "b2"]],
            Mode::Simultaneous,
            rows.iter().map(|r| r.to_vec()).collect(),
        )
        .expect("static demo game")
    };
    [
        mk([[8.0, 7.0], [6.0, 5.0], [4.0, 3.0], [2.0, 1.0]]),
        mk([[-3.0, -2.0], [-1.0, -4.0], [1.0, 2.0], [3.0, 4.0]]),
    ]
}

/// An evaluation problem: what is asked and who answers.
#[derive(Debug, Clone, PartialEq)]
pub enum Problem {
    Game { tree: GameTree, player: usize, objectives: Vec<Objective>, opponent_level: usize },
    Hidden { game: HiddenStateGame, observed: usize, objective: Objective },
    Communication { game: CommunicationGame, objective: Objective },
}

impl Problem {
    /// Level-1 question about a single-stage game with everyone maximizing their own reward.
    pub fn matrix(game: Game, player: usize) -> Self {
        let objectives = Objective::all_max(game.num_players());
        Problem::Game { tree: GameTree::flat(game), player, objectives, opponent_level: 0 }
    }

    pub fn family(&self) -> DemoFamily {
        match self {
            Problem::Game { .. } => DemoFamily::Game,
            Problem::Hidden { .. } => DemoFamily::Hidden,
            Problem::Communication { .. } => DemoFamily::Communication,
        }
    }

    fn reference(&self) -> &Game {
        match self {
            Problem::Game { tree, .. } => &tree.root.game,
            Problem::Hidden { game, .. } => game.reference(),
            Problem::Communication { game, .. } => &game.base,
        }
    }

    /// The player who must answer.
    pub fn player(&self) -> usize {
        match self {
            Problem::Game { player, .. } => *player,
            Problem::Hidden { game, .. } => game.observer,
            Problem::Communication { game, .. } => game.listener(),
        }
    }

    pub fn player_name(&self) -> &str {
        self.reference().player_name(self.player())
    }

    pub fn actions(&self) -> &[String] {
        self.reference().actions(self.player())
    }

    /// `"Gopher's action:"`
    pub fn action_marker(&self) -> String {
        format!("{}'s action:", self.player_name())
    }

    pub fn question(&self) -> Result<String, CompileError> {
        match self {
            Problem::Game { tree, player, objectives, .. } => render_question(tree, *player, objectives),
            Problem::Hidden { game, observed, objective } => render_hidden_question(game, *observed, objective),
            Problem::Communication { game, objective } => render_communication_question(game, objective),
        }
    }

    /// The oracle-compiled worked answer.
    pub fn trace(&self) -> Result<ReasoningTrace, CompileError> {
        match self {
            Problem::Game { tree, player, objectives, opponent_level } => {
                compile_exhaustive(tree, *player, objectives, *opponent_level)
            }
            Problem::Hidden { game, observed, objective } => compile_belief_trace(game, *observed, objective),
            Problem::Communication { game, objective } => compile_communication_trace(game, objective),
        }
    }

    /// Best actions straight from the oracle, without rendering anything.
    pub fn oracle_best(&self) -> Result<Vec<usize>, CompileError> {
        Ok(match self {
            Problem::Game { tree, player, objectives, opponent_level } => {
                solve_tree(tree, *player, objectives, *opponent_level)?.best
            }
            Problem::Hidden { game, observed, objective } => {
                let posterior = hidden_state_posterior(game, *observed)?;
                best_response_under_belief(game, &posterior, *observed, objective)?.best
            }
            Problem::Communication { game, objective } => infer_truthfulness(game, objective)?.response.best,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DemoFamily {
    Game,
    Hidden,
    Communication,
}

/// How demonstrations are written.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DemoStyle {
    /// Full compiled reasoning traces.
    Strategic,
    /// Same demonstrations, answers only.
    FewShot,
    /// No demonstrations.
    ZeroShot,
    /// No demonstrations; the answer opens with a step-by-step cue.
    ZeroShotCot,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExampleDemo {
    pub question: String,
    pub trace: ReasoningTrace,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DemoSet {
    pub instruction: String,
    pub demos: Vec<ExampleDemo>,
    pub eval_question: String,
    /// Text the model continues from.
    pub answer_prefix: String,
}

impl DemoSet {
    pub fn flatten(&self) -> String {
        let mut parts = Vec::new();
        if !self.instruction.is_empty() {
            parts.push(self.instruction.clone());
        }
        for d in &self.demos {
            parts.push(format!("{}\n\n{}", d.question, d.trace.text));
        }
        parts.push(format!("{}\n\n{}", self.eval_question, self.answer_prefix));
        parts.join("\n\n")
    }

    pub fn token_estimate(&self) -> usize {
        estimate_tokens(&self.flatten())
    }
}

/// Definitions of any non-default objectives the question uses.
fn objective_instruction(objectives: &[Objective]) -> String {
    let mut parts = Vec::new();
    let mut seen = |kind: &str, text: &str| {
        if !parts.iter().any(|(k, _): &(String, String)| k == kind) {
            parts.push((kind.to_string(), text.to_string()));
        }
    };
    for o in objectives {
        match o.kind {
            ObjectiveKind::MaxOwn => {}
            ObjectiveKind::HelpOther { .. } => {
                seen("help", "A player maximizing another player's reward picks the action that gives that player the most.")
            }
            ObjectiveKind::Welfare => {
                seen("welfare", "A player maximizing the sum of everyone's rewards adds up all players' rewards.")
            }
            ObjectiveKind::Daxity => seen(
                "daxity",
                "A player maximizing the difference takes its own reward minus the other player's reward.",
            ),
            ObjectiveKind::Custom { .. } => {
                seen("custom", "A player maximizing a weighted sum multiplies each reward by its weight and adds them.")
            }
        }
    }
    if parts.is_empty() {
        return String::new();
    }
    let body: Vec<String> = parts.into_iter().map(|(_, t)| t).collect();
    format!("In these games players may have different goals. {}", body.join(" "))
}

/// Demo stage mirroring `node`'s structure on canonical payoffs, when every stage is 2x2.
fn mirror(node: &StageNode, payoffs: &Game) -> Option<StageNode> {
    if node.game.shape() != vec![2, 2] {
        return None;
    }
    let game = payoffs.with_mode(node.game.mode().clone()).ok()?;
    let mut out = StageNode::leaf(game);
    for (profile, next) in &node.continuations {
        out = out.with_continuation(profile.clone(), mirror(next, payoffs)?).ok()?;
    }
    Some(out)
}

fn answer_only(player: &str, action: &str) -> ReasoningTrace {
    let mut b = TraceBuilder::new();
    b.line(SpanKind::Conclusion, format!("A:{player}'s action:{action}"));
    b.finish(Some(action.to_string()))
}

fn game_demos(tree: &GameTree, player: usize) -> Result<Vec<ExampleDemo>, CompileError> {
    let two_player = tree.num_players() == 2;
    let demo_player = if two_player { player } else { 0 };
    let mut out = Vec::new();
    for g in canonical_demo_games() {
        let demo_tree = if two_player {
            mirror(&tree.root, &g).map(GameTree::new).transpose()?.unwrap_or_else(|| GameTree::flat(g.clone()))
        } else {
            GameTree::flat(g.clone())
        };
        let objectives = Objective::all_max(2);
        out.push(ExampleDemo {
            question: render_question(&demo_tree, demo_player, &objectives)?,
            trace: compile_exhaustive(&demo_tree, demo_player, &objectives, 0)?,
        });
    }
    Ok(out)
}

/// A 2x2 game written from (informed action, observer action) rows.
fn oriented(rows: [[f64; 2]; 4], informed: usize) -> Game {
    let players = ["Gopher", "Bob"];
    let mut out = vec![vec![0.0; 2]; 4];
    for (k, r) in rows.iter().enumerate() {
        let (x, y) = (k / 2, k % 2);
        // Row k is (informed plays x, observer plays y); payoffs are (informed, observer).
        let profile = if informed == 0 { [x, y] } else { [y, x] };
        let idx = profile[0] * 2 + profile[1];
        out[idx] = if informed == 0 { r.to_vec() } else { vec![r[1], r[0]] };
    }
    Game::from_rows(players, [["a1", "a2"], ["b1", "b2"]], Mode::Simultaneous, out).expect("static demo game")
}

fn hidden_demos(hs: &HiddenStateGame) -> Result<Vec<ExampleDemo>, CompileError> {
    let inf = hs.informed;
    let hearts = oriented([[8.0, 7.0], [6.0, 5.0], [4.0, 3.0], [2.0, 1.0]], inf);
    let spades = oriented([[2.0, 1.0], [4.0, 3.0], [6.0, 5.0], [8.0, 7.0]], inf);
    let demo = HiddenStateGame::uniform(vec![("hearts".into(), hearts), ("spades".into(), spades)], 1 - inf, inf)?;
    let objective = Objective::max_own(1 - inf);
    let mut out = Vec::new();
    for observed in [0, 1] {
        out.push(ExampleDemo {
            question: render_hidden_question(&demo, observed, &objective)?,
            trace: compile_belief_trace(&demo, observed, &objective)?,
        });
    }
    Ok(out)
}

fn communication_demos(cg: &CommunicationGame) -> Result<Vec<ExampleDemo>, CompileError> {
    let ann = cg.announcer;
    let listener = 1 - ann;
    // Written as (listener action, announcer action) rows with (listener, announcer) payoffs.
    let honest = oriented([[8.0, 7.0], [6.0, 5.0], [4.0, 3.0], [2.0, 1.0]], listener);
    let bluff = oriented([[4.0, 1.0], [0.0, 3.0], [1.0, 2.0], [3.0, 0.0]], listener);
    let first = honest.actions(ann)[0].clone();
    let objective = Objective::max_own(listener);
    let mut out = Vec::new();
    for g in [honest, bluff] {
        let demo = CommunicationGame::new(g, ann, &first)?;
        out.push(ExampleDemo {
            question: render_communication_question(&demo, &objective)?,
            trace: compile_communication_trace(&demo, &objective)?,
        });
    }
    Ok(out)
}

/// Demonstrations for `problem`'s family in the given style, then its question.
pub fn build_demo_set(problem: &Problem, style: DemoStyle) -> Result<DemoSet, CompileError> {
    let (demos, instruction) = match problem {
        Problem::Game { tree, player, objectives, .. } => (game_demos(tree, *player)?, objective_instruction(objectives)),
        Problem::Hidden { game, objective, .. } => {
            (hidden_demos(game)?, objective_instruction(std::slice::from_ref(objective)))
        }
        Problem::Communication { game, objective } => {
            (communication_demos(game)?, objective_instruction(std::slice::from_ref(objective)))
        }
    };
    let eval_question = problem.question()?;
    let (demos, answer_prefix) = match style {
        DemoStyle::Strategic => (demos, "A:".to_string()),
        DemoStyle::FewShot => {
            let demos = demos
                .into_iter()
                .map(|d| {
                    let action = d.trace.final_action.clone().unwrap_or_default();
                    let player = d.trace.text.lines().last().and_then(|l| l.split("'s action:").next()).unwrap_or("");
                    let trace = answer_only(player, &action);
                    ExampleDemo { question: d.question, trace }
                })
                .collect();
            (demos, "A:".to_string())
        }
        DemoStyle::ZeroShot => (Vec::new(), "A:".to_string()),
        DemoStyle::ZeroShotCot => (Vec::new(), "A:Let's think step by step:".to_string()),
    };
    Ok(DemoSet { instruction, demos, eval_question, answer_prefix })
}

/// Prompt for a later cascade level: demonstrations where the opponent's play is given.
pub fn build_level_n_demo_set(
    game: &Game,
    player: usize,
    objectives: &[Objective],
    predicted: &[Vec<usize>],
) -> Result<DemoSet, CompileError> {
    if game.num_players() != 2 {
        return Err(CompileError::Unsupported("cascades are two-player".into()));
    }
    let mut demos = Vec::new();
    let given = [0usize, 1];
    for (g, b) in canonical_demo_games().into_iter().zip(given) {
        let mut sets = vec![Vec::new(); 2];
        sets[1 - player] = vec![b];
        let all = Objective::all_max(2);
        demos.push(ExampleDemo {
            question: render_level_n_question(&g, player, &all, &sets)?,
            trace: compile_level_n_trace(&g, player, &all, &sets)?,
        });
    }
    Ok(DemoSet {
        instruction: objective_instruction(objectives),
        demos,
        eval_question: render_level_n_question(game, player, objectives, predicted)?,
        answer_prefix: "A:".into(),
    })
}
