//! Factored traces: the top-level reasoning delegates each expected-reward
//! computation to a `search` tool call, answered in a fresh context by a
//! short base-case trace.

use crate::game::{Game, GameTree, Mode, Objective, ObjectiveKind};

use super::matrix::render_question;
use super::words::{fmt_num, join_and, join_or, Names};
use super::{CompileError, ReasoningTrace, SpanKind, TraceBuilder};
use crate::dsl::{ident, Arg, Call};

pub const FACTORED_TOOLS: &str = "There are 3 functions that help in solving the problems:\n\
1. search: search(agent, other_agent, objective, action, other_actions) returns the expected reward for the agent. other actions are passed when the agent thinks about other agents.\n\
2. compare: compare(agent, objective, [list of actions]) returns the action that maximizes the agent's objective.\n\
3. mean: mean([list of numbers]) returns the mean of the list of numbers.";

pub fn factored_header() -> &'static str {
    FACTORED_TOOLS
}

/// One expected-reward query: `agent` plays `action`, every other player `q`
/// plays uniformly within `others[q]` (all actions when `None`).
#[derive(Debug, Clone, PartialEq)]
pub struct SearchQuery {
    pub agent: usize,
    pub objective: Objective,
    pub action: usize,
    pub others: Vec<Option<Vec<usize>>>,
}

impl SearchQuery {
    pub fn profiles(&self, game: &Game) -> Vec<Vec<usize>> {
        game.profiles()
            .filter(|p| {
                p[self.agent] == self.action
                    && p.iter().enumerate().all(|(q, a)| {
                        q == self.agent || self.others.get(q).and_then(Option::as_ref).is_none_or(|s| s.contains(a))
                    })
            })
            .collect()
    }

    /// Mean of the objective over the matching profiles.
    pub fn value(&self, game: &Game) -> Result<f64, CompileError> {
        let profiles = self.profiles(game);
        if profiles.is_empty() {
            return Err(CompileError::Unsupported("search over an empty set of profiles".into()));
        }
        let mut sum = 0.0;
        for p in &profiles {
            sum += self.objective.apply(game.reward(p))?;
        }
        Ok(sum / profiles.len() as f64)
    }

    /// The tool call that asks this query.
    pub fn to_call(&self, game: &Game) -> Call {
        let others: Vec<usize> = game.opponents(self.agent);
        let other_arg = if others.len() == 1 {
            ident(game.player_name(others[0]))
        } else {
            Arg::List(others.iter().map(|&q| ident(game.player_name(q))).collect())
        };
        let mut args = vec![
            ident(game.player_name(self.agent)),
            other_arg,
            ident(self.objective.keyword()),
            ident(&game.actions(self.agent)[self.action]),
        ];
        let tagged: Vec<Arg> = others
            .iter()
            .filter_map(|&q| {
                self.others.get(q).and_then(Option::as_ref).map(|set| {
                    Arg::Tagged(
                        game.player_name(q).to_lowercase(),
                        set.iter().map(|&a| ident(&game.actions(q)[a])).collect(),
                    )
                })
            })
            .collect();
        if !tagged.is_empty() {
            args.push(Arg::List(tagged));
        }
        Call::new("search", args)
    }
}

fn keyword_objective(objective: &Objective) -> Result<(), CompileError> {
    if matches!(objective.kind, ObjectiveKind::Custom { .. }) {
        return Err(CompileError::Unsupported("custom objectives have no tool keyword".into()));
    }
    Ok(())
}

/// Question for the recursive prompt: who is naive, who reasons, and the action menu.
pub fn factored_question(game: &Game, player: usize, objectives: &[Objective]) -> Result<String, CompileError> {
    if game.mode() != &Mode::Simultaneous {
        return Err(CompileError::Unsupported("factored prompts cover simultaneous games".into()));
    }
    let base = render_question(&GameTree::flat(game.clone()), player, objectives)?;
    let names = Names::new(game, 0)?;
    let ask = format!("What action should {} play?", names.name(player));
    let others: Vec<String> = game.opponents(player).iter().map(|&q| names.name(q).to_string()).collect();
    let naive = if others.len() == 1 {
        format!("{} does not think about their opponent and only plays the action with the highest expected reward.", others[0])
    } else {
        format!(
            "{} do not think about their opponents and only play the action with the highest expected reward.",
            join_and(&others)
        )
    };
    let actions: Vec<&str> = game.actions(player).iter().map(String::as_str).collect();
    let menu = format!("Pick from {}, {}?", actions.join(", "), join_or(&actions));
    let line = format!(
        "{naive} {} thinks about other players' reasoning. {ask} {menu}",
        names.name(player)
    );
    Ok(base.replace(&ask, &line))
}

/// Level-1 factored trace: each naive opponent, then the player's best response,
/// with every expected reward delegated to `search`.
pub fn compile_factored_recursive(
    game: &Game,
    player: usize,
    objectives: &[Objective],
) -> Result<ReasoningTrace, CompileError> {
    for o in objectives {
        keyword_objective(o)?;
    }
    let names = Names::new(game, 0)?;
    let mut b = TraceBuilder::new();
    let n = game.num_players();
    let mut sets: Vec<Option<Vec<usize>>> = vec![None; n];
    for (i, q) in game.opponents(player).into_iter().enumerate() {
        let name = names.name(q);
        b.line(
            SpanKind::Search,
            if i == 0 {
                format!("A:Let's reason about what {name} wants to first.")
            } else {
                format!("Now let's reason about what {name} wants.")
            },
        );
        let best = choose(&mut b, &names, q, &objectives[q], &vec![None; n])?;
        sets[q] = Some(best);
    }
    let name = names.name(player);
    b.line(SpanKind::Search, format!("Now let's reason for {name}."));
    let known: Vec<String> = game
        .opponents(player)
        .iter()
        .map(|&q| {
            let labels: Vec<&str> = sets[q].as_ref().expect("set above").iter().map(|&a| names.action(q, a)).collect();
            format!("{} plays {}", names.name(q), join_or(&labels))
        })
        .collect();
    let best = choose_with_intro(&mut b, &names, player, &objectives[player], &sets, Some(join_and(&known)))?;
    let action = game.actions(player)[best[0]].clone();
    b.line(SpanKind::Conclusion, format!("{name}'s action:{action}."));
    Ok(b.finish(Some(action)))
}

fn choose(
    b: &mut TraceBuilder,
    names: &Names,
    who: usize,
    objective: &Objective,
    sets: &[Option<Vec<usize>>],
) -> Result<Vec<usize>, CompileError> {
    choose_with_intro(b, names, who, objective, sets, None)
}

fn choose_with_intro(
    b: &mut TraceBuilder,
    names: &Names,
    who: usize,
    objective: &Objective,
    sets: &[Option<Vec<usize>>],
    known: Option<String>,
) -> Result<Vec<usize>, CompileError> {
    let game = names.game;
    let name = names.name(who);
    b.line(SpanKind::Search, format!("{name} wants to {}: {}.", names.goal(objective), names.objective_symbol(objective)));
    if let Some(k) = known {
        b.line(SpanKind::Search, format!("As {k}, we calculate the expected reward for each action,"));
    }
    let mut pairs = Vec::new();
    let mut values = Vec::new();
    for a in 0..game.actions(who).len() {
        let query = SearchQuery { agent: who, objective: objective.clone(), action: a, others: sets.to_vec() };
        let v = query.value(game)?;
        let label = names.action(who, a);
        b.line(
            SpanKind::Search,
            format!("If {name} plays {label}, expected reward for {label} is {} = {}.", query.to_call(game), fmt_num(v)),
        );
        pairs.push(Arg::Pair(label.to_string(), v));
        values.push(v);
    }
    let best = crate::oracle::argmax(&values);
    let compare = Call::new("compare", vec![ident(name), ident(objective.keyword()), Arg::List(pairs)]);
    let result = crate::dsl::Value::Actions(best.iter().map(|&i| names.action(who, i).to_string()).collect());
    b.line(SpanKind::Value, format!("So, {name} will play {compare} = {result}."));
    Ok(best)
}

/// Question for a `search` sub-context: only the rules the query touches, renumbered.
pub fn factored_base_question(game: &Game, query: &SearchQuery) -> Result<String, CompileError> {
    let names = Names::new(game, 0)?;
    let mut lines = vec![format!(
        "Q:{} are playing a game. {} get rewards according to these rules:",
        names.player_list(),
        names.player_list()
    )];
    for (i, p) in query.profiles(game).iter().enumerate() {
        lines.push(names.rule_line_as(i + 1, p));
    }
    let name = names.name(query.agent);
    lines.push(format!("{name}'s objective: {}. What is {name}'s expected reward?", query.objective.keyword()));
    Ok(lines.join("\n"))
}

/// Base-case trace answering one search query with `Answer:<value>.`
pub fn compile_factored_base(game: &Game, query: &SearchQuery) -> Result<ReasoningTrace, CompileError> {
    keyword_objective(&query.objective)?;
    let names = Names::new(game, 0)?;
    let name = names.name(query.agent);
    let goal = names.goal(&query.objective).replacen("maximize", "maximizing", 1);
    let mut b = TraceBuilder::new();
    b.line(SpanKind::Search, format!("A: {name} is {goal}: {}.", names.objective_symbol(&query.objective)));
    let profiles = query.profiles(game);
    if profiles.is_empty() {
        return Err(CompileError::Unsupported("search over an empty set of profiles".into()));
    }
    let mut labels = Vec::new();
    let mut values = Vec::new();
    for (i, p) in profiles.iter().enumerate() {
        let given: Vec<String> = game
            .opponents(query.agent)
            .iter()
            .map(|&q| format!("{} plays {}", names.name(q), names.action(q, p[q])))
            .collect();
        b.line(SpanKind::Search, format!("If {},", join_and(&given)));
        let (clause, v) = names.reward_clause(&query.objective, p)?;
        b.line(SpanKind::Search, format!("{}; {name} maximizes {clause}", names.rule_line_as(i + 1, p)));
        labels.push(names.reward_label(p));
        values.push(v);
    }
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let nums: Vec<String> = values.iter().map(|&v| fmt_num(v)).collect();
    b.line(
        SpanKind::Value,
        format!("Expected reward for {name} = mean([{}]) = mean([{}]) = {}.", labels.join(", "), nums.join(", "), fmt_num(mean)),
    );
    b.line(SpanKind::Conclusion, format!("Answer:{}.", fmt_num(mean)));
    Ok(b.finish(None))
}

/// Demonstrations for the recursive and base-case prompts.
#[derive(Debug, Clone, PartialEq)]
pub struct FactoredDemos {
    pub recursive: Vec<(String, ReasoningTrace)>,
    pub base: Vec<(String, ReasoningTrace)>,
}

fn join_demos(demos: &[(String, ReasoningTrace)]) -> Vec<String> {
    demos.iter().map(|(q, t)| format!("{q}\n\n{}", t.text)).collect()
}

impl FactoredDemos {
    /// Tool descriptions, recursive demonstrations, then the question.
    pub fn recursive_prompt(&self, question: &str) -> String {
        let mut parts = vec![FACTORED_TOOLS.to_string()];
        parts.extend(join_demos(&self.recursive));
        parts.push(format!("{question}\n\nA:"));
        parts.join("\n\n")
    }

    pub fn base_prompt(&self, question: &str) -> String {
        let mut parts = join_demos(&self.base);
        parts.push(format!("{question}\n\nA:"));
        parts.join("\n\n")
    }

    /// The recursive demonstrations as one block of text.
    pub fn recursive_text(&self) -> String {
        let mut parts = vec![FACTORED_TOOLS.to_string()];
        parts.extend(join_demos(&self.recursive));
        parts.join("\n\n")
    }

    pub fn base_text(&self) -> String {
        join_demos(&self.base).join("\n\n")
    }
}

/// Recursive demos on the tie game and the descending game; base demos
/// answering Bob's and Gopher's first searches on the descending game.
pub fn compile_factored_demos() -> Result<FactoredDemos, CompileError> {
    let [descending, tie] = super::demos::canonical_demo_games();
    let objectives = Objective::all_max(2);
    let mut recursive = Vec::new();
    for g in [&tie, &descending] {
        recursive.push((factored_question(g, 0, &objectives)?, compile_factored_recursive(g, 0, &objectives)?));
    }
    let queries = [
        SearchQuery { agent: 1, objective: Objective::max_own(1), action: 0, others: vec![None, None] },
        SearchQuery { agent: 0, objective: Objective::max_own(0), action: 0, others: vec![None, None] },
    ];
    let mut base = Vec::new();
    for q in &queries {
        base.push((factored_base_question(&descending, q)?, compile_factored_base(&descending, q)?));
    }
    Ok(FactoredDemos { recursive, base })
}
