use crate::game::{Game, GameTree, Mode, Objective, RewardVector, StageNode};

use super::words::{join_and, join_or, mean_expression, ranking, Names};
use super::{CompileError, ReasoningTrace, SpanKind, TraceBuilder};

/// Stages in preorder; the root is stage 1.
fn stages(root: &StageNode) -> Vec<&StageNode> {
    fn walk<'a>(n: &'a StageNode, out: &mut Vec<&'a StageNode>) {
        out.push(n);
        for c in n.continuations.values() {
            walk(c, out);
        }
    }
    let mut out = Vec::new();
    walk(root, &mut out);
    out
}

fn stage_index(all: &[&StageNode], node: &StageNode) -> usize {
    all.iter().position(|s| std::ptr::eq(*s, node)).expect("node belongs to the tree")
}

fn check_objectives(game: &Game, objectives: &[Objective]) -> Result<(), CompileError> {
    if objectives.len() != game.num_players() {
        return Err(crate::game::GameError::LengthMismatch { expected: game.num_players(), got: objectives.len() }.into());
    }
    Ok(())
}

fn mode_sentence(game: &Game) -> Option<String> {
    match game.mode() {
        Mode::Simultaneous => None,
        Mode::Sequential { order } if order.len() == 2 => {
            let (first, second) = (game.player_name(order[0]), game.player_name(order[1]));
            Some(format!("{first} moves first and {second} sees {first}'s action before choosing."))
        }
        Mode::Sequential { order } => {
            let names: Vec<String> = order.iter().map(|&p| game.player_name(p).to_string()).collect();
            Some(format!("Players move in the order {} and each sees the earlier moves.", join_and(&names)))
        }
    }
}

fn rules(names: &Names, node: &StageNode, all: &[&StageNode]) -> Vec<String> {
    names
        .game
        .profiles()
        .map(|p| match node.continuations.get(&p) {
            Some(next) => format!(
                "{}. {}, then they play stage {}",
                names.rule_number(&p),
                names.moves(&p),
                stage_index(all, next) + 1
            ),
            None => names.rule_line(&p),
        })
        .collect()
}

/// The question posed about a game: rules, goals and whose move is asked for.
pub fn render_question(tree: &GameTree, player: usize, objectives: &[Objective]) -> Result<String, CompileError> {
    let game = &tree.root.game;
    check_objectives(game, objectives)?;
    game.check_action(player, 0).map_err(CompileError::from)?;
    let all = stages(&tree.root);
    let mut lines = Vec::new();
    for (i, node) in all.iter().enumerate() {
        let names = Names::new(&node.game, i)?;
        let mut intro = String::new();
        if i == 0 {
            intro.push_str(&format!("Q:{} are playing a game", names.player_list()));
            if all.len() > 1 {
                intro.push_str(&format!(" with {} stages. In stage 1, ", all.len()));
            } else {
                intro.push_str(". ");
            }
        } else {
            intro.push_str(&format!("In stage {}, ", i + 1));
        }
        if let Some(m) = mode_sentence(&node.game) {
            intro.push_str(&m);
            intro.push(' ');
        }
        intro.push_str(&format!("{} get rewards according to these rules:", names.player_list()));
        lines.push(intro);
        lines.extend(rules(&names, node, &all));
    }
    let names = Names::new(game, 0)?;
    lines.push(format!("{} What action should {} play?", names.goals_sentence(objectives), names.name(player)));
    Ok(lines.join("\n"))
}

/// Worked answer for `player` with opponents reasoning at `opponent_level`
/// (0 = naive). Staged games are solved last stage first.
pub fn compile_exhaustive(
    tree: &GameTree,
    player: usize,
    objectives: &[Objective],
    opponent_level: usize,
) -> Result<ReasoningTrace, CompileError> {
    let game = &tree.root.game;
    check_objectives(game, objectives)?;
    game.check_action(player, 0).map_err(CompileError::from)?;
    let all = stages(&tree.root);
    let mut r = Renderer { objectives, player, opponent_level, all: &all, b: TraceBuilder::new(), started: false };
    let best = r.stage(0)?.1;
    let action = game.actions(player)[best[0]].clone();
    r.say(SpanKind::Conclusion, format!("{}'s action:{action}", game.player_name(player)));
    Ok(r.b.finish(Some(action)))
}

/// [`compile_exhaustive`] for a single-stage game.
pub fn compile_game(
    game: &Game,
    player: usize,
    objectives: &[Objective],
    opponent_level: usize,
) -> Result<ReasoningTrace, CompileError> {
    compile_exhaustive(&GameTree::flat(game.clone()), player, objectives, opponent_level)
}

/// Question for a later cascade level: the opponents' predicted play is given.
/// `predicted[q]` lists the actions opponent `q` is expected to play (ignored for `player`).
pub fn render_level_n_question(
    game: &Game,
    player: usize,
    objectives: &[Objective],
    predicted: &[Vec<usize>],
) -> Result<String, CompileError> {
    let base = render_question(&GameTree::flat(game.clone()), player, objectives)?;
    let names = Names::new(game, 0)?;
    let known = known_play(&names, player, predicted)?;
    let ask = format!("What action should {} play?", names.name(player));
    let given = if game.num_players() == 2 {
        let q = 1 - player;
        format!(
            "{} thought through {}'s actions and {} will play {}.",
            names.name(q),
            names.name(player),
            names.name(q),
            join_or(&predicted[q].iter().map(|&a| names.action(q, a)).collect::<Vec<_>>())
        )
    } else {
        format!("The other players thought through {}'s actions: {known}.", names.name(player))
    };
    Ok(base.replace(&ask, &format!("{given} {ask}")))
}

/// Worked answer for a later cascade level given the opponents' predicted play.
pub fn compile_level_n_trace(
    game: &Game,
    player: usize,
    objectives: &[Objective],
    predicted: &[Vec<usize>],
) -> Result<ReasoningTrace, CompileError> {
    check_objectives(game, objectives)?;
    let all_nodes = StageNode::leaf(game.clone());
    let all = vec![&all_nodes];
    let mut r = Renderer { objectives, player, opponent_level: 0, all: &all, b: TraceBuilder::new(), started: false };
    let names = Names::new(game, 0)?;
    let mut sets = vec![Vec::new(); game.num_players()];
    for q in game.opponents(player) {
        let set = predicted.get(q).filter(|s| !s.is_empty()).ok_or_else(|| {
            CompileError::Unsupported(format!("no predicted play for {}", game.player_name(q)))
        })?;
        for &a in set {
            game.check_action(q, a)?;
        }
        sets[q] = set.clone();
    }
    r.say(SpanKind::Search, format!("{}.", known_play(&names, player, &sets)?));
    let best = r.respond(&names, player, &sets, true)?;
    let action = game.actions(player)[best[0]].clone();
    r.say(SpanKind::Conclusion, format!("{}'s action:{action}", game.player_name(player)));
    Ok(r.b.finish(Some(action)))
}

/// "Bob will play b1 or b2 and Carol will play c1"
fn known_play(names: &Names, player: usize, sets: &[Vec<usize>]) -> Result<String, CompileError> {
    let mut parts = Vec::new();
    for q in names.game.opponents(player) {
        let set = sets.get(q).ok_or_else(|| CompileError::Unsupported("missing predicted play".into()))?;
        let labels: Vec<&str> = set.iter().map(|&a| names.action(q, a)).collect();
        parts.push(format!("{} will play {}", names.name(q), join_or(&labels)));
    }
    Ok(join_and(&parts))
}

/// Actions named in the last "will play X or Y" of a trace, when all are valid.
pub fn parse_predicted_set(text: &str, valid: &[String]) -> Option<Vec<String>> {
    let at = text.rfind(" will play ")?;
    let rest = &text[at + " will play ".len()..];
    let end = rest.find(['.', '\n']).unwrap_or(rest.len());
    let labels: Vec<String> = rest[..end].split(" or ").map(|s| s.trim().to_string()).collect();
    (!labels.is_empty() && labels.iter().all(|l| valid.contains(l))).then_some(labels)
}

struct Renderer<'a> {
    objectives: &'a [Objective],
    player: usize,
    opponent_level: usize,
    all: &'a [&'a StageNode],
    b: TraceBuilder,
    started: bool,
}

/// All profiles of `game` where `player` plays `own` and every other player `q` plays within `sets[q]`.
fn restricted(game: &Game, player: usize, own: usize, sets: &[Vec<usize>]) -> Vec<Vec<usize>> {
    game.profiles()
        .filter(|p| p[player] == own && (0..p.len()).all(|q| q == player || sets[q].contains(&p[q])))
        .collect()
}

impl Renderer<'_> {
    fn say(&mut self, kind: SpanKind, line: impl Into<String>) {
        let line = line.into();
        if self.started {
            self.b.line(kind, line);
        } else {
            self.started = true;
            self.b.line(kind, format!("A:{line}"));
        }
    }

    /// Solves one stage. Returns the expected reward vector and the root player's best actions.
    fn stage(&mut self, idx: usize) -> Result<(RewardVector, Vec<usize>), CompileError> {
        let node = self.all[idx];
        let outer = Names::new(&node.game, idx)?;
        let mut reduced = node.game.clone();
        for (profile, next) in &node.continuations {
            let child = stage_index(self.all, next);
            self.say(
                SpanKind::Search,
                format!("Let's first reason about stage {}, which is played after {}.", child + 1, outer.moves(profile)),
            );
            let (outcome, _) = self.stage(child)?;
            let parts: Vec<String> = (0..reduced.num_players())
                .map(|p| format!("{}={}", outer.var(p, profile), super::fmt_num(outcome.get(p))))
                .collect();
            self.say(
                SpanKind::Value,
                format!("So, playing {} leads to stage {} and gives {}.", outer.moves(profile), child + 1, parts.join(" and ")),
            );
            reduced = reduced.with_payoff(reduced.index_of(profile), outcome);
        }
        let names = Names::new(&reduced, idx)?;
        let top = idx == 0;
        match reduced.mode().clone() {
            Mode::Sequential { order } if order[0] == self.player => self.leader(&names, top),
            _ => {
                let mut sets = vec![Vec::new(); reduced.num_players()];
                for q in reduced.opponents(self.player) {
                    sets[q] = self.level(&names, q, self.opponent_level)?;
                }
                let best = self.respond(&names, self.player, &sets, top)?;
                sets[self.player] = best.clone();
                Ok((expected_outcome(&reduced, &sets), best))
            }
        }
    }

    /// Renders `player` reasoning at `level` (not the root's final answer). Returns its predicted set.
    fn level(&mut self, names: &Names, player: usize, level: usize) -> Result<Vec<usize>, CompileError> {
        if level == 0 {
            return self.naive(names, player);
        }
        let mut sets = vec![Vec::new(); names.game.num_players()];
        for q in names.game.opponents(player) {
            sets[q] = self.level(names, q, level - 1)?;
        }
        self.respond(names, player, &sets, false)
    }

    fn naive(&mut self, names: &Names, q: usize) -> Result<Vec<usize>, CompileError> {
        let name = names.name(q).to_string();
        if self.started {
            self.say(SpanKind::Search, format!("Now let's reason about what {name} wants."));
        } else {
            self.say(SpanKind::Search, format!("Let's reason about what {name} wants to first."));
        }
        let objective = &self.objectives[q];
        self.say(SpanKind::Search, format!("{name} wants to {}.", names.goal(objective)));
        let all_sets: Vec<Vec<usize>> = names.game.shape().into_iter().map(|n| (0..n).collect()).collect();
        let mut values = Vec::new();
        for x in 0..names.game.actions(q).len() {
            let label = names.action(q, x).to_string();
            self.say(SpanKind::Search, format!("If {name} plays {label},"));
            let v = self.enumerate(names, q, objective, &restricted(names.game, q, x, &all_sets), &label)?;
            values.push(v);
        }
        let labels: Vec<&str> = names.game.actions(q).iter().map(String::as_str).collect();
        let (text, best) = ranking(&labels, &values);
        let chosen: Vec<&str> = best.iter().map(|&i| labels[i]).collect();
        self.say(SpanKind::Value, format!("{text} {name} will play {}.", join_or(&chosen)));
        Ok(best)
    }

    /// Lists the given profiles with `who`'s scalarized reward and averages them.
    fn enumerate(
        &mut self,
        names: &Names,
        who: usize,
        objective: &Objective,
        profiles: &[Vec<usize>],
        action: &str,
    ) -> Result<f64, CompileError> {
        let name = names.name(who).to_string();
        let mut labels = Vec::new();
        let mut values = Vec::new();
        for p in profiles {
            let (clause, v) = names.reward_clause(objective, p)?;
            self.say(SpanKind::Search, format!("{}: {name}'s reward {clause}", names.rule_line(p)));
            labels.push(names.reward_label(p));
            values.push(v);
        }
        let (text, mean) = mean_expression(&labels, &values);
        self.say(SpanKind::Value, format!("So, {name}'s expected reward for {action} is {text}"));
        Ok(mean)
    }

    /// Best response of `player` to opponents playing uniformly within `sets`.
    fn respond(&mut self, names: &Names, player: usize, sets: &[Vec<usize>], top: bool) -> Result<Vec<usize>, CompileError> {
        let game = names.game;
        let name = names.name(player).to_string();
        let objective = &self.objectives[player];
        self.say(SpanKind::Search, format!("Now let's reason for {name}."));
        self.say(SpanKind::Search, format!("{name} wants to {}.", names.goal(objective)));
        let known: Vec<String> = game
            .opponents(player)
            .into_iter()
            .map(|q| {
                let labels: Vec<&str> = sets[q].iter().map(|&a| names.action(q, a)).collect();
                format!("{} plays {}", names.name(q), join_or(&labels))
            })
            .collect();
        let known = join_and(&known);
        let singletons = game.opponents(player).iter().all(|&q| sets[q].len() == 1);
        let mut values = Vec::new();
        if singletons {
            self.say(
                SpanKind::Search,
                format!("As we know {known} we dont need to calculate expected reward for each action, listing actions where {known} is enough."),
            );
            for a in 0..game.actions(player).len() {
                let p = &restricted(game, player, a, sets)[0];
                let (clause, v) = names.reward_clause(objective, p)?;
                self.say(SpanKind::Search, format!("{}: {name}'s reward {clause}", names.rule_line(p)));
                values.push(v);
            }
            self.say(SpanKind::Value, format!("We know {known}, so {name} will pick the action with the highest payoff."));
        } else {
            self.say(SpanKind::Search, format!("As {known}, we calculate the expected reward for each action,"));
            for a in 0..game.actions(player).len() {
                let label = names.action(player, a).to_string();
                self.say(SpanKind::Search, format!("If {name} plays {label},"));
                values.push(self.enumerate(names, player, objective, &restricted(game, player, a, sets), &label)?);
            }
        }
        Ok(self.conclude(names, player, &values, top))
    }

    fn conclude(&mut self, names: &Names, player: usize, values: &[f64], top: bool) -> Vec<usize> {
        let name = names.name(player).to_string();
        let labels: Vec<&str> = names.game.actions(player).iter().map(String::as_str).collect();
        let (text, best) = ranking(&labels, values);
        let chosen: Vec<&str> = best.iter().map(|&i| labels[i]).collect();
        let mut line = format!("{text} {name} will play {}.", join_or(&chosen));
        if top && best.len() > 1 {
            line.push_str(&format!(" Both are equally good, so {name} picks {}.", chosen[0]));
        }
        self.say(SpanKind::Value, line);
        best
    }

    /// Sequential stage where the root player moves first and the follower best-responds.
    fn leader(&mut self, names: &Names, top: bool) -> Result<(RewardVector, Vec<usize>), CompileError> {
        let game = names.game;
        if game.num_players() != 2 {
            return Err(CompileError::Unsupported("sequential stages with more than two players".into()));
        }
        let p = self.player;
        let f = 1 - p;
        let (pn, fname) = (names.name(p).to_string(), names.name(f).to_string());
        let pair = |a: usize, b: usize| if p == 0 { vec![a, b] } else { vec![b, a] };
        self.say(SpanKind::Search, format!("Let's reason about how {fname} will respond to each of {pn}'s actions first."));
        self.say(SpanKind::Search, format!("{fname} wants to {}.", names.goal(&self.objectives[f])));
        let f_labels: Vec<&str> = game.actions(f).iter().map(String::as_str).collect();
        let mut replies = Vec::new();
        for a in 0..game.actions(p).len() {
            self.say(SpanKind::Search, format!("If {pn} plays {}, {fname} sees it and chooses between:", names.action(p, a)));
            let mut vals = Vec::new();
            for b in 0..game.actions(f).len() {
                let prof = pair(a, b);
                let (clause, v) = names.reward_clause(&self.objectives[f], &prof)?;
                self.say(SpanKind::Search, format!("{}: {fname}'s reward {clause}", names.rule_line(&prof)));
                vals.push(v);
            }
            let (text, best) = ranking(&f_labels, &vals);
            let chosen: Vec<&str> = best.iter().map(|&i| f_labels[i]).collect();
            self.say(SpanKind::Value, format!("{text} {fname} will reply {}.", join_or(&chosen)));
            replies.push(best);
        }
        self.say(SpanKind::Search, format!("Now let's reason for {pn}."));
        self.say(SpanKind::Search, format!("{pn} wants to {}.", names.goal(&self.objectives[p])));
        let mut values = Vec::new();
        for (a, reply) in replies.iter().enumerate() {
            let chosen: Vec<&str> = reply.iter().map(|&i| f_labels[i]).collect();
            let label = names.action(p, a).to_string();
            self.say(SpanKind::Search, format!("If {pn} plays {label}, {fname} replies {}:", join_or(&chosen)));
            let profiles: Vec<Vec<usize>> = reply.iter().map(|&b| pair(a, b)).collect();
            let objectives = self.objectives;
            values.push(self.enumerate(names, p, &objectives[p], &profiles, &label)?);
        }
        let best = self.conclude(names, p, &values, top);
        let mut parts = Vec::new();
        let wa = 1.0 / best.len() as f64;
        for &a in &best {
            let wb = wa / replies[a].len() as f64;
            for &b in &replies[a] {
                parts.push((wb, game.reward(&pair(a, b)).clone()));
            }
        }
        let outcome = RewardVector::weighted_sum(parts.iter().map(|(w, r)| (*w, r))).expect("nonempty argmax");
        Ok((outcome, best))
    }
}

/// Appends `player`'s best response to opponents playing within `sets` to an
/// existing trace. Returns the best actions.
pub(crate) fn render_response(
    b: &mut TraceBuilder,
    names: &Names,
    objectives: &[Objective],
    player: usize,
    sets: &[Vec<usize>],
    top: bool,
) -> Result<Vec<usize>, CompileError> {
    let all: Vec<&StageNode> = Vec::new();
    let mut r = Renderer { objectives, player, opponent_level: 0, all: &all, b: std::mem::take(b), started: true };
    let out = r.respond(names, player, sets, top);
    *b = r.b;
    out
}

/// Expected rewards with every player uniform over its set.
fn expected_outcome(game: &Game, sets: &[Vec<usize>]) -> RewardVector {
    let profiles: Vec<Vec<usize>> =
        game.profiles().filter(|p| p.iter().enumerate().all(|(q, a)| sets[q].contains(a))).collect();
    let w = 1.0 / profiles.len() as f64;
    RewardVector::weighted_sum(profiles.iter().map(|p| (w, game.reward(p)))).expect("every set is nonempty")
}
