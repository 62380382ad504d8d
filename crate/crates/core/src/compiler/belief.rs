//! Traces that infer something hidden before choosing: the world state from
//! an informed player's move, or whether an announcement is honest.

use crate::game::{CommunicationGame, GameTree, HiddenStateGame, Objective};
use crate::oracle::{hidden_state_posterior, infer_truthfulness, TruthBelief};

use super::matrix::{render_question, render_response};
use super::words::{fmt_num, join_and, join_or, mean_expression, possessive, ranking, term, Names};
use super::{CompileError, ReasoningTrace, SpanKind, TraceBuilder};

/// Probabilities print as small fractions when they are one (`1/2`, `2/3`).
fn fmt_prob(p: f64) -> String {
    if (p - p.round()).abs() < 1e-9 {
        return fmt_num(p);
    }
    for den in 2..=12u32 {
        let num = p * den as f64;
        if (num - num.round()).abs() < 1e-9 {
            return format!("{}/{den}", num.round() as i64);
        }
    }
    fmt_num(p)
}

fn two_player(game: &crate::game::Game) -> Result<(), CompileError> {
    if game.num_players() != 2 {
        return Err(CompileError::Unsupported("belief traces are two-player".into()));
    }
    Ok(())
}

fn distribution(labels: &[String], probs: &[f64]) -> String {
    let parts: Vec<String> = labels.iter().zip(probs).map(|(l, p)| format!("{l}: {}", fmt_prob(*p))).collect();
    parts.join(", ")
}

/// Question for a hidden-state game after the informed player moved.
/// `objective` is the observer's; the informed player maximizes its own reward.
pub fn render_hidden_question(hs: &HiddenStateGame, observed: usize, objective: &Objective) -> Result<String, CompileError> {
    let game = hs.reference();
    two_player(game)?;
    game.check_action(hs.informed, observed)?;
    let names = Names::new(game, 0)?;
    let (inf, obs) = (names.name(hs.informed), names.name(hs.observer));
    let labels: Vec<String> = hs.states().iter().map(|s| s.label.clone()).collect();
    let priors: Vec<f64> = hs.states().iter().map(|s| s.prior).collect();
    let uniform = priors.iter().all(|p| (p - priors[0]).abs() < 1e-12);
    let prior = if uniform {
        "each state is equally likely".to_string()
    } else {
        format!("the chance of each state is {}", distribution(&labels, &priors))
    };
    let mut lines = vec![format!(
        "Q:{} are playing a game. The rewards depend on a hidden state, {}. {inf} can see the state and {obs} cannot; {prior}. {inf} moves first and {obs} sees {inf}'s action.",
        names.player_list(),
        join_or(&labels.iter().map(String::as_str).collect::<Vec<_>>()),
    )];
    for (i, s) in hs.states().iter().enumerate() {
        let n = Names::new(&s.game, i)?;
        lines.push(format!("If the state is {}, {} get rewards according to these rules:", s.label, n.player_list()));
        lines.extend(s.game.profiles().map(|p| n.rule_line(&p)));
    }
    let mut objectives = Objective::all_max(2);
    objectives[hs.observer] = objective.clone();
    lines.push(format!(
        "{inf} played {}. {} What action should {obs} play?",
        game.actions(hs.informed)[observed],
        names.goals_sentence(&objectives)
    ));
    Ok(lines.join("\n"))
}

/// Infer the state from the informed player's move, then best-respond under that belief.
pub fn compile_belief_trace(hs: &HiddenStateGame, observed: usize, objective: &Objective) -> Result<ReasoningTrace, CompileError> {
    let game = hs.reference();
    two_player(game)?;
    let posterior = hidden_state_posterior(hs, observed)?;
    let names = Names::new(game, 0)?;
    let (inf, obs) = (hs.informed, hs.observer);
    let (inf_name, obs_name) = (names.name(inf).to_string(), names.name(obs).to_string());
    let played = game.actions(inf)[observed].clone();
    let mut b = TraceBuilder::new();
    b.line(SpanKind::Belief, format!("A:Let's reason about which state {inf_name} is in first."));
    let inf_objective = Objective::max_own(inf);
    for (i, s) in hs.states().iter().enumerate() {
        let n = Names::new(&s.game, i)?;
        b.line(SpanKind::Belief, format!("If the state is {}, {inf_name} wants to {}.", s.label, n.goal(&inf_objective)));
        let mut values = Vec::new();
        for a in 0..game.actions(inf).len() {
            let label = n.action(inf, a).to_string();
            b.line(SpanKind::Belief, format!("If {inf_name} plays {label},"));
            let mut labels = Vec::new();
            let mut vals = Vec::new();
            for p in s.game.profiles().filter(|p| p[inf] == a) {
                let (clause, v) = n.reward_clause(&inf_objective, &p)?;
                b.line(SpanKind::Belief, format!("{}: {inf_name}'s reward {clause}", n.rule_line(&p)));
                labels.push(n.reward_label(&p));
                vals.push(v);
            }
            let (text, mean) = mean_expression(&labels, &vals);
            b.line(SpanKind::Belief, format!("So, {inf_name}'s expected reward for {label} is {text}"));
            values.push(mean);
        }
        let acts: Vec<&str> = game.actions(inf).iter().map(String::as_str).collect();
        let (text, best) = ranking(&acts, &values);
        let chosen: Vec<&str> = best.iter().map(|&x| acts[x]).collect();
        b.line(SpanKind::Belief, format!("{text} in {} {inf_name} would play {}.", s.label, join_or(&chosen)));
    }
    let fits: Vec<String> = hs
        .states()
        .iter()
        .zip(&posterior.consistent)
        .filter(|(_, &c)| c)
        .map(|(s, _)| s.label.clone())
        .collect();
    let dist = distribution(&posterior.labels, &posterior.probs);
    b.line(
        SpanKind::Belief,
        if fits.is_empty() {
            format!("{inf_name} played {played}, which fits no state. So, {obs_name} keeps the prior {dist}.")
        } else {
            format!("{inf_name} played {played}, which fits {}. So, {obs_name} believes {dist}.", join_and(&fits))
        },
    );

    b.line(SpanKind::Search, format!("Now let's reason for {obs_name}."));
    b.line(SpanKind::Search, format!("{obs_name} wants to {}.", names.goal(objective)));
    let support: Vec<usize> = (0..hs.states().len()).filter(|&i| posterior.probs[i] > 0.0).collect();
    for &i in &support {
        let s = &hs.states()[i];
        let n = Names::new(&s.game, i)?;
        b.line(SpanKind::Search, format!("If the state is {}:", s.label));
        for p in s.game.profiles().filter(|p| p[inf] == observed) {
            let (clause, _) = n.reward_clause(objective, &p)?;
            b.line(SpanKind::Search, format!("{}: {obs_name}'s reward {clause}", n.rule_line(&p)));
        }
    }
    let mut values = Vec::new();
    for a in 0..game.actions(obs).len() {
        let mut weighted = Vec::new();
        let mut products = Vec::new();
        let mut total = 0.0;
        for &i in &support {
            let s = &hs.states()[i];
            let mut profile = vec![0; 2];
            profile[inf] = observed;
            profile[obs] = a;
            let v = objective.apply(s.game.reward(&profile))?;
            let p = posterior.probs[i];
            weighted.push(format!("{}*{}", fmt_prob(p), term(v)));
            products.push(term(p * v));
            total += p * v;
        }
        let expr = if support.len() == 1 {
            format!("{} = {}", weighted[0], fmt_num(total))
        } else {
            format!("{} = {} = {}", weighted.join("+"), products.join("+"), fmt_num(total))
        };
        b.line(SpanKind::Value, format!("So, {obs_name}'s expected reward for {} is {expr}", game.actions(obs)[a]));
        values.push(total);
    }
    let acts: Vec<&str> = game.actions(obs).iter().map(String::as_str).collect();
    let (text, best) = ranking(&acts, &values);
    let chosen: Vec<&str> = best.iter().map(|&x| acts[x]).collect();
    let mut line = format!("{text} {obs_name} will play {}.", join_or(&chosen));
    if best.len() > 1 {
        line.push_str(&format!(" Both are equally good, so {obs_name} picks {}.", chosen[0]));
    }
    b.line(SpanKind::Value, line);
    let action = acts[best[0]].to_string();
    b.line(SpanKind::Conclusion, format!("{obs_name}'s action:{action}"));
    Ok(b.finish(Some(action)))
}

/// Question for a game with an announcement; `objective` is the listener's.
pub fn render_communication_question(cg: &CommunicationGame, objective: &Objective) -> Result<String, CompileError> {
    let game = &cg.base;
    let listener = cg.listener();
    let mut objectives = Objective::all_max(2);
    objectives[listener] = objective.clone();
    let base = render_question(&GameTree::flat(game.clone()), listener, &objectives)?;
    let names = Names::new(game, 0)?;
    let (ann, lis) = (names.name(cg.announcer), names.name(listener));
    let ask = format!("What action should {lis} play?");
    let said = format!(
        "Before playing, {ann} tells {lis}: \"I will play {}.\" {ann} may not be telling the truth.",
        game.actions(cg.announcer)[cg.announcement]
    );
    Ok(base.replace(&ask, &format!("{said} {ask}")))
}

/// Decide whether the announcement is believable, then best-respond to the predicted play.
pub fn compile_communication_trace(cg: &CommunicationGame, objective: &Objective) -> Result<ReasoningTrace, CompileError> {
    let game = &cg.base;
    let inference = infer_truthfulness(cg, objective)?;
    let names = Names::new(game, 0)?;
    let (ann, lis) = (cg.announcer, cg.listener());
    let (ann_name, lis_name) = (names.name(ann).to_string(), names.name(lis).to_string());
    let said = game.actions(ann)[cg.announcement].clone();
    let pair = |l: usize, a: usize| if lis == 0 { vec![l, a] } else { vec![a, l] };
    let mut b = TraceBuilder::new();
    b.line(SpanKind::Belief, format!("A:Let's reason about whether {ann_name} is telling the truth first."));
    b.line(SpanKind::Belief, format!("If {lis_name} believes {ann_name}, {lis_name} would reply to {said}."));
    b.line(SpanKind::Belief, format!("{lis_name} wants to {}.", names.goal(objective)));
    let mut values = Vec::new();
    for l in 0..game.actions(lis).len() {
        let p = pair(l, cg.announcement);
        let (clause, v) = names.reward_clause(objective, &p)?;
        b.line(SpanKind::Belief, format!("{}: {lis_name}'s reward {clause}", names.rule_line(&p)));
        values.push(v);
    }
    let lis_acts: Vec<&str> = game.actions(lis).iter().map(String::as_str).collect();
    let (text, _) = ranking(&lis_acts, &values);
    let replies: Vec<&str> = inference.credulous_replies.iter().map(|&i| lis_acts[i]).collect();
    b.line(SpanKind::Belief, format!("{text} {lis_name} would reply {}.", join_or(&replies)));
    let ann_objective = Objective::max_own(ann);
    b.line(
        SpanKind::Belief,
        format!(
            "{ann_name} expects {lis_name} to reply {}. {ann_name} wants to {}.",
            join_or(&replies),
            names.goal(&ann_objective)
        ),
    );
    for x in 0..game.actions(ann).len() {
        let label = names.action(ann, x).to_string();
        b.line(SpanKind::Belief, format!("If {ann_name} plays {label},"));
        let mut labels = Vec::new();
        let mut vals = Vec::new();
        for &l in &inference.credulous_replies {
            let p = pair(l, x);
            let (clause, v) = names.reward_clause(&ann_objective, &p)?;
            b.line(SpanKind::Belief, format!("{}: {ann_name}'s reward {clause}", names.rule_line(&p)));
            labels.push(names.reward_label(&p));
            vals.push(v);
        }
        let (text, _) = mean_expression(&labels, &vals);
        b.line(SpanKind::Belief, format!("So, {ann_name}'s expected reward for {label} is {text}"));
    }
    let ann_acts: Vec<&str> = game.actions(ann).iter().map(String::as_str).collect();
    let (text, best) = ranking(&ann_acts, &inference.announcer_values);
    let plans: Vec<&str> = best.iter().map(|&i| ann_acts[i]).collect();
    b.line(SpanKind::Belief, format!("{text} {ann_name} would actually play {}.", join_or(&plans)));
    let predicted: Vec<&str> = inference.predicted.iter().map(|&i| ann_acts[i]).collect();
    b.line(
        SpanKind::Belief,
        match inference.belief {
            TruthBelief::Truthful => format!(
                "{ann_name} said {said} and {said} is among {} best actions, so {ann_name} is telling the truth.",
                possessive(&ann_name)
            ),
            TruthBelief::Lying => {
                format!("{ann_name} said {said} but gains more from {}, so {ann_name} is lying.", join_or(&predicted))
            }
        },
    );
    let mut objectives = Objective::all_max(2);
    objectives[lis] = objective.clone();
    let mut sets = vec![Vec::new(); 2];
    sets[ann] = inference.predicted.clone();
    let best = render_response(&mut b, &names, &objectives, lis, &sets, true)?;
    let action = lis_acts[best[0]].to_string();
    b.line(SpanKind::Conclusion, format!("{lis_name}'s action:{action}"));
    Ok(b.finish(Some(action)))
}
