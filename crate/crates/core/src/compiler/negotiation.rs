//! Negotiation turns: evaluate the incoming offer, update the belief about the
//! opponent's values, then draft a counter-offer.

use serde::{Deserialize, Serialize};

use crate::negotiation::{
    Allocation, ItemValues, NegotiationAction, NegotiationSession, Offer, Pot, ValueBelief, ITEM_PLURALS,
};
use crate::oracle::deal_value;

use super::broker::{rank_items, value_expression};
use super::words::{fmt_num, term};
use super::CompileError;

/// Which reasoning a negotiation turn spells out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AgentMethod {
    /// Offer evaluation, belief update over the opponent's values, then the counter-offer.
    #[default]
    Strategic,
    /// The same turn without any belief about the opponent's values.
    StrategicNoBelief,
}

impl AgentMethod {
    pub const ALL: [AgentMethod; 2] = [AgentMethod::Strategic, AgentMethod::StrategicNoBelief];

    pub fn tracks_belief(self) -> bool {
        self == AgentMethod::Strategic
    }

    pub fn name(self) -> &'static str {
        match self {
            AgentMethod::Strategic => "strategic",
            AgentMethod::StrategicNoBelief => "strategic-no-belief",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|m| m.name() == s)
    }
}

/// One event in an annotated demonstration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "by", rename_all = "lowercase")]
pub enum EpisodeEvent {
    Other { action: NegotiationAction },
    /// The agent's move with free-text commentary written by an annotator.
    Agent { commentary: String, action: NegotiationAction },
}

/// A negotiation played out from the agent's side, used as a demonstration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnotatedEpisode {
    pub pot: Pot,
    pub agent_values: ItemValues,
    pub agent: String,
    pub other: String,
    pub events: Vec<EpisodeEvent>,
}

fn subject(name: &str) -> &'static str {
    match name {
        "Bob" => "he",
        "Gopher" => "it",
        _ => "they",
    }
}

fn action_line(name: &str, action: &NegotiationAction) -> String {
    match action {
        NegotiationAction::Propose { allocation } => format!("{name}: propose: {allocation}"),
        NegotiationAction::Accept => format!("{name}:accept"),
        NegotiationAction::Reject => format!("{name}:reject"),
    }
}

fn header(pot: &Pot, agent: &str, values: &ItemValues, other: &str, prior: Option<&ValueBelief>) -> String {
    let mut out = format!(
        "## New Deal\nitems available:\nbook={}\nhat={}\nball={}\n{agent}'s values: {values}",
        pot.0[0], pot.0[1], pot.0[2]
    );
    if let Some(prior) = prior {
        let p = prior.scores;
        out.push_str(&format!(
            "\nprior over {other}'s values: book={} hat={} ball={}",
            fmt_num(p[0]),
            fmt_num(p[1]),
            fmt_num(p[2])
        ));
    }
    out
}

fn share_fractions(pot: &Pot, a: &Allocation) -> String {
    let parts: Vec<String> = (0..3).map(|i| format!("{}/{} {}", a.0[i], pot.0[i], ITEM_PLURALS[i])).collect();
    parts.join(", ")
}

/// Deterministic part of an agent turn, up to where the agent drafts its move.
struct TurnContext<'a> {
    pot: &'a Pot,
    values: &'a ItemValues,
    agent: &'a str,
    other: &'a str,
    /// Offers so far, as (is_agent, requested allocation).
    offers: &'a [(bool, Allocation)],
    prior: ValueBelief,
    track_belief: bool,
}

impl TurnContext<'_> {
    fn belief_before_latest(&self) -> (ValueBelief, Option<Allocation>) {
        let mut belief = self.prior;
        let incoming: Vec<Allocation> = self.offers.iter().filter(|(mine, _)| !mine).map(|(_, a)| *a).collect();
        let latest = match self.offers.last() {
            Some((false, a)) => Some(*a),
            _ => None,
        };
        let upto = incoming.len() - usize::from(latest.is_some());
        for a in &incoming[..upto] {
            belief = belief.update(a, self.pot);
        }
        (belief, latest)
    }

    fn lines(&self) -> (Vec<String>, ValueBelief) {
        let (agent, other, pot) = (self.agent, self.other, self.pot);
        let total = self.values.pot_value(pot);
        let mut out = vec![format!("Let's think step by step for {agent}:")];
        let (before, latest) = self.belief_before_latest();
        let mut belief = before;
        if let Some(req) = latest {
            out.push(format!(
                "{other} proposes that {} get {} books, {} hats, {} ball",
                subject(other),
                req.0[0],
                req.0[1],
                req.0[2]
            ));
            let mine = pot.remainder(&req);
            let parts: Vec<String> =
                (0..3).map(|i| format!("({}-{})={} {}", pot.0[i], req.0[i], mine.0[i], ITEM_PLURALS[i])).collect();
            out.push(format!("So, {agent} gets {}.", parts.join(", ")));
            out.push(format!("Value of {agent}'s items: {}/{total}", value_expression(&mine, self.values)));
            let value = deal_value(&mine, self.values) as f64;
            let judgement = if value >= 0.8 * total as f64 {
                "a good deal"
            } else if value >= 0.6 * total as f64 {
                "not a great deal"
            } else {
                "not a good deal"
            };
            out.push(format!("This is {judgement} for {agent}."));
            belief = before.update(&req, pot);
            if self.track_belief {
                out.extend(belief_lines(other, pot, &req, &before, &belief));
            }
        }
        let recent = &self.offers[self.offers.len().saturating_sub(2)..];
        if !recent.is_empty() {
            out.push("Old Proposals:".into());
            for (mine, req) in recent {
                let (who, gets) = if *mine { (agent, *req) } else { (other, pot.remainder(req)) };
                out.push(format!("{who}: propose: {req}"));
                out.push(format!("{agent} gets {}.", share_fractions(pot, &gets)));
            }
        }
        out.push("New Proposal that is different from old proposals:".into());
        if self.track_belief {
            out.push(format!("{other} values: {}", rank_items(&belief.scores, &ITEM_PLURALS)));
        }
        out.push(format!("{agent} values: {}", rank_items(&self.values.0.map(f64::from), &ITEM_PLURALS)));
        (out, belief)
    }

    /// Lines after the commentary for the agent's own move.
    fn closing(&self, action: &NegotiationAction) -> Vec<String> {
        let mut out = Vec::new();
        if let NegotiationAction::Propose { allocation } = action {
            out.push(format!("{} will try to get {}.", self.agent, share_fractions(self.pot, allocation)));
            out.push(format!(
                "Value of new proposal: {}/{}",
                value_expression(allocation, self.values),
                self.values.pot_value(self.pot)
            ));
        }
        out.push(action_line(self.agent, action));
        out
    }
}

/// What the agent infers from an incoming request: fractions wanted and the updated belief.
fn belief_lines(other: &str, pot: &Pot, req: &Allocation, before: &ValueBelief, after: &ValueBelief) -> Vec<String> {
    let f = ValueBelief::fractions(req, pot);
    let labels = ["book", "hat", "balls"];
    let wants: Vec<String> = (0..3).map(|i| format!("{}/{} = {} {}", req.0[i], pot.0[i], fmt_num(f[i]), labels[i])).collect();
    let prev: Vec<String> = (0..3).map(|i| format!("{}: {}", labels[i], fmt_num(before.scores[i]))).collect();
    let upd: Vec<String> = (0..3)
        .map(|i| format!("{}: {}+{}={}", labels[i], term(before.scores[i]), term(f[i]), fmt_num(after.scores[i])))
        .collect();
    vec![
        format!("{other} wants {}.", wants.join(", ")),
        format!("Previous belief over values: {}", prev.join(", ")),
        format!("Updated belief: {}", upd.join(", ")),
    ]
}

/// Full text of an annotated episode, as used in demonstrations.
pub fn render_episode(ep: &AnnotatedEpisode) -> Result<String, CompileError> {
    render_episode_as(ep, AgentMethod::Strategic)
}

/// An annotated episode with the agent's turns written as `method` would write them.
pub fn render_episode_as(ep: &AnnotatedEpisode, method: AgentMethod) -> Result<String, CompileError> {
    let prior = ValueBelief::default();
    let track_belief = method.tracks_belief();
    let mut blocks = vec![header(&ep.pot, &ep.agent, &ep.agent_values, &ep.other, track_belief.then_some(&prior))];
    let mut offers: Vec<(bool, Allocation)> = Vec::new();
    for ev in &ep.events {
        match ev {
            EpisodeEvent::Other { action } => {
                blocks.push(action_line(&ep.other, action));
                if let NegotiationAction::Propose { allocation } = action {
                    check(&ep.pot, allocation)?;
                    offers.push((false, *allocation));
                }
            }
            EpisodeEvent::Agent { commentary, action } => {
                let ctx = TurnContext {
                    pot: &ep.pot,
                    values: &ep.agent_values,
                    agent: &ep.agent,
                    other: &ep.other,
                    offers: &offers,
                    prior,
                    track_belief,
                };
                let (mut lines, _) = ctx.lines();
                lines.extend(commentary.lines().map(str::to_string));
                lines.extend(ctx.closing(action));
                blocks.push(lines.join("\n"));
                if let NegotiationAction::Propose { allocation } = action {
                    check(&ep.pot, allocation)?;
                    offers.push((true, *allocation));
                }
            }
        }
    }
    Ok(blocks.join("\n\n"))
}

fn check(pot: &Pot, a: &Allocation) -> Result<(), CompileError> {
    if pot.contains(a) {
        Ok(())
    } else {
        Err(CompileError::InvalidEpisode(format!("proposal {a} exceeds the pot")))
    }
}

/// Prompt for the agent's next move; the model continues after `prompt`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NegotiationPrompt {
    pub prompt: String,
    /// Stop strings that end the agent's turn.
    pub stop: Vec<String>,
    /// Belief about the opponent after the latest offer.
    pub belief: ValueBelief,
}

fn instruction(agent: &str, other: &str) -> String {
    format!(
        "{agent} negotiates with {other} over books, hats and balls. On each turn a player either proposes how many of each item they keep, accepts the last proposal, or rejects and ends the game. {agent}'s goal is the highest total value of the items {agent} keeps."
    )
}

/// Demonstrations, the game so far, and the agent's turn prefilled up to its draft.
pub fn compile_negotiation_turn(
    session: &NegotiationSession,
    agent: usize,
    prior: &ValueBelief,
    style_demos: &[AnnotatedEpisode],
    method: AgentMethod,
) -> Result<NegotiationPrompt, CompileError> {
    let track_belief = method.tracks_belief();
    if agent > 1 {
        return Err(CompileError::InvalidEpisode(format!("no player #{agent}")));
    }
    let other = 1 - agent;
    let (an, on) = (session.names[agent].as_str(), session.names[other].as_str());
    let mut parts = vec![instruction(an, on)];
    for d in style_demos {
        parts.push(render_episode_as(d, method)?);
    }
    parts.push(header(&session.pot, an, &session.values[agent], on, track_belief.then_some(prior)));
    let offers: Vec<(bool, Allocation)> =
        session.history.iter().map(|Offer { actor, allocation }| (*actor == agent, *allocation)).collect();
    for (mine, a) in &offers {
        parts.push(format!("{}: propose: {a}", if *mine { an } else { on }));
    }
    let ctx = TurnContext {
        pot: &session.pot,
        values: &session.values[agent],
        agent: an,
        other: on,
        offers: &offers,
        prior: *prior,
        track_belief,
    };
    let (lines, belief) = ctx.lines();
    parts.push(format!("{}\n", lines.join("\n")));
    Ok(NegotiationPrompt {
        prompt: parts.join("\n\n"),
        stop: vec![format!("\n\n{on}"), format!("\n{on}:")],
        belief,
    })
}

/// The bundled annotated demonstration: Alice negotiating one book, four hats and a ball.
pub fn default_negotiation_demo() -> AnnotatedEpisode {
    serde_json::from_str(include_str!("../../data/negotiation_demo.json")).expect("bundled demo parses")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::negotiation::SessionConfig;

    fn opened() -> NegotiationSession {
        NegotiationSession::new(
            Pot::new(1, 4, 1),
            [ItemValues::new(4, 1, 2), ItemValues::new(0, 2, 4)],
            ["Alice", "Bob"],
            SessionConfig { max_offers: 6, first_mover: 1 },
        )
        .apply(1, NegotiationAction::propose(0, 3, 1))
        .unwrap()
    }

    #[test]
    fn ablation_drops_only_belief_lines() {
        let demos = [default_negotiation_demo()];
        let full = compile_negotiation_turn(&opened(), 0, &ValueBelief::default(), &demos, AgentMethod::Strategic).unwrap();
        let bare =
            compile_negotiation_turn(&opened(), 0, &ValueBelief::default(), &demos, AgentMethod::StrategicNoBelief).unwrap();
        let belief_line = |l: &&str| {
            l.starts_with("Bob wants") || l.contains("belief") || l.starts_with("Bob values:") || l.starts_with("prior over")
        };
        assert!(full.prompt.lines().any(|l| belief_line(&l)));
        assert!(!bare.prompt.lines().any(|l| belief_line(&l)));
        let kept: Vec<&str> = full.prompt.lines().filter(|l| !belief_line(l)).collect();
        assert_eq!(kept, bare.prompt.lines().collect::<Vec<_>>());
        assert_eq!(full.belief, bare.belief);
    }

    #[test]
    fn method_names_round_trip() {
        for m in AgentMethod::ALL {
            assert_eq!(AgentMethod::parse(m.name()), Some(m));
        }
    }
}
