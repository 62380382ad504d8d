//! Broker traces: propose splits, score them for fairness, retry, and pick the best try.

use serde::{Deserialize, Serialize};

use crate::negotiation::{Allocation, ItemValues, Pot, ITEM_NAMES, ITEM_PLURALS};
use crate::oracle::{deal_value, Fairness};

use super::words::ordinal;
use super::{CompileError, ReasoningTrace, SpanKind, TraceBuilder};

const A: &str = "Alice";
const B: &str = "Bob";

pub fn broker_instruction(fairness: Fairness, tries: usize) -> String {
    let goal = match fairness {
        Fairness::Equality => "Propose a split that gives Alice and Bob equal or similar rewards.",
        Fairness::Rawlsian => "Propose a split that makes the smaller of the two rewards as large as possible.",
    };
    format!(
        "Alice and Bob are splitting books, hats and balls between them. Item values change from deal to deal and differ between Alice and Bob. {goal} Make at most {tries} proposals."
    )
}

fn values_line(v: &ItemValues) -> String {
    format!("book={} hat={} ball={}", v.0[0], v.0[1], v.0[2])
}

/// "## New Deal" block: the pot, both value vectors and the question.
pub fn render_deal_question(pot: &Pot, values_a: &ItemValues, values_b: &ItemValues, fairness: Fairness) -> String {
    let q = match fairness {
        Fairness::Equality => "Q: What is a proposal that gives similar payoffs?",
        Fairness::Rawlsian => "Q: What is a proposal that gives the highest lower payoff?",
    };
    format!(
        "## New Deal\nitems available:\nbook={}\nhat={}\nball={}\n{B}'s values: {}\n{A}'s values: {}\n{q}",
        pot.0[0],
        pot.0[1],
        pot.0[2],
        values_line(values_b),
        values_line(values_a)
    )
}

/// "ball:4 > hat:2 > book:0", stable for ties.
pub(crate) fn rank_items(values: &[f64; 3], labels: &[&str; 3]) -> String {
    let mut idx = [0usize, 1, 2];
    idx.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    let mut out = format!("{}:{}", labels[idx[0]], super::fmt_num(values[idx[0]]));
    for w in idx.windows(2) {
        let op = if values[w[0]] == values[w[1]] { "=" } else { ">" };
        out.push_str(&format!(" {op} {}:{}", labels[w[1]], super::fmt_num(values[w[1]])));
    }
    out
}

fn as_f64(v: &ItemValues) -> [f64; 3] {
    v.0.map(f64::from)
}

fn counts(a: &Allocation) -> String {
    format!("{} {}, {} {}, {} {}", a.0[0], ITEM_PLURALS[0], a.0[1], ITEM_PLURALS[1], a.0[2], ITEM_PLURALS[2])
}

/// `(3*1) + (1*3) + (0*2) = 3+3+0 = 6`
pub(crate) fn value_expression(a: &Allocation, v: &ItemValues) -> String {
    let products: Vec<String> = (0..3).map(|i| format!("({}*{})", a.0[i], v.0[i])).collect();
    let terms: Vec<String> = (0..3).map(|i| (a.0[i] * v.0[i]).to_string()).collect();
    format!("{} = {} = {}", products.join(" + "), terms.join("+"), deal_value(a, v))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProposalTry {
    pub allocation: Allocation,
    pub value_a: u32,
    pub value_b: u32,
    pub score: u32,
}

fn evaluate(pot: &Pot, a: Allocation, va: &ItemValues, vb: &ItemValues, fairness: Fairness) -> ProposalTry {
    let value_a = deal_value(&a, va);
    let value_b = deal_value(&pot.remainder(&a), vb);
    ProposalTry { allocation: a, value_a, value_b, score: fairness.score(value_a, value_b) }
}

/// The fairest of `tries` (earliest on ties), with its values.
pub(crate) fn best_try(pot: &Pot, va: &ItemValues, vb: &ItemValues, fairness: Fairness, tries: &[Allocation]) -> Option<ProposalTry> {
    let evaluated: Vec<ProposalTry> = tries.iter().map(|&a| evaluate(pot, a, va, vb, fairness)).collect();
    (!evaluated.is_empty()).then(|| evaluated[best_index(&evaluated, fairness)])
}

fn best_index(tries: &[ProposalTry], fairness: Fairness) -> usize {
    let mut best = 0;
    for (i, t) in tries.iter().enumerate() {
        if fairness.loss(t.value_a, t.value_b) < fairness.loss(tries[best].value_a, tries[best].value_b) {
            best = i;
        }
    }
    best
}

/// Heuristic proposals. The first hands out one unit at a time to whoever is
/// currently poorer, picking the item that player values most; each later try
/// moves the single unit that most improves the best split so far, or repeats
/// it when no move helps.
pub fn proposal_tries(pot: &Pot, values_a: &ItemValues, values_b: &ItemValues, fairness: Fairness, n: usize) -> Vec<Allocation> {
    if n == 0 {
        return Vec::new();
    }
    let mut left = pot.0;
    let mut share = [0u32; 3];
    let (mut ga, mut gb) = (0u32, 0u32);
    while left.iter().any(|&c| c > 0) {
        let to_a = ga <= gb;
        let vals = if to_a { values_a } else { values_b };
        let item = (0..3).filter(|&i| left[i] > 0).max_by(|&x, &y| vals.0[x].cmp(&vals.0[y]).then(y.cmp(&x))).expect("items left");
        left[item] -= 1;
        if to_a {
            share[item] += 1;
            ga += values_a.0[item];
        } else {
            gb += values_b.0[item];
        }
    }
    let mut tries = vec![evaluate(pot, Allocation(share), values_a, values_b, fairness)];
    while tries.len() < n {
        let best = tries[best_index(&tries, fairness)];
        let base = best.allocation.0;
        let mut candidate: Option<ProposalTry> = None;
        for i in 0..3 {
            for delta in [1i64, -1] {
                let c = base[i] as i64 + delta;
                if c < 0 || c > pot.0[i] as i64 {
                    continue;
                }
                let mut next = base;
                next[i] = c as u32;
                let t = evaluate(pot, Allocation(next), values_a, values_b, fairness);
                if tries.iter().any(|x| x.allocation == t.allocation) {
                    continue;
                }
                let beats_best = fairness.loss(t.value_a, t.value_b) < fairness.loss(best.value_a, best.value_b);
                let beats_candidate =
                    candidate.is_none_or(|c| fairness.loss(t.value_a, t.value_b) < fairness.loss(c.value_a, c.value_b));
                if beats_best && beats_candidate {
                    candidate = Some(t);
                }
            }
        }
        tries.push(candidate.unwrap_or(best));
    }
    tries.into_iter().map(|t| t.allocation).collect()
}

fn verdict(fairness: Fairness, t: &ProposalTry, totals: (u32, u32)) -> String {
    match fairness {
        Fairness::Equality => {
            let (hi, lo) = (t.value_a.max(t.value_b), t.value_a.min(t.value_b));
            let judgement = match t.score {
                0 => "This is a great deal as payoffs are equal.",
                1..=2 => "This is a good deal but we might be able to do better.",
                _ => "This is a bad deal as payoffs are not close.",
            };
            format!("Difference in payoffs {hi}-{lo} = {}. {judgement}", t.score)
        }
        Fairness::Rawlsian => {
            let bar = totals.0.min(totals.1) as f64;
            let m = t.score as f64;
            let judgement = if m * 2.0 >= bar {
                "This is a good deal as both get at least half."
            } else if m * 10.0 >= bar * 3.0 {
                "This is a fair deal but we might be able to do better."
            } else {
                "This is a bad deal as one player gets too little."
            };
            format!("Minimum of payoffs is {}. {judgement}", t.score)
        }
    }
}

fn summary_score(fairness: Fairness, t: &ProposalTry) -> String {
    match fairness {
        Fairness::Equality => {
            format!("Difference in payoffs {}-{} = {}.", t.value_a.max(t.value_b), t.value_a.min(t.value_b), t.score)
        }
        Fairness::Rawlsian => format!("Minimum of payoffs is {}.", t.score),
    }
}

/// Renders the given tries (Alice's shares) and the choice among them.
pub fn compile_proposal_trace(
    pot: &Pot,
    values_a: &ItemValues,
    values_b: &ItemValues,
    fairness: Fairness,
    tries: &[Allocation],
) -> Result<ReasoningTrace, CompileError> {
    if tries.is_empty() {
        return Err(CompileError::Unsupported("a proposal trace needs at least one try".into()));
    }
    if let Some(bad) = tries.iter().find(|a| !pot.contains(a)) {
        return Err(CompileError::Unsupported(format!("proposal {bad} exceeds the pot")));
    }
    let totals = (values_a.pot_value(pot), values_b.pot_value(pot));
    let n = tries.len();
    let evaluated: Vec<ProposalTry> = tries.iter().map(|&a| evaluate(pot, a, values_a, values_b, fairness)).collect();
    let gets = |t: &ProposalTry| format!("{A} gets {}/{} and {B} gets {}/{}.", t.value_a, totals.0, t.value_b, totals.1);
    let mut b = TraceBuilder::new();
    for (i, t) in evaluated.iter().enumerate() {
        let last = i + 1 == n;
        b.line(SpanKind::Proposal, if last { format!("Try {}/{n}. last try.", i + 1) } else { format!("Try {}/{n}.", i + 1) });
        b.line(
            SpanKind::Proposal,
            format!("items: book={}, hat={}, ball={}", pot.0[0], pot.0[1], pot.0[2]),
        );
        b.line(SpanKind::Value, format!("{B} values: {}", rank_items(&as_f64(values_b), &ITEM_NAMES)));
        b.line(SpanKind::Value, format!("{A} values: {}", rank_items(&as_f64(values_a), &ITEM_NAMES)));
        if i == 0 {
            let kind = match fairness {
                Fairness::Equality => "with similar payoffs",
                Fairness::Rawlsian => "where the lower payoff is as high as possible",
            };
            b.line(SpanKind::Proposal, format!("In a proposal {kind}, {A} gets {}.", counts(&t.allocation)));
        } else {
            let old = &evaluated[i - 1];
            b.line(SpanKind::Proposal, format!("old proposal: {A} gets {}. {}", counts(&old.allocation), gets(old)));
            let best_before = &evaluated[best_index(&evaluated[..i], fairness)];
            if best_before.allocation == t.allocation {
                b.line(SpanKind::Proposal, "Moving one item does not improve the best proposal, so we keep it.");
            }
            b.line(SpanKind::Proposal, format!("new proposal: {A} gets {}.", counts(&t.allocation)));
        }
        let rest = pot.remainder(&t.allocation);
        let parts: Vec<String> =
            (0..3).map(|k| format!("({}-{})={} {}", pot.0[k], t.allocation.0[k], rest.0[k], ITEM_PLURALS[k])).collect();
        b.line(SpanKind::Proposal, format!("So, {B} gets {}.", parts.join(", ")));
        b.line(SpanKind::Value, format!("Value of proposal for {A}: {}/{}", value_expression(&t.allocation, values_a), totals.0));
        b.line(SpanKind::Value, format!("Value of proposal for {B}: {}/{}", value_expression(&rest, values_b), totals.1));
        b.line(SpanKind::Value, format!("{} {}", gets(t), verdict(fairness, t, totals)));
        if !last {
            b.line(SpanKind::Value, "So, let's try again.");
        }
    }
    b.line(SpanKind::Value, "Summary of tries:");
    for (i, t) in evaluated.iter().enumerate() {
        b.line(SpanKind::Value, format!("Try {}/{n}: {} {}", i + 1, gets(t), summary_score(fairness, t)));
    }
    let best = best_index(&evaluated, fairness);
    let chosen = &evaluated[best];
    b.line(SpanKind::Value, format!("So, the best deal is the {} try.", ordinal(best + 1)));
    let criterion = match fairness {
        Fairness::Equality => format!("Minimum difference is {}.", chosen.score),
        Fairness::Rawlsian => format!("Maximum of the minimum payoffs is {}.", chosen.score),
    };
    b.line(
        SpanKind::Value,
        format!("{criterion} So, we go with try {}/{n}. {A} gets {}.", best + 1, counts(&chosen.allocation)),
    );
    let action = chosen.allocation.to_string();
    b.line(SpanKind::Conclusion, format!("propose: {action}"));
    Ok(b.finish(Some(action)))
}
