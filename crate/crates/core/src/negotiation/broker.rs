//! The fair broker: propose splits of a pot that are fair to both players.

use serde::{Deserialize, Serialize};

use crate::compiler::{broker_instruction, compile_proposal_trace, proposal_tries, render_deal_question};
use crate::gateway::{complete, CompletionBackend, CompletionRequest, GatewayError};
use crate::oracle::{optimal_fair_deal, Fairness, OracleError};

use super::{Allocation, ItemValues, Pot};

/// Tokens allowed for one broker answer.
const BROKER_TOKENS: u32 = 1500;

/// How proposals are produced.
#[derive(Clone, Copy)]
pub enum BrokerMode<'a> {
    /// The enumerated optimum.
    Oracle,
    /// Deterministic unit-moving heuristic.
    Heuristic,
    /// A model prompted with a worked broker demonstration.
    Model(&'a dyn CompletionBackend),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BrokerResult {
    /// Player A's share.
    pub allocation: Allocation,
    pub tries: Vec<Allocation>,
    pub value_a: u32,
    pub value_b: u32,
    /// Fairness score of the returned split (difference or minimum).
    pub score: u32,
    pub optimal_score: u32,
    /// |score - optimal_score|.
    pub gap: u32,
    pub response: Option<String>,
}

/// The worked demonstration used in broker prompts.
pub fn broker_demo() -> (Pot, ItemValues, ItemValues) {
    (Pot::new(3, 1, 2), ItemValues::new(1, 3, 2), ItemValues::new(0, 2, 4))
}

/// Instruction, one worked deal, then the new deal.
pub fn broker_prompt(pot: &Pot, values_a: &ItemValues, values_b: &ItemValues, fairness: Fairness, tries: usize) -> String {
    let (dp, da, db) = broker_demo();
    let demo_tries = proposal_tries(&dp, &da, &db, fairness, tries);
    let trace = compile_proposal_trace(&dp, &da, &db, fairness, &demo_tries).expect("demo tries fit the demo pot");
    format!(
        "{}\n\n{}\n{}\n\n{}\n",
        broker_instruction(fairness, tries),
        render_deal_question(&dp, &da, &db, fairness),
        trace.text,
        render_deal_question(pot, values_a, values_b, fairness)
    )
}

/// Allocations proposed in a broker answer, and the final `propose:` line.
fn parse_tries(text: &str) -> (Vec<Allocation>, Option<Allocation>) {
    let mut tries = Vec::new();
    let mut last = None;
    for line in text.lines() {
        let line = line.trim();
        let proposed = if line.starts_with("In a proposal") || line.starts_with("new proposal:") {
            line.split_once("Alice gets ").and_then(|(_, rest)| parse_counts(rest))
        } else {
            None
        };
        tries.extend(proposed);
        if let Some(rest) = line.strip_prefix("propose:") {
            last = rest.trim().parse().ok();
        }
    }
    (tries, last)
}

/// "3 books, 0 hats, 1 balls."
fn parse_counts(s: &str) -> Option<Allocation> {
    let nums: Vec<u32> = s
        .trim_end_matches('.')
        .split(',')
        .map(|part| part.split_whitespace().next().and_then(|n| n.parse().ok()))
        .collect::<Option<Vec<_>>>()?;
    (nums.len() == 3).then(|| Allocation::new(nums[0], nums[1], nums[2]))
}

pub fn broker_propose(
    pot: &Pot,
    values_a: &ItemValues,
    values_b: &ItemValues,
    fairness: Fairness,
    num_tries: usize,
    mode: BrokerMode,
) -> Result<BrokerResult, GatewayError> {
    let oracle = |e: OracleError| GatewayError::InvalidRequest(e.to_string());
    let optimum = optimal_fair_deal(pot, values_a, values_b, fairness).map_err(oracle)?;
    let heuristic = || proposal_tries(pot, values_a, values_b, fairness, num_tries.max(1));
    let (tries, response) = match mode {
        BrokerMode::Oracle => (vec![optimum.allocation], None),
        BrokerMode::Heuristic => (heuristic(), None),
        BrokerMode::Model(backend) => {
            let prompt = broker_prompt(pot, values_a, values_b, fairness, num_tries.max(1));
            let text = complete(backend, &CompletionRequest::new(prompt, &["\n## New Deal", "\n\n\n"], BROKER_TOKENS))?;
            let (mut tries, last) = parse_tries(&text);
            tries.extend(last);
            tries.retain(|a| pot.contains(a));
            if tries.is_empty() {
                tracing::warn!("broker answer named no valid split; using the heuristic");
                tries = heuristic();
            }
            (tries, Some(text))
        }
    };
    let best = crate::compiler::best_try(pot, values_a, values_b, fairness, &tries).expect("at least one try");
    Ok(BrokerResult {
        allocation: best.allocation,
        tries,
        value_a: best.value_a,
        value_b: best.value_b,
        score: best.score,
        optimal_score: optimum.score,
        gap: best.score.abs_diff(optimum.score),
        response,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gateway::ScriptedBackend;

    #[test]
    fn demo_deal_best_try_has_difference_one() {
        let (pot, a, b) = broker_demo();
        let r = broker_propose(&pot, &a, &b, Fairness::Equality, 3, BrokerMode::Heuristic).unwrap();
        assert_eq!((r.score, r.optimal_score, r.gap), (1, 1, 0));
    }

    #[test]
    fn oracle_gap_is_zero() {
        let (pot, a, b) = broker_demo();
        for f in [Fairness::Equality, Fairness::Rawlsian] {
            assert_eq!(broker_propose(&pot, &a, &b, f, 3, BrokerMode::Oracle).unwrap().gap, 0);
        }
    }

    #[test]
    fn model_answer_is_scored_by_its_best_try() {
        let (pot, a, b) = broker_demo();
        let tries = [Allocation::new(3, 1, 0), Allocation::new(3, 0, 1), Allocation::new(2, 0, 2)];
        let trace = compile_proposal_trace(&pot, &a, &b, Fairness::Equality, &tries).unwrap();
        let backend = ScriptedBackend::constant(trace.text);
        let r = broker_propose(&pot, &a, &b, Fairness::Equality, 3, BrokerMode::Model(&backend)).unwrap();
        assert_eq!(r.tries, tries.iter().copied().chain([Allocation::new(3, 0, 1)]).collect::<Vec<_>>());
        assert_eq!((r.allocation, r.gap), (Allocation::new(3, 0, 1), 0));
    }
}
