//! Tool-calling traces reach the same answers as the oracle, and the
//! unfactored context (prompt plus trace) outgrows 2048 tokens on large
//! games while every factored context stays within it.

mod common;

use strategos::harness::{generate_suite, Family, SuiteSpec};

use common::factored::{factored_matches_oracle, largest_factored_context, unfactored_context, BUDGET};

#[test]
fn oracle_search_reaches_the_best_response() {
    for family in [Family::LargerActions, Family::MultiPlayer] {
        for seed in 0..3 {
            for g in generate_suite(&SuiteSpec::new(family, seed)).unwrap() {
                if let Err(e) = factored_matches_oracle(&g) {
                    panic!("seed {seed}: {e}");
                }
            }
        }
    }
}

#[test]
fn unfactored_context_exceeds_budget_from_five_by_five() {
    for g in generate_suite(&SuiteSpec::new(Family::LargerActions, 0)).unwrap() {
        let unfactored = unfactored_context(&g.problem);
        let large = g.class == "5x5" || g.class == "6x6";
        assert_eq!(unfactored > BUDGET, large, "{}: {unfactored} tokens", g.id);
        let factored = largest_factored_context(&g.problem);
        assert!(factored <= BUDGET, "{}: factored context of {factored} tokens", g.id);
    }
}
