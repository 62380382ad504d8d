//! Proposing fair splits of an item pot under two fairness notions.
//!
//! `cargo run --example fair_broker`

use strategos::compiler::{compile_proposal_trace, proposal_tries, render_deal_question};
use strategos::harness::random_proposal_gap;
use strategos::negotiation::{broker_propose, generate_contexts, BrokerMode};
use strategos::oracle::Fairness;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let contexts = generate_contexts(3, 50);
    let c = &contexts[0];
    for fairness in [Fairness::Equality, Fairness::Rawlsian] {
        let tries = proposal_tries(&c.pot, &c.values_a, &c.values_b, fairness, 3);
        println!("{}", render_deal_question(&c.pot, &c.values_a, &c.values_b, fairness));
        println!("{}\n", compile_proposal_trace(&c.pot, &c.values_a, &c.values_b, fairness, &tries)?.text);
        for (name, mode) in [("oracle", BrokerMode::Oracle), ("heuristic", BrokerMode::Heuristic)] {
            let gaps: Vec<u32> = contexts
                .iter()
                .map(|x| broker_propose(&x.pot, &x.values_a, &x.values_b, fairness, 3, mode).map(|r| r.gap))
                .collect::<Result<_, _>>()?;
            let mean = gaps.iter().sum::<u32>() as f64 / gaps.len() as f64;
            println!("{fairness} {name}: mean gap {mean:.2}");
        }
        println!("{fairness} random: mean gap {:.2}\n", random_proposal_gap(&contexts, fairness, 1000, 0)?);
    }
    Ok(())
}
