//! Fair-broker metrics over the shipped 100-context scenario file.

use strategos::harness::{random_proposal_gap, score_fairness};
use strategos::negotiation::{broker_propose, load_contexts, BrokerMode, NegotiationContext};
use strategos::oracle::Fairness;

const DRAWS: usize = 1000;
const TOLERANCE: f64 = 0.6;

fn contexts() -> Vec<NegotiationContext> {
    load_contexts(concat!(env!("CARGO_MANIFEST_DIR"), "/data/contexts.txt")).unwrap()
}

#[test]
fn shipped_file_has_one_hundred_contexts() {
    let c = contexts();
    assert_eq!(c.len(), 100);
    for x in &c {
        assert_eq!(x.values_a.pot_value(&x.pot), 10);
        assert_eq!(x.values_b.pot_value(&x.pot), 10);
    }
}

#[test]
fn random_proposals_land_near_reference_gaps() {
    let c = contexts();
    for (fairness, reference) in [(Fairness::Equality, 4.08), (Fairness::Rawlsian, 4.06)] {
        let gap = random_proposal_gap(&c, fairness, DRAWS, 17).unwrap();
        assert!((gap - reference).abs() <= TOLERANCE, "{fairness}: {gap:.3} vs {reference}");
    }
}

#[test]
fn oracle_broker_has_zero_gap_everywhere() {
    let c = contexts();
    for fairness in [Fairness::Equality, Fairness::Rawlsian] {
        let proposals: Vec<_> = c
            .iter()
            .map(|x| {
                let r = broker_propose(&x.pot, &x.values_a, &x.values_b, fairness, 3, BrokerMode::Oracle).unwrap();
                assert_eq!(r.gap, 0);
                r.allocation
            })
            .collect();
        assert_eq!(score_fairness(&proposals, &c, fairness).unwrap(), 0.0);
    }
}

#[test]
fn heuristic_broker_beats_random() {
    let c = contexts();
    for fairness in [Fairness::Equality, Fairness::Rawlsian] {
        let proposals: Vec<_> = c
            .iter()
            .map(|x| broker_propose(&x.pot, &x.values_a, &x.values_b, fairness, 3, BrokerMode::Heuristic).unwrap().allocation)
            .collect();
        let gap = score_fairness(&proposals, &c, fairness).unwrap();
        assert!(gap < random_proposal_gap(&c, fairness, DRAWS, 17).unwrap(), "{fairness}: {gap}");
    }
}
