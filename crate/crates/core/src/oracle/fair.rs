use serde::{Deserialize, Serialize};

use crate::negotiation::{Allocation, ItemValues, Pot};

use super::OracleError;

/// Largest number of splits the exhaustive search will visit.
pub const MAX_ENUMERATION: u128 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Fairness {
    /// Minimize |V_A - V_B|.
    Equality,
    /// Maximize min(V_A, V_B).
    Rawlsian,
}

impl Fairness {
    /// Fairness score of a pair of deal values, oriented so that lower is better.
    pub(crate) fn loss(self, va: u32, vb: u32) -> i64 {
        match self {
            Fairness::Equality => (va as i64 - vb as i64).abs(),
            Fairness::Rawlsian => -(va.min(vb) as i64),
        }
    }

    /// Fairness score in its natural orientation: difference or minimum.
    pub fn score(self, va: u32, vb: u32) -> u32 {
        match self {
            Fairness::Equality => va.abs_diff(vb),
            Fairness::Rawlsian => va.min(vb),
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "equality" => Some(Fairness::Equality),
            "rawlsian" => Some(Fairness::Rawlsian),
            _ => None,
        }
    }
}

impl std::fmt::Display for Fairness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Fairness::Equality => "equality",
            Fairness::Rawlsian => "rawlsian",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FairDeal {
    /// Items given to player A; player B receives the remainder.
    pub allocation: Allocation,
    pub value_a: u32,
    pub value_b: u32,
    /// Optimal fairness score (difference for equality, minimum for Rawlsian).
    pub score: u32,
}

pub fn deal_value(allocation: &Allocation, values: &ItemValues) -> u32 {
    allocation.0.iter().zip(values.0.iter()).map(|(c, v)| c * v).sum()
}

/// Every split of `pot` as player A's share, in lexicographic order.
pub fn enumerate_allocations(pot: &Pot) -> Result<Vec<Allocation>, OracleError> {
    let size: u128 = pot.0.iter().map(|&c| c as u128 + 1).product();
    if size > MAX_ENUMERATION {
        return Err(OracleError::EnumerationTooLarge(size));
    }
    let mut out = Vec::with_capacity(size as usize);
    for a in 0..=pot.0[0] {
        for b in 0..=pot.0[1] {
            for c in 0..=pot.0[2] {
                out.push(Allocation([a, b, c]));
            }
        }
    }
    Ok(out)
}

/// Exhaustive search for the fairest split; ties go to the lexicographically smallest share.
pub fn optimal_fair_deal(
    pot: &Pot,
    values_a: &ItemValues,
    values_b: &ItemValues,
    fairness: Fairness,
) -> Result<FairDeal, OracleError> {
    let mut best: Option<(i64, Allocation, u32, u32)> = None;
    for alloc in enumerate_allocations(pot)? {
        let va = deal_value(&alloc, values_a);
        let vb = deal_value(&pot.remainder(&alloc), values_b);
        let loss = fairness.loss(va, vb);
        if best.as_ref().is_none_or(|(l, ..)| loss < *l) {
            best = Some((loss, alloc, va, vb));
        }
    }
    let (_, allocation, value_a, value_b) = best.expect("enumeration always yields the empty split");
    Ok(FairDeal { allocation, value_a, value_b, score: fairness.score(value_a, value_b) })
}

/// |fairness(proposal) - fairness(optimum)| for player A's share `proposal`.
pub fn fairness_gap(
    proposal: &Allocation,
    pot: &Pot,
    values_a: &ItemValues,
    values_b: &ItemValues,
    fairness: Fairness,
) -> Result<u32, OracleError> {
    let opt = optimal_fair_deal(pot, values_a, values_b, fairness)?;
    let va = deal_value(proposal, values_a);
    let vb = deal_value(&pot.remainder(proposal), values_b);
    Ok(fairness.score(va, vb).abs_diff(opt.score))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn broker_demo() -> (Pot, ItemValues, ItemValues) {
        (Pot([3, 1, 2]), ItemValues([1, 3, 2]), ItemValues([0, 2, 4]))
    }

    #[test]
    fn broker_demo_equality_optimum_is_one() {
        let (pot, a, b) = broker_demo();
        let deal = optimal_fair_deal(&pot, &a, &b, Fairness::Equality).unwrap();
        assert_eq!(deal.score, 1);
        // Re-enumerate: no split beats it.
        for alloc in enumerate_allocations(&pot).unwrap() {
            let d = deal_value(&alloc, &a).abs_diff(deal_value(&pot.remainder(&alloc), &b));
            assert!(d >= deal.score);
        }
        assert_eq!(fairness_gap(&Allocation([3, 0, 1]), &pot, &a, &b, Fairness::Equality).unwrap(), 0);
        assert_eq!(fairness_gap(&Allocation([3, 1, 0]), &pot, &a, &b, Fairness::Equality).unwrap(), 1);
    }

    #[test]
    fn broker_demo_rawlsian() {
        let (pot, a, b) = broker_demo();
        assert_eq!(enumerate_allocations(&pot).unwrap().len(), 24);
        let deal = optimal_fair_deal(&pot, &a, &b, Fairness::Rawlsian).unwrap();
        let brute = enumerate_allocations(&pot)
            .unwrap()
            .iter()
            .map(|al| deal_value(al, &a).min(deal_value(&pot.remainder(al), &b)))
            .max()
            .unwrap();
        assert_eq!(deal.score, brute);
        assert_eq!(deal.score, 6);
        assert_eq!(deal.allocation, Allocation([3, 1, 0]));
    }

    #[test]
    fn zero_values_tie_on_empty_share() {
        let deal = optimal_fair_deal(&Pot([1, 2, 1]), &ItemValues([0; 3]), &ItemValues([0; 3]), Fairness::Equality).unwrap();
        assert_eq!(deal.score, 0);
        assert_eq!(deal.allocation, Allocation([0, 0, 0]));
    }

    #[test]
    fn deal_values() {
        let v = ItemValues([4, 1, 2]);
        assert_eq!(deal_value(&Allocation([1, 1, 0]), &v), 5);
        assert_eq!(deal_value(&Allocation([0, 0, 0]), &v), 0);
        assert_eq!(deal_value(&Allocation([1, 4, 1]), &v), 10);
    }

    #[test]
    fn empty_pot_and_guard() {
        let deal = optimal_fair_deal(&Pot([0, 0, 0]), &ItemValues([1, 1, 1]), &ItemValues([1, 1, 1]), Fairness::Rawlsian).unwrap();
        assert_eq!(deal.allocation, Allocation([0, 0, 0]));
        assert!(matches!(enumerate_allocations(&Pot([200, 200, 200])), Err(OracleError::EnumerationTooLarge(_))));
    }
}
