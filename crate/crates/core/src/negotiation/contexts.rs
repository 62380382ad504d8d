//! Negotiation scenario files.
//!
//! Two formats are accepted. The line format has one player per line, six
//! integers `c1 v1 c2 v2 c3 v3` (count then value per item type), two lines
//! per scenario; blank lines and `#` comments are skipped. The JSON format is
//! an array of `{"pot": .., "values_a": .., "values_b": ..}` objects.

use std::path::Path;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::items::{ItemValues, Pot};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NegotiationContext {
    pub pot: Pot,
    pub values_a: ItemValues,
    pub values_b: ItemValues,
}

#[derive(Debug, Error)]
pub enum ContextError {
    #[error("line {line}: players disagree on item counts")]
    CountMismatch { line: usize },
    #[error("line {line}: {reason}")]
    MalformedLine { line: usize, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub fn load_contexts(path: impl AsRef<Path>) -> Result<Vec<NegotiationContext>, ContextError> {
    parse_contexts(&std::fs::read_to_string(path)?)
}

pub fn parse_contexts(text: &str) -> Result<Vec<NegotiationContext>, ContextError> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('[') || trimmed.starts_with('{') {
        return Ok(serde_json::from_str(trimmed)?);
    }
    let mut out = Vec::new();
    let mut pending: Option<(usize, [u32; 6])> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let nums: Vec<u32> = content
            .split_whitespace()
            .map(|t| t.parse::<u32>())
            .collect::<Result<_, _>>()
            .map_err(|e| ContextError::MalformedLine { line, reason: e.to_string() })?;
        let nums: [u32; 6] = nums
            .try_into()
            .map_err(|v: Vec<u32>| ContextError::MalformedLine { line, reason: format!("expected 6 integers, got {}", v.len()) })?;
        match pending.take() {
            None => pending = Some((line, nums)),
            Some((_, a)) => {
                let pot = [a[0], a[2], a[4]];
                if pot != [nums[0], nums[2], nums[4]] {
                    return Err(ContextError::CountMismatch { line });
                }
                out.push(NegotiationContext {
                    pot: Pot(pot),
                    values_a: ItemValues([a[1], a[3], a[5]]),
                    values_b: ItemValues([nums[1], nums[3], nums[5]]),
                });
            }
        }
    }
    if let Some((line, _)) = pending {
        return Err(ContextError::MalformedLine { line, reason: "scenario is missing its second player line".into() });
    }
    Ok(out)
}

/// Line-format rendering, the inverse of [`parse_contexts`].
pub fn format_contexts(contexts: &[NegotiationContext]) -> String {
    let mut s = String::new();
    for c in contexts {
        for v in [c.values_a, c.values_b] {
            s.push_str(&format!("{} {} {} {} {} {}\n", c.pot.0[0], v.0[0], c.pot.0[1], v.0[1], c.pot.0[2], v.0[2]));
        }
    }
    s
}

/// Every nonnegative value vector with `Σ count × value = total`.
pub fn value_vectors(pot: &Pot, total: u32) -> Vec<ItemValues> {
    let mut out = Vec::new();
    let c = pot.0;
    for a in 0..=total {
        for b in 0..=total {
            let used = a * c[0] + b * c[1];
            if used > total {
                break;
            }
            let rest = total - used;
            if c[2] == 0 {
                if rest == 0 {
                    out.push(ItemValues([a, b, 0]));
                }
            } else if rest.is_multiple_of(c[2]) {
                out.push(ItemValues([a, b, rest / c[2]]));
            }
        }
        if c[0] == 0 {
            break;
        }
    }
    out
}

/// Seeded scenarios in the style of the standard bargaining corpus: each item
/// type has 1 to 4 copies and 5 to 7 items in total; both players value the
/// whole pot at 10; every item type is valued by someone and at least one by both.
pub fn generate_contexts(seed: u64, n: usize) -> Vec<NegotiationContext> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let pot = Pot([rng.random_range(1..=4), rng.random_range(1..=4), rng.random_range(1..=4)]);
        if !(5..=7).contains(&pot.total()) {
            continue;
        }
        let options = value_vectors(&pot, 10);
        let (Some(a), Some(b)) = (options.choose(&mut rng), options.choose(&mut rng)) else {
            continue;
        };
        let covered = (0..3).all(|i| a.0[i] > 0 || b.0[i] > 0);
        let shared = (0..3).any(|i| a.0[i] > 0 && b.0[i] > 0);
        if covered && shared {
            out.push(NegotiationContext { pot, values_a: *a, values_b: *b });
        }
    }
    out
}
