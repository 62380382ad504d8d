use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

pub trait TokenEstimator: Send + Sync {
    fn estimate(&self, text: &str) -> usize;
}

/// About four bytes per token for English prose and code.
#[derive(Debug, Clone, Copy, Default)]
pub struct ByteQuarterEstimator;

impl TokenEstimator for ByteQuarterEstimator {
    fn estimate(&self, text: &str) -> usize {
        text.len().div_ceil(4)
    }
}

pub fn estimate_tokens(text: &str) -> usize {
    ByteQuarterEstimator.estimate(text)
}

/// Exact counts under the `p50k_base` encoding used by the Codex-era completion models.
#[derive(Debug, Clone, Copy, Default)]
pub struct P50kEstimator;

impl TokenEstimator for P50kEstimator {
    fn estimate(&self, text: &str) -> usize {
        static BPE: OnceLock<tiktoken_rs::CoreBPE> = OnceLock::new();
        BPE.get_or_init(|| tiktoken_rs::p50k_base().expect("bundled p50k_base ranks")).encode_with_special_tokens(text).len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BudgetCheck {
    pub tokens: usize,
    pub budget: usize,
    pub exceeded: bool,
}

impl BudgetCheck {
    pub fn new(text: &str, budget: usize) -> Self {
        let tokens = estimate_tokens(text);
        if tokens > budget {
            tracing::warn!(tokens, budget, "prompt exceeds token budget");
        }
        Self { tokens, budget, exceeded: tokens > budget }
    }
}
