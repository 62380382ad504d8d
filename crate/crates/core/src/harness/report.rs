use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{HarnessError, Method};

/// One (game, method) trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialResult {
    pub game_id: String,
    pub class: String,
    pub method: Method,
    /// `None` when the trial failed before an action was chosen.
    pub chosen: Option<String>,
    pub oracle_best: Vec<String>,
    /// Membership of `chosen` in `oracle_best`.
    pub correct: bool,
    pub error: Option<String>,
    pub prompt_tokens: usize,
    /// The generated answer, with any tool results spliced in.
    pub trace: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodSummary {
    pub method: Method,
    pub correct: usize,
    pub total: usize,
    pub failed: usize,
    pub accuracy: f64,
    /// `"0.86 (30/35)"`
    pub display: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub suite: String,
    pub seed: u64,
    pub backend: String,
    pub methods: Vec<MethodSummary>,
    /// Sorted by game id, then method.
    pub trials: Vec<TrialResult>,
}

pub fn format_accuracy(correct: usize, total: usize) -> String {
    let p = if total == 0 { 0.0 } else { correct as f64 / total as f64 };
    format!("{p:.2} ({correct}/{total})")
}

impl ExperimentReport {
    /// Sorts the trials and derives every summary from them.
    pub fn from_trials(suite: &str, seed: u64, backend: &str, mut trials: Vec<TrialResult>) -> Self {
        trials.sort_by(|a, b| a.game_id.cmp(&b.game_id).then(a.method.cmp(&b.method)));
        let mut methods: Vec<Method> = trials.iter().map(|t| t.method).collect();
        methods.sort();
        methods.dedup();
        let methods = methods
            .into_iter()
            .map(|method| {
                let of: Vec<&TrialResult> = trials.iter().filter(|t| t.method == method).collect();
                let correct = of.iter().filter(|t| t.correct).count();
                let failed = of.iter().filter(|t| t.error.is_some()).count();
                let total = of.len();
                MethodSummary {
                    method,
                    correct,
                    total,
                    failed,
                    accuracy: correct as f64 / total as f64,
                    display: format_accuracy(correct, total),
                }
            })
            .collect();
        Self { suite: suite.to_string(), seed, backend: backend.to_string(), methods, trials }
    }

    pub fn summary(&self, method: Method) -> Option<&MethodSummary> {
        self.methods.iter().find(|m| m.method == method)
    }

    pub fn to_markdown(&self) -> String {
        let mut out = format!("## {} (seed {}, backend {})\n\n", self.suite, self.seed, self.backend);
        out.push_str("| method | accuracy | failed |\n|---|---|---|\n");
        for m in &self.methods {
            out.push_str(&format!("| {} | {} | {} |\n", m.method, m.display, m.failed));
        }
        out
    }

    /// Writes the JSON report to `path` and the Markdown table next to it.
    pub fn write(&self, path: &Path) -> Result<(), HarnessError> {
        let json = serde_json::to_string_pretty(self).map_err(|e| HarnessError::Io(e.to_string()))?;
        std::fs::write(path, json)?;
        std::fs::write(path.with_extension("md"), self.to_markdown())?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| HarnessError::Io(e.to_string()))
    }
}
