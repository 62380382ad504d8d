//! Evaluation harness: seeded game suites, prompting methods, the experiment
//! runner with its reports, and fairness scoring for brokered deals.
//!
//! A trial compiles a prompt for one game and one method, completes it,
//! constrains the answer to a legal action and scores it against the oracle's
//! argmax set. With the `oracle` backend every prompt is answered by the
//! continuation the compiler would write, so any accuracy below 1.0 points at
//! a pipeline bug rather than at a model.

mod fairness;
mod methods;
mod report;
mod runner;
mod suites;

use thiserror::Error;

use crate::compiler::CompileError;
use crate::dsl::DslError;
use crate::gateway::GatewayError;
use crate::oracle::OracleError;

pub use fairness::{random_proposal_gap, score_fairness};
pub use methods::{build_baseline_prompt, BaselineKind, Method};
pub use report::{format_accuracy, ExperimentReport, MethodSummary, TrialResult};
pub use runner::{run_experiment, run_trial, ExperimentBackend, ExperimentConfig};
pub use suites::{
    classic_games, generate_suite, Family, GameClass, SuiteGame, SuiteSpec, OBJECTIVE_SETTINGS, PLAYER_NAMES, VARIANTS,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HarnessError {
    #[error("unknown suite family {0:?}")]
    UnknownFamily(String),
    #[error("{0} is scored over negotiation contexts, not generated games")]
    NotAGameSuite(String),
    #[error("unknown method {0:?}")]
    UnknownMethod(String),
    #[error("context {0} has no proposal")]
    ContextWithoutProposal(usize),
    #[error("{0}")]
    Unsupported(String),
    #[error(transparent)]
    Compile(#[from] CompileError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Gateway(#[from] GatewayError),
    #[error(transparent)]
    Dsl(#[from] DslError),
    #[error("report i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for HarnessError {
    fn from(e: std::io::Error) -> Self {
        HarnessError::Io(e.to_string())
    }
}
