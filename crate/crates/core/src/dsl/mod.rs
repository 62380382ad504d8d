//! A small tool-call language for factored reasoning: `search`, `compare`
//! and `mean` calls written inline in model output and evaluated by an
//! interceptor that splices results back into the text.
//!
//! ```text
//! call  := name "(" [arg ("," arg)*] ")"
//! arg   := ident | number | list | pair | tagged
//! list  := "[" [arg ("," arg)*] "]"
//! pair  := ident "=" number
//! tagged:= ident list
//! ```

mod ast;
mod cascade;
mod eval;
mod intercept;
mod parser;

use thiserror::Error;

use crate::compiler::CompileError;
use crate::gateway::GatewayError;

pub use ast::{ident, Arg, Call, Value};
pub use cascade::{run_cascade, CascadeConfig, CascadeOutcome, CascadeStage, LevelBackend, MAX_CASCADE_LEVELS};
pub use eval::{eval_call, EvalContext, SearchBackend};
pub use intercept::{intercept_loop, InterceptConfig, InterceptRun, ToolResult};
pub use parser::{parse_call, parse_call_prefix, ParseError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DslError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("unknown tool {0:?}")]
    UnknownTool(String),
    #[error("{tool} takes {expected} arguments, got {got}")]
    ArityMismatch { tool: String, expected: &'static str, got: usize },
    #[error("bad argument: {0}")]
    BadArgument(String),
    #[error("{0} over an empty list")]
    EmptyList(String),
    #[error("sub-context answer is not a number: {0:?}")]
    DivergentBackend(String),
    #[error("more than {0} sub-contexts opened")]
    DepthExceeded(usize),
    #[error("more than {0} tool calls in one trace")]
    MaxToolCalls(usize),
    #[error("generation exceeded {0} tokens")]
    BudgetExhausted(usize),
    #[error("cascade of {got} levels exceeds the limit of {max}")]
    TooManyLevels { got: usize, max: usize },
    #[error(transparent)]
    Gateway(#[from] GatewayError),
    #[error(transparent)]
    Compile(#[from] CompileError),
}

impl From<crate::oracle::OracleError> for DslError {
    fn from(e: crate::oracle::OracleError) -> Self {
        DslError::Compile(e.into())
    }
}
