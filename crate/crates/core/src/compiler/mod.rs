//! Compiling solved games into worked reasoning traces and few-shot prompts.
//!
//! Every trace is produced from the oracle's solution, so the arithmetic and
//! the final action are correct by construction. Traces are split into
//! labeled spans (search, value, belief, proposal, conclusion) that tile the
//! text.

mod arithmetic;
mod belief;
mod broker;
mod demos;
mod factored;
mod matrix;
mod negotiation;
mod words;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::game::GameError;
use crate::oracle::OracleError;

pub use arithmetic::{check_arithmetic, ArithmeticSlip};
pub use belief::{compile_belief_trace, compile_communication_trace, render_communication_question, render_hidden_question};
pub(crate) use broker::best_try;
pub use broker::{broker_instruction, compile_proposal_trace, proposal_tries, render_deal_question, ProposalTry};
pub use demos::{
    build_demo_set, build_level_n_demo_set, canonical_demo_games, DemoFamily, DemoSet, DemoStyle, ExampleDemo, Problem,
};
pub use factored::{
    compile_factored_base, compile_factored_demos, compile_factored_recursive, factored_base_question, factored_header, factored_question, FactoredDemos,
    SearchQuery, FACTORED_TOOLS,
};
pub use matrix::{
    compile_exhaustive, compile_game, compile_level_n_trace, parse_predicted_set, render_level_n_question,
    render_question,
};
pub use negotiation::{
    compile_negotiation_turn, default_negotiation_demo, render_episode, render_episode_as, AgentMethod, AnnotatedEpisode,
    EpisodeEvent, NegotiationPrompt,
};
pub use words::{fmt_num, normalize_text};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CompileError {
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Game(#[from] GameError),
    #[error("cannot compile: {0}")]
    Unsupported(String),
    #[error("invalid episode: {0}")]
    InvalidEpisode(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpanKind {
    /// Enumerating outcomes or calling a search.
    Search,
    /// Aggregating, comparing and ranking values.
    Value,
    /// Inferring hidden information about another player.
    Belief,
    /// Drafting or evaluating a concrete offer.
    Proposal,
    /// The committed answer.
    Conclusion,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Span {
    pub kind: SpanKind,
    pub start: usize,
    pub end: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReasoningTrace {
    pub text: String,
    /// Contiguous, non-overlapping and covering `text` exactly.
    pub spans: Vec<Span>,
    pub final_action: Option<String>,
}

impl ReasoningTrace {
    pub fn span_text(&self, span: &Span) -> &str {
        &self.text[span.start..span.end]
    }

    /// Span kinds in order, with adjacent repeats merged.
    pub fn kind_sequence(&self) -> Vec<SpanKind> {
        let mut out: Vec<SpanKind> = Vec::new();
        for s in &self.spans {
            if out.last() != Some(&s.kind) {
                out.push(s.kind);
            }
        }
        out
    }

    pub fn spans_tile(&self) -> bool {
        let mut at = 0;
        for s in &self.spans {
            if s.start != at || s.end < s.start {
                return false;
            }
            at = s.end;
        }
        at == self.text.len()
    }
}

/// Line-oriented trace writer; each line belongs to one span kind.
#[derive(Debug, Default)]
pub(crate) struct TraceBuilder {
    text: String,
    spans: Vec<Span>,
}

impl TraceBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn line(&mut self, kind: SpanKind, line: impl AsRef<str>) {
        if !self.text.is_empty() {
            // The newline belongs to the span it ends.
            self.extend(self.spans.last().map(|s| s.kind).unwrap_or(kind), "\n");
        }
        self.extend(kind, line.as_ref());
    }

    fn extend(&mut self, kind: SpanKind, s: &str) {
        let start = self.text.len();
        self.text.push_str(s);
        let end = self.text.len();
        match self.spans.last_mut() {
            Some(last) if last.kind == kind => last.end = end,
            _ => self.spans.push(Span { kind, start, end }),
        }
    }

    pub fn finish(self, final_action: Option<String>) -> ReasoningTrace {
        ReasoningTrace { text: self.text, spans: self.spans, final_action }
    }
}
