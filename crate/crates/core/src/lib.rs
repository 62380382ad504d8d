//! Strategic reasoning for language-model agents.

pub mod compiler;
pub mod dsl;
pub mod game;
pub mod gateway;
pub mod harness;
pub mod negotiation;
pub mod oracle;
pub mod service;
