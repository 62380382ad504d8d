//! Scoring every prompting method on the 2x2 suite with the oracle standing in
//! for the model.
//!
//! `cargo run --example evaluate_suite`

use strategos::harness::{generate_suite, run_experiment, ExperimentBackend, ExperimentConfig, Family, Method, SuiteSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let games = generate_suite(&SuiteSpec::new(Family::Simultaneous, 0))?;
    let report = run_experiment(Family::Simultaneous.name(), &games, &Method::ALL, ExperimentBackend::Oracle, &ExperimentConfig::default());
    print!("{}", report.to_markdown());
    Ok(())
}
