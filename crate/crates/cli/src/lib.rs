//! Scenario-driven batch runs of the `ampdamp` engines.
//!
//! A run reads one JSON scenario (see [`scenario`]), computes everything in
//! memory and then writes its output files atomically into a directory.

// `!(x >= 0.0)` style checks are used on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod report;
pub mod run;
pub mod scenario;

use std::path::Path;

pub use error::CliError;
pub use scenario::Scenario;

/// What to compute for a scenario.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Evolve,
    Oracle,
    Structure,
    Classicality,
}

/// Reads, parses and validates a scenario file.
pub fn load(path: &Path, seed: Option<u64>) -> Result<Scenario, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let mut scenario = scenario::parse(&text)?.validate()?;
    if let Some(seed) = seed {
        scenario.seed = seed;
        scenario.search.seed = seed;
    }
    Ok(scenario)
}

/// Renders the output files of `command` as `(file name, contents)` pairs.
pub fn render(command: Command, scenario: &Scenario) -> Result<Vec<(&'static str, String)>, CliError> {
    let system = &scenario.system;
    Ok(match command {
        Command::Evolve => {
            let traj = run::evolve(scenario)?;
            vec![
                ("trajectory.csv", report::trajectory_csv(&traj.samples)),
                ("summary.txt", report::evolve_summary(system, &traj)),
            ]
        }
        Command::Oracle => {
            let samples = run::oracle(scenario)?;
            vec![
                ("oracle.csv", report::oracle_csv(&samples)),
                (
                    "summary.txt",
                    report::oracle_summary(system, scenario.fock_dim, &samples),
                ),
            ]
        }
        Command::Structure => {
            let (lct, asymptotic, samples) = run::structure(scenario)?;
            vec![
                ("structure.csv", report::trajectory_csv(&samples)),
                (
                    "structure.txt",
                    report::structure_summary(system, &lct, asymptotic.as_ref()),
                ),
            ]
        }
        Command::Classicality => {
            let outcome = run::classicality(scenario)?;
            vec![
                ("restarts.csv", report::restarts_csv(&outcome)),
                (
                    "classicality.txt",
                    report::classicality_summary(system, &outcome, scenario.search.seed),
                ),
            ]
        }
    })
}

/// Loads `config`, runs `command` and writes the results into `output`.
pub fn run(command: Command, config: &Path, output: &Path, seed: Option<u64>) -> Result<(), CliError> {
    let scenario = load(config, seed)?;
    let files = render(command, &scenario)?;
    report::write_all(output, &files)
}
