use std::path::PathBuf;
use std::process::ExitCode;

use ampdamp_cli::{run, Command};
use clap::{Args, Parser, Subcommand};

/// Two damped oscillators: moment trajectories, Kraus-oracle checks and
/// alternate-structure analysis.
#[derive(Parser)]
#[command(name = "ampdamp", version)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Evolve the initial state over the time grid.
    Evolve(Common),
    /// Compare the Kraus engine against the closed form and report identity residuals.
    Oracle(Common),
    /// Evaluate the scenario's linear canonical transformation.
    Structure(Common),
    /// Search for a classical-like alternate structure.
    Classicality(Common),
}

#[derive(Args)]
struct Common {
    /// Scenario file (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Directory for the output files.
    #[arg(long, default_value = ".")]
    output: PathBuf,
    /// Overrides the scenario's seed.
    #[arg(long)]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return ExitCode::from(if err.use_stderr() { 1 } else { 0 });
        }
    };
    let (command, args) = match cli.command {
        Sub::Evolve(a) => (Command::Evolve, a),
        Sub::Oracle(a) => (Command::Oracle, a),
        Sub::Structure(a) => (Command::Structure, a),
        Sub::Classicality(a) => (Command::Classicality, a),
    };
    match run(command, &args.config, &args.output, args.seed) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
