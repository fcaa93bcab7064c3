//! `outprob` command-line tool.

mod args;
mod run;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use run::Failure;

const THREADS_VAR: &str = "OUTPROB_THREADS";

fn configure_threads() -> Result<(), Failure> {
    let Ok(value) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| {
            Failure::Usage(format!(
                "{THREADS_VAR} must be a positive integer, got '{value}'"
            ))
        })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::Usage(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| match &cli.command {
        Command::Score(a) => run::score(a),
        Command::Normalize(a) => run::normalize(a),
        Command::Evaluate(a) => run::evaluate(a),
        Command::ContrastScan(a) => run::contrast_scan(a),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
