//! Command-line surface over `strobe-core`: analysis, observable checks,
//! reconstruction and parameter scans, with versioned JSON and CSV output.

pub mod args;
pub mod commands;
pub mod error;
pub mod model;
pub mod report;

use args::{Cli, Command};
use error::CliResult;

/// Runs one invocation and returns its exit code.
pub fn run(cli: &Cli) -> CliResult<u8> {
    match &cli.command {
        Command::Analyze(a) => commands::analyze::run(a),
        Command::CheckObservable(a) => commands::check::run(a),
        Command::Reconstruct(a) => commands::reconstruct::run(a),
        Command::Scan(a) => commands::scan::run(a),
    }
}
