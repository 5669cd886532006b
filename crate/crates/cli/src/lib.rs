//! `mcsa` command-line tool: analyze, diagnose, simulate and signatures.
//!
//! Exit codes: 0 success or healthy, 1 error, 2 fault found, 3 indeterminate.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod recording;
pub mod report;

use std::ffi::OsString;

use clap::Parser;

use args::{Cli, Command};
pub use error::{CliError, Result};

/// Parses `argv` and runs the command. Returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                commands::EXIT_ERROR
            } else {
                commands::EXIT_OK
            };
        }
    };
    let outcome = match &cli.command {
        Command::Analyze(a) => commands::analyze(&cli.global, a),
        Command::Diagnose(a) => commands::run_diagnose(&cli.global, a),
        Command::Simulate(a) => commands::simulate(a),
        Command::Signatures(a) => commands::signatures(a),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            commands::EXIT_ERROR
        }
    }
}
