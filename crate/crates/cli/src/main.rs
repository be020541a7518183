//! `biflex`: design, analyse, characterise and simulate bimodal wrists.
//!
//! stdout carries JSON only. Diagnostics, tables and log lines go to stderr.
//! Exit codes: 0 success (including infeasible designs), 1 domain error,
//! 2 I/O, parse or schema error.

mod args;
mod commands;
mod error;
mod manifest;
mod output;
mod scenario;
mod svg;

use std::process::ExitCode;

use clap::Parser;

use crate::args::{Cli, Command};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().filter_or("BIFLEX_LOG", "warn"))
        .format_timestamp(None)
        .init();

    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze(a) => commands::analyze(a),
        Command::Design(a) => commands::design(a),
        Command::Characterize(a) => commands::characterize(a),
        Command::Simulate(a) => commands::simulate(a),
        Command::Report(a) => commands::report(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
