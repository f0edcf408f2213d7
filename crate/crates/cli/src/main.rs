//! `pwaffine` command-line front end.
//!
//! Exit codes: 0 on success, 2 on invalid input, 3 when a computation fails.

mod args;
mod commands;
mod error;
mod output;

use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

use args::{Cli, Command};
use error::CliError;
use output::{emit, Report};

fn run(command: &Command) -> Result<Report, CliError> {
    match command {
        Command::Rho(a) => commands::rho(a),
        Command::Delta(a) => commands::delta(a),
        Command::Phi(a) => commands::phi(a),
        Command::Orbit(a) => commands::orbit(a),
        Command::Gaps(a) => commands::gaps(a),
        Command::Cycle(a) => commands::cycle(a),
        Command::Images(a) => commands::images(a),
        Command::PlotDelta(a) => commands::plot_delta(a),
        Command::PlotPhi(a) => commands::plot_phi(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let outcome = run(&cli.command).and_then(|mut report| {
        if cli.timing {
            report.envelope.diagnostics.elapsed_ms = Some(start.elapsed().as_secs_f64() * 1e3);
        }
        emit(&report, cli.format)
    });
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
