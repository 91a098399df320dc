//! `hybridfrac`: solve fractional ODE systems with hybrid functions from the command line.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod args;
mod commands;
mod config;
mod csv;
mod error;
mod tables;

use std::process::ExitCode;

use clap::Parser;

use crate::args::{Cli, Command};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Solve(a) => commands::solve(&a),
        Command::Integrate(a) => commands::integrate(&a),
        Command::Compare(a) => commands::compare(&a),
        Command::Tables(a) => tables::run(&a),
        Command::Models => commands::models(),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
