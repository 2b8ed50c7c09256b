//! `edgetri`: phase diagrams, exact mean-field tables, small-graph
//! enumeration, Glauber sampling and verification suites for the
//! edge-triangle model.
//!
//! Exit status: 0 on success, 1 when a hard verification fails, 2 on usage,
//! configuration or regime errors.

// Negated float comparisons are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod args;
mod cmd;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

/// How a successful run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    VerificationFailed,
}

fn run(cli: Cli) -> anyhow::Result<Outcome> {
    match cli.command {
        Command::Phase(a) => cmd::phase::run(a),
        Command::Meanfield(a) => cmd::meanfield::run(a),
        Command::Enumerate(a) => cmd::enumerate::run(a),
        Command::Sample(a) => cmd::sample::run(a),
        Command::Verify(a) => cmd::verify::run(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::VerificationFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
