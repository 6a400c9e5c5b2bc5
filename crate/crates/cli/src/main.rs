use std::io;
use std::process::ExitCode;

use clap::Parser;
use xorgame::classify::ClassifyError;
use xorgame::experiments::ExperimentError;
use xorgame::game::{GameError, ParseError};
use xorgame::strategy::StrategyError;

mod args;
mod commands;

use args::{Cli, Command};

/// Bad input that is not a game file error.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

const EXIT_USAGE: u8 = 64;
const EXIT_LENGTH: u8 = 65;
const EXIT_SOFTWARE: u8 = 70;
const EXIT_IO: u8 = 74;
const EXIT_DISAGREE: u8 = 10;

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.is::<ParseError>() || cause.is::<UsageError>() || cause.is::<GameError>() {
            return EXIT_USAGE;
        }
        if let Some(e) = cause.downcast_ref::<StrategyError>() {
            return match e {
                StrategyError::DimensionMismatch { .. } => EXIT_LENGTH,
                _ => EXIT_USAGE,
            };
        }
        if let Some(e) = cause.downcast_ref::<ClassifyError>() {
            return match e {
                ClassifyError::Disagreement { .. } => EXIT_DISAGREE,
                _ => EXIT_SOFTWARE,
            };
        }
        if let Some(e) = cause.downcast_ref::<ExperimentError>() {
            return match e {
                ExperimentError::Pool(_) => EXIT_SOFTWARE,
                _ => EXIT_USAGE,
            };
        }
        if cause.is::<io::Error>() {
            return EXIT_IO;
        }
    }
    EXIT_SOFTWARE
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    match cli.command {
        Command::Classify { game } => commands::classify(&game),
        Command::Verify { game, strategy } => commands::verify(&game, &strategy),
        Command::Sample {
            n,
            m,
            count,
            seed,
            dedup,
            out,
        } => commands::sample(n, m, count, seed, dedup, &out),
        Command::Sweep { n, ratio, run } => commands::sweep(&n, ratio, &run),
        Command::Crosssection { n, m, run } => commands::crosssection(n, m, &run),
        Command::Maxpseudo {
            n,
            m,
            ratio,
            rows,
            run,
        } => commands::maxpseudo(&n, m, ratio, rows.as_ref(), &run),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
