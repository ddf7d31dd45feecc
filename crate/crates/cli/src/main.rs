//! `orlicz`: certified evaluation, analysis and verification.
//!
//! Exit codes: 0 success (or every check Verified), 1 some check Falsified,
//! 2 some check Undetermined and none Falsified, 3 usage errors, 4 I/O.

mod analyze;
mod args;
mod config;
mod error;
mod eval;
mod output;
mod verify;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command};
use config::{Common, FileConfig, DEFAULT_DIGITS};
use error::CliError;

/// A rendered document and the exit code that goes with it.
pub struct Outcome {
    pub text: String,
    pub code: u8,
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let file = match &cli.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let file_bits = file
        .bits
        .or_else(|| file.verify.as_ref().map(|v| v.precision_bits));
    let common = Common {
        bits: cli.bits.or(file_bits).unwrap_or(orlicz_core::arith::DEFAULT_BITS),
        n_max: cli.n_max.or(file.n_max),
        format: cli.format.or(file.format),
        out: cli.out.clone().or_else(|| file.out.clone()),
        digits: cli.digits.or(file.digits).unwrap_or(DEFAULT_DIGITS),
    };
    common.validate()?;
    let bits_given = cli.bits.is_some() || file.bits.is_some();
    let outcome = match cli.command {
        Command::Eval(a) => eval::run(a, &file.eval, &common)?,
        Command::Verify(a) => verify::run(a, file.verify, &common, bits_given)?,
        Command::Analyze(a) => analyze::run(a.op, &file.analyze, &common)?,
    };
    output::emit(&outcome.text, common.out.as_deref())?;
    Ok(outcome.code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(3),
            };
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("orlicz: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
