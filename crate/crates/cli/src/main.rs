//! `forestcalc` command-line front end.

mod args;
mod commands;
mod render;

use std::fs;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use forestcalc::{Error, Rational};

use args::{Cli, Mode};
use render::Report;

pub enum CliError {
    /// Malformed invocation: exit code 2.
    Usage(String),
    /// Unreadable input: exit code 1.
    Io(String),
    /// Domain error from the library: exit code 1.
    Domain(Error),
    /// A verification command ran but found a mismatch: exit code 1, report still printed.
    Check(Report),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::UnknownStrategy { .. } => CliError::Usage(e.to_string()),
            other => CliError::Domain(other),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Domain(Error::Json(e))
    }
}

fn emit(cli: &Cli, report: &Report) -> Result<(), CliError> {
    let text = report.render(cli.format).map_err(CliError::Domain)?;
    match &cli.out {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(2),
            };
        }
    };
    let outcome = match cli.mode {
        Mode::Rational => commands::run::<Rational>(&cli.command),
        Mode::Float => commands::run::<f64>(&cli.command),
    };
    let result = outcome.and_then(|report| emit(&cli, &report));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Domain(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(CliError::Check(report)) => {
            let _ = emit(&cli, &report);
            ExitCode::from(1)
        }
    }
}
