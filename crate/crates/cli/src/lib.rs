//! Command-line front end for `qtomo`.
//!
//! `qtomo <exact|sample|sweep|reconstruct|bloch> [options]` prints a JSON or
//! CSV report. Exit codes: 0 success, 2 validation error, 3 I/O error.

pub mod commands;
pub mod config;
pub mod error;
pub mod report;

use std::fs;
use std::io::{self, Write};

pub use config::{Cli, Command, Format, RunConfig};
pub use error::CliError;
pub use report::Report;

/// Runs a validated configuration and returns the encoded report.
pub fn render(cfg: &RunConfig) -> Result<String, CliError> {
    let report = commands::run(cfg)?;
    match cfg.format {
        Format::Json => report::to_json(&report),
        Format::Csv => report::to_csv(&report),
    }
}

/// Renders and writes to `--out` or stdout.
pub fn execute(cfg: &RunConfig) -> Result<(), CliError> {
    let body = render(cfg)?;
    match &cfg.out {
        Some(path) => fs::write(path, body)?,
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(body.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(())
}
