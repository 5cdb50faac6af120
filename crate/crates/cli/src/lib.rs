//! Command-line front end for `titeica-core`.
//!
//! Exit status: 0 on success, 1 when a verification fails or a verdict is
//! withheld, 2 for usage, config and IO errors.

pub mod commands;
pub mod config;
pub mod error;
pub mod report;

use std::ffi::OsString;
use std::io::Write;

use clap::error::ErrorKind;
use clap::Parser;

pub use commands::run;
pub use config::{Cli, Command, Format, RunConfig};
pub use error::CliError;
pub use report::{Cell, Report};

/// Parse `args`, run, and emit the report; returns the process exit code.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let help = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let text = e.render().to_string();
            let _ = if help { write!(out, "{text}") } else { write!(err, "{text}") };
            return if help { 0 } else { 2 };
        }
    };
    match execute(cli, out) {
        Ok(true) => 0,
        Ok(false) => {
            let _ = writeln!(err, "verification failed");
            1
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<bool, CliError> {
    let cfg = config::resolve(cli)?;
    let report = run(&cfg)?;
    let text = report.render(cfg.format)?;
    match &cfg.output {
        Some(path) => report::write_atomic(path, &text)?,
        None => out.write_all(text.as_bytes()).map_err(|e| CliError::Emit(e.to_string()))?,
    }
    Ok(report.pass)
}
