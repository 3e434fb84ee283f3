//! Command-line front end for `nabla-fc-core`.
//!
//! Exit codes: 0 success, 1 inequality violation, 2 usage, 3 data, 4 solver.

pub mod args;
pub mod commands;
pub mod csvio;
pub mod error;
pub mod format;
pub mod manifest;
pub mod plot;

use std::ffi::OsString;
use std::process::ExitCode;

use clap::Parser;

pub use error::{CliError, CliResult};

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match args::Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match commands::dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("nabla-fc: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
