//! Experiment driver for `levy-core`: a rayon harness whose results do not
//! depend on the thread count, CSV / NDJSON writers, and the `levy`
//! command-line interface.

pub mod args;
pub mod commands;
pub mod harness;
pub mod output;

use std::ffi::OsString;

use clap::Parser;

use args::Cli;

/// Exit status for a malformed command line.
pub const EXIT_USAGE: i32 = 2;
/// Exit status for a well-formed request the numerics refuse.
pub const EXIT_RUNTIME: i32 = 3;

/// Why a command did not produce output.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Runtime(anyhow::Error),
}

impl From<levy_core::Error> for Failure {
    fn from(e: levy_core::Error) -> Self {
        Failure::Runtime(e.into())
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Runtime(e)
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match commands::execute(&cli) {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            EXIT_RUNTIME
        }
    }
}
