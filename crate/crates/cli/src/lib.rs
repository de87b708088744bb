//! Command-line front end: exact coefficients and invariants, spectral trace
//! runs and fits, the boundary experiment, and the verification report.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod tolerances;
pub mod verify;

pub use cli::Cli;
pub use config::RunConfig;
pub use error::{CliError, Result, EXIT_CHECK_FAILED, EXIT_CONFIG};
pub use verify::{CoefficientTable, VerifyReport};

/// Runs a parsed command line and returns the process exit status.
pub fn run(cli: Cli) -> i32 {
    match commands::dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("heatrace: {e}");
            e.exit_code()
        }
    }
}
