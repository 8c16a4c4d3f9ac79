//! The `mvss` command line: builtin examples, JSON inputs, SNF, excision and
//! simplex checks, with table or JSON output.
//!
//! Exit codes: 0 on success, 2 when a run computed but left an extension
//! ambiguous, 1 on any error.

pub mod args;
mod commands;
mod render;
pub mod report;

use clap::Parser;

pub use args::Cli;
pub use commands::{
    excision_summary, execute, run_report, CliError, Outcome, EXIT_AMBIGUOUS, EXIT_ERROR, EXIT_OK,
};

/// Parses `argv` (program name first) and runs it without touching the process streams.
pub fn run_args<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(argv) {
        Ok(cli) => execute(&cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            }
        }
    }
}
