//! IO companion to `mbqc-core`: command dispatch, JSON/text reports, the
//! pattern file format, transcript export, and the self-test suite.

pub mod cli;
pub mod exec;
pub mod formats;
pub mod report;
pub mod selftest;

use anyhow::Result;

/// Run a parsed command; `Ok(true)` means every asserted expectation held.
pub fn run(command: cli::Cli) -> Result<bool> {
    match command.command {
        cli::Command::Gadget(args) => cli::cmd_gadget(args),
        cli::Command::Grover(args) => cli::cmd_grover(args),
        cli::Command::Ubqc(args) => cli::cmd_ubqc(args),
        cli::Command::Selftest(args) => selftest::cmd_selftest(args),
    }
}
