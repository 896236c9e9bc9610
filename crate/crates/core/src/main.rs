use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use metrica::cli::{dispatch, Cli};

fn main() -> ExitCode {
    let outcome = dispatch(Cli::parse());
    let _ = std::io::stdout().write_all(outcome.stdout.as_bytes());
    let _ = std::io::stderr().write_all(outcome.stderr.as_bytes());
    ExitCode::from(outcome.exit_code as u8)
}
