//! `hadorders`: enumerate Hadamard orders, close them under the product
//! rules, and emit density curves and bound comparisons as CSV.
//!
//! Exit codes: 0 success, 1 usage error, 2 resource or cache error,
//! 3 verification failure.

mod args;
mod commands;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use commands::CliError;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Orders(a) => commands::orders(a),
        Command::Closure(a) => commands::closure(a),
        Command::Figure(a) => commands::figure(a),
        Command::Bounds(a) => commands::bounds(a),
        Command::Verify(a) => commands::verify(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            match &e {
                CliError::Usage(m) => eprintln!("error: {m}"),
                CliError::Resource(m) => eprintln!("error: {m}"),
                CliError::Verify(m) => eprintln!("verification failed: {m}"),
                CliError::BrokenPipe => {}
            }
            ExitCode::from(e.exit_code())
        }
    }
}
