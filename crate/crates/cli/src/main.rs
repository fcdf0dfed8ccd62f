//! `loopclose`: generate instances, plan, certify and sweep budgets.
//!
//! Exit codes: 0 success, 1 usage, 2 data error, 3 enumeration guard exceeded.

mod commands;

use std::process::ExitCode;

use clap::Parser;

use commands::{Cli, CliError};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        use loopclose::Error;
        let e = match self {
            CliError::Usage(_) => return 1,
            CliError::Core(e) | CliError::InFile(_, e) => e,
        };
        match e {
            e if e.is_guard() => 3,
            Error::RegimeMismatch { .. } | Error::NonModular(_) | Error::InvalidArgument(_) | Error::InvalidBudget(_) => 1,
            _ => 2,
        }
    }
}
