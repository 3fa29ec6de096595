use std::io::Write;
use std::process::ExitCode;

use kcover::cli::{run_args, RunError};

fn main() -> ExitCode {
    match run_args(std::env::args_os().skip(1)) {
        Ok(summary) => {
            let mut out = std::io::stdout().lock();
            for line in summary.lines {
                // A closed pipe is not an error for a summary.
                if writeln!(out, "{line}").is_err() {
                    break;
                }
            }
            ExitCode::SUCCESS
        }
        Err(RunError::Usage(e)) => {
            let _ = e.print();
            ExitCode::from(e.exit_code() as u8)
        }
        Err(RunError::Run(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
