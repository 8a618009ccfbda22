use std::process::ExitCode;

use clap::Parser;
use sparsecut_cli::{run, write_atomic, Cli};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = err.exit_code();
            let _ = err.print();
            return ExitCode::from(code as u8);
        }
    };
    let report = match run(&cli) {
        Ok(r) => r,
        Err(err) => {
            eprintln!("error: {err}");
            return ExitCode::from(err.exit_code());
        }
    };
    let text = report.to_string();
    match &cli.out {
        Some(path) => {
            if let Err(err) = write_atomic(path, &text) {
                eprintln!("error: {err}");
                return ExitCode::from(err.exit_code());
            }
        }
        None => print!("{text}"),
    }
    let failures = report.invariant_failures();
    if failures > 0 {
        eprintln!("error: {failures} invariant check(s) failed");
        return ExitCode::from(5);
    }
    ExitCode::SUCCESS
}
