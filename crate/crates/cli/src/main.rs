use std::process::ExitCode;

use clap::Parser;
use symsq_cli::args::Cli;
use symsq_cli::{run, CliError};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(2);
        }
    };
    let text = report.to_json();
    match &cli.config.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text + "\n") {
                eprintln!("{}", CliError::Io(format!("cannot write {}: {e}", path.display())));
                return ExitCode::from(2);
            }
        }
        None => println!("{text}"),
    }
    if report.has_failures() {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}
