//! Command-line workbench over `symsq-core`: each subcommand runs a battery
//! of checks and emits a JSON report.

pub mod args;
mod battery;
mod commands;
pub mod descriptor;
pub mod report;

use std::fmt;
use std::time::Instant;

use symsq_core::FieldParams;

use crate::args::{Cli, Command};
use crate::descriptor::Descriptor;
use crate::report::{Report, RunConfig};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

pub fn run(cli: &Cli) -> Result<Report, CliError> {
    let a = &cli.config;
    let field = FieldParams::new(a.p, a.precision).map_err(|e| CliError::Usage(e.to_string()))?;
    if a.tol.is_nan() || a.tol <= 0.0 || a.cluster_tol.is_nan() || a.cluster_tol <= 0.0 {
        return Err(CliError::Usage("tolerances must be positive".into()));
    }
    let descriptor = match &a.input {
        Some(path) if cli.command == Command::Suite => {
            return Err(CliError::Usage(format!("suite takes no descriptor (got {})", path.display())))
        }
        Some(path) => Descriptor::load(path)?,
        None => Descriptor::default(),
    };
    let config = RunConfig {
        p: a.p,
        precision: a.precision,
        tol: a.tol,
        cluster_tol: a.cluster_tol,
        seed: a.seed,
        samples: a.samples,
    };
    let ctx = commands::Ctx { field, config: config.clone() };
    let mut report = Report::new(cli.command.name(), config);
    let start = Instant::now();
    commands::run(cli.command, &ctx, &descriptor, &mut report)?;
    if a.timing {
        report.elapsed_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    report.finish();
    Ok(report)
}
