mod args;
mod commands;
mod report;

use std::process::ExitCode;

use clap::Parser;
use serde_json::{json, Value};
use tamecut::fourier::FourierError;
use tamecut::groups::GroupError;
use tamecut::opnorm::OpnormError;
use tamecut::tamecuts::CutError;

use args::{Cli, Format};
use report::Rendered;

#[derive(Debug)]
pub enum CliError {
    /// Exit 2.
    Usage(String),
    /// Exit 3; the report carries `partial`.
    Resource { message: String, partial: Value },
    /// Exit 1.
    Failure(String),
}

impl From<GroupError> for CliError {
    fn from(e: GroupError) -> Self {
        match e {
            GroupError::BudgetExceeded { radius_reached, .. } => {
                CliError::Resource { message: e.to_string(), partial: json!({ "radius_reached": radius_reached }) }
            }
            GroupError::InvalidSpec(_) | GroupError::UnknownSymbol(_) => CliError::Usage(e.to_string()),
            _ => CliError::Failure(e.to_string()),
        }
    }
}

impl From<FourierError> for CliError {
    fn from(e: FourierError) -> Self {
        match &e {
            FourierError::InvalidInput(_) => CliError::Usage(e.to_string()),
            FourierError::Resource { best, .. } => {
                CliError::Resource { message: e.to_string(), partial: json!({ "best": best }) }
            }
        }
    }
}

impl From<OpnormError> for CliError {
    fn from(e: OpnormError) -> Self {
        match e {
            OpnormError::Group(g) => g.into(),
            OpnormError::InvalidInput(m) => CliError::Usage(m),
        }
    }
}

impl From<CutError> for CliError {
    fn from(e: CutError) -> Self {
        match e {
            CutError::Group(g) => g.into(),
            CutError::Fourier(f) => f.into(),
            CutError::Opnorm(o) => o.into(),
            CutError::InvalidInput(m) => CliError::Usage(m),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut config = commands::Config::new();
    let outcome = commands::run(&cli, &mut config);
    let (status, error, result, rows, code) = match outcome {
        Ok((result, rows)) => ("ok", None, result, rows, 0),
        Err(CliError::Usage(m)) => {
            eprintln!("error: {m}");
            return ExitCode::from(2);
        }
        Err(CliError::Failure(m)) => {
            eprintln!("error: {m}");
            return ExitCode::from(1);
        }
        Err(CliError::Resource { message, partial }) => {
            eprintln!("resource limit: {message}");
            ("resource_exhausted", Some(message), partial, Vec::new(), 3)
        }
    };
    let rendered = Rendered {
        command: cli.command.name(),
        status,
        error: error.as_deref(),
        seed: cli.common.seed,
        config: &config,
        result: &result,
        rows: &rows,
    };
    let text = match cli.common.format {
        Format::Json => rendered.json(),
        Format::Csv => match rendered.csv() {
            Ok(s) => s,
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
        },
    };
    let written = match &cli.common.out {
        Some(path) => std::fs::write(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    };
    if let Err(e) = written {
        eprintln!("error: cannot write report: {e}");
        return ExitCode::from(1);
    }
    ExitCode::from(code)
}
