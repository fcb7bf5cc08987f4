//! Library side of the `hbarcon` binary: configuration, commands and reports.

pub mod args;
pub mod commands;
pub mod config;
pub mod report;

use std::io::Write;

use clap::Parser;
use thiserror::Error;

pub use commands::{run, Command, Exit, Outcome};
pub use config::{Format, GridConfig, RunConfig};
pub use report::Report;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("cannot parse {what} `{text}`: {source}")]
    Expression {
        what: String,
        text: String,
        #[source]
        source: hbarcon::Error,
    },
    #[error(transparent)]
    Engine(#[from] hbarcon::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

/// Parse `argv`, run the command, write the report; returns the exit code.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match args::Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { Exit::Failure.code() } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            Exit::Failure.code()
        }
    }
}

fn execute(cli: &args::Cli) -> Result<i32, CliError> {
    let cfg = cli.options.resolve()?;
    let outcome = run(&cli.command.to_command(), &cfg)?;
    let text = outcome.render(cfg.format);
    match &cfg.out {
        Some(path) => std::fs::write(path, text)?,
        None => match std::io::stdout().write_all(text.as_bytes()) {
            Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => {}
            other => other?,
        },
    }
    Ok(outcome.exit.code())
}
