//! `mwbody` command-line tool.

mod commands;
mod config;
mod error;
mod report;

use std::process::ExitCode;

use clap::Parser;
use log::LevelFilter;
use serde_json::json;

use config::{expand_args, Cli, Format};
use error::CliError;

fn execute(cli: &Cli) -> Result<Option<String>, CliError> {
    if let Some(n) = cli.global.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Validation(format!("cannot configure {n} threads: {e}")))?;
    }
    let output = commands::run(&cli.command)?;
    let text = match cli.global.format {
        Format::Json => report::to_json(&json!({
            "tool": "mwbody",
            "version": env!("CARGO_PKG_VERSION"),
            "command": cli.command.name(),
            "config": report::to_value(cli)?,
            "result": output.result,
            "pass": output.failure.is_none(),
        })),
        Format::Csv => output.table.to_csv()?,
    };
    report::emit(&text, cli.global.out.as_deref())?;
    Ok(output.failure)
}

fn main() -> ExitCode {
    let args = match expand_args(std::env::args_os().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let level = match cli.global.verbose {
        0 => LevelFilter::Warn,
        1 => LevelFilter::Info,
        _ => LevelFilter::Debug,
    };
    env_logger::Builder::new().filter_level(level).init();

    match execute(&cli) {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(failure)) => {
            eprintln!("failed: {failure}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
