//! `heat-series` command-line tool: loads or generates graphs, runs the
//! solvers and audits of `heat-series-core`, and writes deterministic JSON
//! (or CSV) reports.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod fixtures;
pub mod report;
pub mod source;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;
use serde::Serialize;

use crate::args::{Cli, Format};
use crate::commands::CommandOutput;
use crate::config::RunConfig;
use crate::error::CliError;
use heat_series_core::ArithmeticMode;

pub const THREADS_ENV: &str = "HEAT_SERIES_THREADS";
const TOOL: &str = "heat-series";

#[derive(Serialize)]
struct Envelope<'a> {
    tool: &'static str,
    version: &'static str,
    config: &'a RunConfig,
    arithmetic_mode: ArithmeticMode,
    pass: bool,
    result: &'a serde_json::Value,
}

#[derive(Serialize)]
struct ErrorReport<'a> {
    tool: &'static str,
    version: &'static str,
    config: &'a RunConfig,
    pass: bool,
    error: ErrorBody,
}

#[derive(Serialize)]
struct ErrorBody {
    kind: &'static str,
    message: String,
}

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code.
pub fn run_from_args<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    run(cli)
}

pub fn run(cli: Cli) -> u8 {
    let mut config = RunConfig::new(cli.command, &cli.opts);
    let outcome = thread_pool().and_then(|pool| pool.install(|| commands::dispatch(cli.command, &cli.opts, &mut config)));
    match outcome {
        Ok(out) => match emit(&cli, &config, &out) {
            Ok(()) if out.pass => 0,
            Ok(()) => 1,
            Err(e) => {
                eprintln!("{e}");
                e.exit_code()
            }
        },
        Err(e) => {
            eprintln!("heat-series: {e}");
            let code = e.exit_code();
            if code == 1 {
                let report = ErrorReport {
                    tool: TOOL,
                    version: env!("CARGO_PKG_VERSION"),
                    config: &config,
                    pass: false,
                    error: ErrorBody { kind: e.kind(), message: e.to_string() },
                };
                if let Err(w) = report::to_json(&report).map_err(|e| CliError::Output(e.to_string())).and_then(|b| write_out(&cli, &b)) {
                    eprintln!("{w}");
                }
            }
            code
        }
    }
}

fn thread_pool() -> Result<rayon::ThreadPool, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(text) = std::env::var(THREADS_ENV) {
        let n: usize = text
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| CliError::usage(format!("{THREADS_ENV} must be a positive integer, got {text:?}")))?;
        builder = builder.num_threads(n);
    }
    builder.build().map_err(|e| CliError::usage(format!("cannot start worker pool: {e}")))
}

fn emit(cli: &Cli, config: &RunConfig, out: &CommandOutput) -> Result<(), CliError> {
    let bytes = match cli.opts.format {
        Format::Json => report::to_json(&Envelope {
            tool: TOOL,
            version: env!("CARGO_PKG_VERSION"),
            config,
            arithmetic_mode: out.mode,
            pass: out.pass,
            result: &out.result,
        })
        .map_err(|e| CliError::Output(e.to_string()))?,
        Format::Csv => out.table.to_csv().map_err(|e| CliError::Output(e.to_string()))?,
    };
    write_out(cli, &bytes)
}

fn write_out(cli: &Cli, bytes: &[u8]) -> Result<(), CliError> {
    match &cli.opts.out {
        Some(path) => std::fs::write(path, bytes).map_err(|e| CliError::Output(format!("{}: {e}", path.display()))),
        None => std::io::stdout().lock().write_all(bytes).map_err(|e| CliError::Output(e.to_string())),
    }
}
