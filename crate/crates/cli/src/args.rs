use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "heat-series", version, about = "Time-analytic heat flow on weighted graphs: series solves, radius estimates and audits")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub opts: Options,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Apply and iterate the Laplacian on the initial data.
    Laplacian,
    /// Evaluate the series solution on vertices x times.
    Solve,
    /// Solve the backward heat equation and audit its solvability condition.
    Backward,
    /// Fit or take growth profiles and report the analytic radius and remainder bounds.
    Radius,
    /// Audit the flat-bump solution on Z that is not time-analytic.
    Counterexample,
    /// Cross-check the series solver against dense references.
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, clap::Args)]
pub struct Options {
    /// Graph document (JSON with root, vertices and edges).
    #[arg(long, global = true, value_name = "FILE", conflicts_with = "family")]
    pub graph: Option<PathBuf>,

    /// Built-in family: z, lattice:D or tree:K.
    #[arg(long, global = true, value_name = "FAMILY")]
    pub family: Option<String>,

    /// Initial data: `delta` (at the root) or a JSON file of [vertex, value] pairs.
    #[arg(long, global = true, value_name = "SPEC")]
    pub init: Option<String>,

    /// Comma-separated times, parsed as decimals.
    #[arg(long = "t", global = true, value_delimiter = ',', allow_negative_numbers = true, value_name = "T")]
    pub times: Vec<String>,

    /// Series truncation tolerance.
    #[arg(long, global = true)]
    pub tol: Option<f64>,

    #[arg(long, global = true)]
    pub kmax: Option<usize>,

    #[arg(long, global = true)]
    pub rmax: Option<usize>,

    #[arg(long, global = true)]
    pub beta: Option<f64>,

    #[arg(long, global = true)]
    pub theta: Option<f64>,

    #[arg(long, global = true)]
    pub epsilon: Option<f64>,

    /// Time shift of the counterexample.
    #[arg(long = "T", global = true, value_name = "T")]
    pub t_shift: Option<f64>,

    /// Upper end of the counterexample growth window.
    #[arg(long, global = true)]
    pub xmax: Option<i64>,

    /// Growth-profile constant A1.
    #[arg(long, global = true)]
    pub a1: Option<f64>,

    /// Growth-profile exponent A2 (decimal).
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub a2: Option<String>,

    /// Degree-growth exponent A3 (decimal).
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub a3: Option<String>,

    /// Degree-growth constant C.
    #[arg(long, global = true)]
    pub c: Option<f64>,

    /// Time window for the remainder-bound table.
    #[arg(long, global = true)]
    pub delta: Option<f64>,

    /// Degree bound D for the backward solvability audit.
    #[arg(long, global = true)]
    pub degree_bound: Option<f64>,

    /// Seed for randomly generated data in `verify`.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Exact rational arithmetic.
    #[arg(long, global = true)]
    pub exact: bool,
}
