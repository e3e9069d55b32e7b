//! One module per subcommand. Each returns the command-specific result
//! section, its CSV projection and whether every audit passed.

mod backward;
mod counterexample;
mod laplacian;
mod radius;
mod solve;
mod verify;

use heat_series_core::scalar::Scalar;
use heat_series_core::ArithmeticMode;
use rayon::prelude::*;
use serde::Serialize;

use crate::args::{Command, Options};
use crate::config::RunConfig;
use crate::error::CliError;
use crate::report::Table;

pub struct CommandOutput {
    pub result: serde_json::Value,
    pub table: Table,
    pub pass: bool,
    pub mode: ArithmeticMode,
}

pub fn dispatch(command: Command, opts: &Options, config: &mut RunConfig) -> Result<CommandOutput, CliError> {
    match command {
        Command::Laplacian => laplacian::run(opts, config),
        Command::Solve => solve::run(opts, config),
        Command::Backward => backward::run(opts, config),
        Command::Radius => radius::run(opts, config),
        Command::Counterexample => counterexample::run(opts, config),
        Command::Verify => verify::run(opts, config),
    }
}

pub(crate) fn to_value<T: Serialize>(v: &T) -> Result<serde_json::Value, CliError> {
    serde_json::to_value(v).map_err(|e| CliError::Output(e.to_string()))
}

/// Times from `--t`, or the defaults; returned as text and parsed values.
pub(crate) fn times<S: Scalar>(opts: &Options, default: &[&str]) -> Result<Vec<(String, S)>, CliError> {
    let raw: Vec<String> = if opts.times.is_empty() {
        default.iter().map(|s| s.to_string()).collect()
    } else {
        opts.times.iter().map(|s| s.trim().to_string()).collect()
    };
    raw.into_iter()
        .map(|text| S::parse(&text).map(|v| (text, v)).map_err(CliError::from))
        .collect()
}

pub(crate) fn positive_tol(tol: f64) -> Result<f64, CliError> {
    if tol > 0.0 && tol.is_finite() {
        Ok(tol)
    } else {
        Err(CliError::usage(format!("--tol must be positive, got {tol}")))
    }
}

/// Evaluates `f` on every item in parallel, keeping input order and
/// returning the first error in that order.
pub(crate) fn ordered_map<I, T, F>(items: &[I], f: F) -> Result<Vec<T>, CliError>
where
    I: Sync,
    T: Send,
    F: Fn(&I) -> Result<T, CliError> + Sync + Send,
{
    items.par_iter().map(f).collect::<Vec<_>>().into_iter().collect()
}

/// One evaluated point with its exact value when available.
#[derive(Debug, Clone, Serialize)]
pub(crate) struct PointRecord<V> {
    pub vertex: V,
    pub t: f64,
    pub value: f64,
    pub tail_bound: f64,
    #[serde(rename = "K_used")]
    pub k_used: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
}

impl<V: Serialize> PointRecord<V> {
    pub fn new<S: Scalar>(vertex: V, t: f64, e: &heat_series_core::SeriesEvaluation<S>) -> Self {
        Self { vertex, t, value: e.value.to_f64(), tail_bound: e.tail_bound, k_used: e.k_used, exact: e.value.exact_text() }
    }
}

pub(crate) fn point_table<V: Serialize>(records: &[PointRecord<V>]) -> Table {
    use crate::report::{fmt_f64, fmt_vertex};
    let mut table = Table::new(vec!["vertex", "t", "value", "tail_bound", "K_used"]);
    for r in records {
        table.push(vec![fmt_vertex(&r.vertex), fmt_f64(r.t), fmt_f64(r.value), fmt_f64(r.tail_bound), r.k_used.to_string()]);
    }
    table
}

/// The graph named by `--graph` or `--family`, if any.
pub(crate) fn graph_source(opts: &Options) -> Result<Option<crate::source::GraphSource>, CliError> {
    use crate::source::GraphSource;
    match (&opts.graph, &opts.family) {
        (Some(path), _) => GraphSource::from_file(path).map(Some),
        (None, Some(family)) => GraphSource::from_family(family).map(Some),
        (None, None) => Ok(None),
    }
}

pub(crate) fn require_graph(opts: &Options, config: &mut RunConfig) -> Result<crate::source::GraphSource, CliError> {
    let source = graph_source(opts)?.ok_or_else(|| CliError::usage("this command needs --graph FILE or --family"))?;
    config.graph = Some(source.describe());
    Ok(source)
}

pub(crate) fn mode(exact: bool) -> ArithmeticMode {
    if exact {
        ArithmeticMode::Exact
    } else {
        ArithmeticMode::Floating
    }
}

/// Growth profiles given on the command line. `--a1` defaults to 1 once
/// `--a2` is present and `--a3` to 0 once `--c` is present.
pub(crate) fn given_profiles(
    opts: &Options,
) -> Result<(Option<heat_series_core::bounds::GrowthProfile>, Option<heat_series_core::bounds::DegreeGrowth>), CliError> {
    use heat_series_core::bounds::{DegreeGrowth, GrowthProfile};
    let gp = match (&opts.a2, opts.a1) {
        (Some(a2), a1) => Some(GrowthProfile::parse(a1.unwrap_or(1.0), a2)?),
        (None, Some(_)) => return Err(CliError::usage("--a1 needs --a2")),
        (None, None) => None,
    };
    let dg = match (opts.c, &opts.a3) {
        (Some(c), a3) => Some(DegreeGrowth::parse(c, a3.as_deref().unwrap_or("0"))?),
        (None, Some(_)) => return Err(CliError::usage("--a3 needs --c")),
        (None, None) => None,
    };
    Ok((gp, dg))
}
