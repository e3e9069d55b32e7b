use heat_series_core::laplacian::key_estimate_bound;
use heat_series_core::scalar::Scalar;
use heat_series_core::{BigRational, Graph, IteratedLaplacianTable};
use serde::Serialize;

use super::{mode, ordered_map, require_graph, to_value, CommandOutput};
use crate::args::Options;
use crate::config::RunConfig;
use crate::error::CliError;
use crate::report::{fmt_f64, fmt_vertex, Table};
use crate::source::{grid_vertices, initial_data, GraphTask};

/// Relative slack for the key estimate in floating mode.
const FLOAT_SLACK: f64 = 1e-12;

#[derive(Serialize)]
struct ValueRecord<V> {
    k: usize,
    vertex: V,
    value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    exact: Option<String>,
}

#[derive(Serialize)]
struct KeyViolation<V> {
    k: usize,
    vertex: V,
    value: f64,
    bound: f64,
}

#[derive(Serialize)]
struct LaplacianResult<V> {
    kmax: usize,
    vertices: usize,
    values: Vec<ValueRecord<V>>,
    key_estimate_checks: usize,
    key_estimate_violations: Vec<KeyViolation<V>>,
}

struct Task<'a> {
    opts: &'a Options,
    kmax: usize,
    rmax: usize,
}

impl GraphTask for Task<'_> {
    type Output = CommandOutput;

    fn run<G: Graph>(self, g: &G, _finite: bool) -> Result<CommandOutput, CliError> {
        if self.opts.exact {
            self.run_in::<G, BigRational>(g)
        } else {
            self.run_in::<G, f64>(g)
        }
    }
}

impl Task<'_> {
    fn run_in<G: Graph, S: Scalar>(self, g: &G) -> Result<CommandOutput, CliError> {
        let init = self.opts.init.as_deref().unwrap_or("delta");
        let a = initial_data::<G, S>(g, init)?;
        let table = IteratedLaplacianTable::new(g, a);
        table.ensure(self.kmax)?;
        let grid = grid_vertices(g, self.rmax)?;
        let mut values = Vec::new();
        let mut violations = Vec::new();
        let mut checks = 0;
        for k in 0..=self.kmax {
            let f = table.entry(k)?;
            for x in &grid {
                let v = f.get(x);
                values.push(ValueRecord { k, vertex: x.clone(), value: v.to_f64(), exact: v.exact_text() });
            }
            if k == self.kmax {
                break;
            }
            let next = table.entry(k + 1)?;
            let found = ordered_map(&grid, |x| {
                let bound = key_estimate_bound(g, &f, x)?;
                let lhs = next.get(x).abs();
                let ok = match S::MODE {
                    heat_series_core::ArithmeticMode::Exact => lhs <= bound,
                    heat_series_core::ArithmeticMode::Floating => {
                        lhs.to_f64() <= bound.to_f64() * (1.0 + FLOAT_SLACK)
                    }
                };
                Ok((!ok).then(|| KeyViolation { k, vertex: x.clone(), value: lhs.to_f64(), bound: bound.to_f64() }))
            })?;
            checks += grid.len();
            violations.extend(found.into_iter().flatten());
        }
        let mut csv = Table::new(vec!["k", "vertex", "value"]);
        for r in &values {
            csv.push(vec![r.k.to_string(), fmt_vertex(&r.vertex), fmt_f64(r.value)]);
        }
        let pass = violations.is_empty();
        let result = LaplacianResult {
            kmax: self.kmax,
            vertices: grid.len(),
            values,
            key_estimate_checks: checks,
            key_estimate_violations: violations,
        };
        Ok(CommandOutput { result: to_value(&result)?, table: csv, pass, mode: mode(self.opts.exact) })
    }
}

pub fn run(opts: &Options, config: &mut RunConfig) -> Result<CommandOutput, CliError> {
    let source = require_graph(opts, config)?;
    let kmax = opts.kmax.unwrap_or(1);
    let rmax = opts.rmax.unwrap_or(3);
    config.kmax = Some(kmax);
    config.rmax = Some(rmax);
    config.init = Some(opts.init.clone().unwrap_or_else(|| "delta".into()));
    source.dispatch(Task { opts, kmax, rmax })
}
