use heat_series_core::scalar::Scalar;
use heat_series_core::series::{check_backward_solvability, BackwardSolvabilityReport, Verdict};
use heat_series_core::{deg, BigRational, Graph, SeriesSolution};
use serde::Serialize;

use super::{mode, ordered_map, point_table, positive_tol, require_graph, times, to_value, CommandOutput, PointRecord};
use crate::args::Options;
use crate::config::RunConfig;
use crate::error::CliError;
use crate::source::{grid_vertices, initial_data, GraphTask};

const DEFAULT_TIMES: [&str; 3] = ["0.01", "0.05", "0.1"];

#[derive(Serialize)]
struct BackwardResult<V> {
    degree_bound_source: &'static str,
    solvability: BackwardSolvabilityReport<V>,
    points: Vec<PointRecord<V>>,
}

struct Task<'a> {
    opts: &'a Options,
    tol: f64,
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
        let a = initial_data::<G, S>(g, self.opts.init.as_deref().unwrap_or("delta"))?;
        let grid = grid_vertices(g, self.rmax)?;
        let (d, source) = match (self.opts.degree_bound, g.uniform_degree()) {
            (Some(d), _) => (d, "flag"),
            (None, Some(d)) => (d, "uniform"),
            (None, None) => {
                let audited = g.ball(&g.root(), self.rmax + self.kmax)?;
                let mut d = 0.0f64;
                for x in &audited {
                    d = d.max(deg(g, x)?);
                }
                (d, "max-over-audited-region")
            }
        };
        let solvability = check_backward_solvability(g, &a, d, self.kmax, self.rmax)?;

        let ts = times::<S>(self.opts, &DEFAULT_TIMES)?;
        let solution = SeriesSolution::new(g, a, self.tol)?;
        let points: Vec<(G::Vertex, S)> =
            grid.iter().flat_map(|x| ts.iter().map(move |(_, t)| (x.clone(), t.clone()))).collect();
        let records = ordered_map(&points, |(x, t)| {
            let e = solution.backward_eval(x, t)?;
            Ok(PointRecord::new(x.clone(), t.to_f64(), &e))
        })?;
        let pass = solvability.verdict == Verdict::Certified;
        let table = point_table(&records);
        let result = BackwardResult { degree_bound_source: source, solvability, points: records };
        Ok(CommandOutput { result: to_value(&result)?, table, pass, mode: mode(self.opts.exact) })
    }
}

pub fn run(opts: &Options, config: &mut RunConfig) -> Result<CommandOutput, CliError> {
    let source = require_graph(opts, config)?;
    let tol = positive_tol(opts.tol.unwrap_or(super::solve::DEFAULT_TOL))?;
    let kmax = opts.kmax.unwrap_or(12);
    let rmax = opts.rmax.unwrap_or(3);
    config.tol = Some(tol);
    config.kmax = Some(kmax);
    config.rmax = Some(rmax);
    config.init = Some(opts.init.clone().unwrap_or_else(|| "delta".into()));
    if config.t.is_empty() {
        config.t = DEFAULT_TIMES.iter().map(|s| s.to_string()).collect();
    }
    source.dispatch(Task { opts, tol, kmax, rmax })
}
