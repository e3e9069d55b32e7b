use heat_series_core::bounds::radius_estimate;
use heat_series_core::scalar::Scalar;
use heat_series_core::{BigRational, Graph, RadiusCertificate, SeriesSolution};
use serde::Serialize;

use super::{given_profiles, mode, ordered_map, point_table, positive_tol, require_graph, times, to_value, CommandOutput, PointRecord};
use crate::args::Options;
use crate::config::RunConfig;
use crate::error::CliError;
use crate::source::{grid_vertices, initial_data, GraphTask};

pub(crate) const DEFAULT_TIMES: [&str; 3] = ["-0.1", "-0.05", "-0.01"];
pub(crate) const DEFAULT_TOL: f64 = 1e-11;

#[derive(Serialize)]
struct SolveResult<V> {
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate: Option<RadiusCertificate>,
    max_tail_bound: f64,
    points: Vec<PointRecord<V>>,
}

struct Task<'a> {
    opts: &'a Options,
    tol: f64,
    rmax: usize,
    certificate: Option<RadiusCertificate>,
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
        let mut solution = SeriesSolution::new(g, a, self.tol)?;
        if let Some(cert) = self.certificate.clone() {
            solution = solution.with_certificate(cert);
        }
        let ts = times::<S>(self.opts, &DEFAULT_TIMES)?;
        let grid = grid_vertices(g, self.rmax)?;
        let points: Vec<(G::Vertex, S)> =
            grid.iter().flat_map(|x| ts.iter().map(move |(_, t)| (x.clone(), t.clone()))).collect();
        let records = ordered_map(&points, |(x, t)| {
            let e = solution.eval(x, t)?;
            Ok(PointRecord::new(x.clone(), t.to_f64(), &e))
        })?;
        let max_tail_bound = records.iter().map(|r| r.tail_bound).fold(0.0, f64::max);
        let table = point_table(&records);
        let result = SolveResult { certificate: self.certificate, max_tail_bound, points: records };
        Ok(CommandOutput { result: to_value(&result)?, table, pass: true, mode: mode(self.opts.exact) })
    }
}

pub fn run(opts: &Options, config: &mut RunConfig) -> Result<CommandOutput, CliError> {
    let source = require_graph(opts, config)?;
    let tol = positive_tol(opts.tol.unwrap_or(DEFAULT_TOL))?;
    let rmax = opts.rmax.unwrap_or(3);
    let certificate = match given_profiles(opts)? {
        (Some(gp), Some(dg)) => Some(radius_estimate(&gp, &dg)),
        (None, None) => None,
        _ => return Err(CliError::usage("a radius certificate needs both --a2 and --c")),
    };
    config.tol = Some(tol);
    config.rmax = Some(rmax);
    config.init = Some(opts.init.clone().unwrap_or_else(|| "delta".into()));
    if config.t.is_empty() {
        config.t = DEFAULT_TIMES.iter().map(|s| s.to_string()).collect();
    }
    source.dispatch(Task { opts, tol, rmax, certificate })
}
