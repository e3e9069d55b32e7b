use heat_series_core::bounds::{
    decay_threshold, fit_degree_growth, fit_growth_profile, radius_estimate, radius_estimate_bounded_degree,
    remainder_bound_ln, xlogx, DegreeGrowth, GrowthProfile,
};
use heat_series_core::scalar::ratio_to_f64;
use heat_series_core::{Graph, RadiusCertificate, RadiusKind};
use num_traits::Zero;
use serde::Serialize;

use super::{given_profiles, graph_source, to_value, CommandOutput};
use crate::args::Options;
use crate::config::RunConfig;
use crate::error::CliError;
use crate::report::{fmt_f64, Table};
use crate::source::{initial_data, GraphTask};

#[derive(Serialize)]
struct GrowthRecord {
    a1: f64,
    a2: String,
    a2_f64: f64,
    source: &'static str,
}

#[derive(Serialize)]
struct DegreeRecord {
    c: f64,
    a3: String,
    a3_f64: f64,
    source: &'static str,
}

#[derive(Serialize)]
struct RemainderRow {
    k: u64,
    ln_q: f64,
    q: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    decay_envelope: Option<f64>,
}

#[derive(Serialize)]
struct RadiusResult {
    growth_profile: GrowthRecord,
    degree_growth: DegreeRecord,
    certificate: RadiusCertificate,
    #[serde(skip_serializing_if = "Option::is_none")]
    bounded_degree: Option<RadiusCertificate>,
    delta: f64,
    #[serde(rename = "R")]
    r: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    decay_threshold: Option<f64>,
    remainder: Vec<RemainderRow>,
    note: String,
}

struct Fit<'a> {
    opts: &'a Options,
    rmax: usize,
    need_gp: bool,
    need_dg: bool,
}

impl GraphTask for Fit<'_> {
    type Output = (Option<GrowthProfile>, Option<DegreeGrowth>);

    fn run<G: Graph>(self, g: &G, _finite: bool) -> Result<Self::Output, CliError> {
        let gp = if self.need_gp {
            let a = initial_data::<G, f64>(g, self.opts.init.as_deref().unwrap_or("delta"))?;
            Some(fit_growth_profile(g, &a, self.rmax)?)
        } else {
            None
        };
        let dg = if self.need_dg { Some(fit_degree_growth(g, self.rmax)?) } else { None };
        Ok((gp, dg))
    }
}

pub fn run(opts: &Options, config: &mut RunConfig) -> Result<CommandOutput, CliError> {
    let (given_gp, given_dg) = given_profiles(opts)?;
    let rmax = opts.rmax.unwrap_or(4);
    let kmax = opts.kmax.unwrap_or(40);
    let (mut fitted_gp, mut fitted_dg) = (None, None);
    if given_gp.is_none() || given_dg.is_none() {
        let source = graph_source(opts)?
            .ok_or_else(|| CliError::usage("radius needs --a2 and --c, or a graph to fit the missing profiles on"))?;
        config.graph = Some(source.describe());
        if given_gp.is_none() {
            config.init = Some(opts.init.clone().unwrap_or_else(|| "delta".into()));
        }
        (fitted_gp, fitted_dg) =
            source.dispatch(Fit { opts, rmax, need_gp: given_gp.is_none(), need_dg: given_dg.is_none() })?;
    }
    let (gp, gp_source) = match given_gp {
        Some(gp) => (gp, "given"),
        None => (fitted_gp.expect("fitted"), "fitted"),
    };
    let (dg, dg_source) = match given_dg {
        Some(dg) => (dg, "given"),
        None => (fitted_dg.expect("fitted"), "fitted"),
    };

    let certificate = radius_estimate(&gp, &dg);
    let bounded_degree = if dg.a3.is_zero() { Some(radius_estimate_bounded_degree(&gp, dg.c)?) } else { None };
    let delta = opts.delta.unwrap_or(0.9 / (2.0 * std::f64::consts::E * dg.c));
    let r = (rmax.max(1)) as f64;
    let zeta = ratio_to_f64(&certificate.zeta);
    let threshold = if certificate.kind == RadiusKind::Infinite { Some(decay_threshold(zeta, delta, dg.c, r)?) } else { None };
    let mut remainder = Vec::new();
    if certificate.kind != RadiusKind::OutOfHypothesis {
        for k in 1..=kmax as u64 {
            let ln_q = remainder_bound_ln(k, delta, &dg, &gp, r)?;
            let decay_envelope = threshold.map(|_| gp.a1 * (-(zeta / 3.0) * xlogx(k as f64)).exp());
            remainder.push(RemainderRow { k, ln_q, q: ln_q.exp(), decay_envelope });
        }
    }
    let note = match certificate.kind {
        RadiusKind::Infinite => "A2 + A3 < 1: the solution is analytic in t on the whole time interval".to_string(),
        RadiusKind::FiniteLowerBound => format!(
            "A2 + A3 = 1: analytic radius at least 1/(2eC) = {:.16e}; the remainder bound decays for delta < r",
            certificate.radius
        ),
        RadiusKind::OutOfHypothesis => "A2 + A3 > 1: no analyticity claim; no remainder table".to_string(),
    };

    let mut table = Table::new(vec!["k", "ln_q", "q"]);
    for row in &remainder {
        table.push(vec![row.k.to_string(), fmt_f64(row.ln_q), fmt_f64(row.q)]);
    }
    config.rmax = Some(rmax);
    config.kmax = Some(kmax);
    config.delta = Some(delta);
    config.a1 = Some(gp.a1);
    config.a2 = Some(gp.a2.to_string());
    config.c = Some(dg.c);
    config.a3 = Some(dg.a3.to_string());
    let result = RadiusResult {
        growth_profile: GrowthRecord { a1: gp.a1, a2: gp.a2.to_string(), a2_f64: ratio_to_f64(&gp.a2), source: gp_source },
        degree_growth: DegreeRecord { c: dg.c, a3: dg.a3.to_string(), a3_f64: ratio_to_f64(&dg.a3), source: dg_source },
        certificate,
        bounded_degree,
        delta,
        r,
        decay_threshold: threshold,
        remainder,
        note,
    };
    Ok(CommandOutput { result: to_value(&result)?, table, pass: true, mode: super::mode(opts.exact) })
}
