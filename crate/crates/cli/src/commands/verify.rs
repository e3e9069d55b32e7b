//! Oracle cross-check suite on finite graphs.

use heat_series_core::laplacian::key_estimate_bound;
use heat_series_core::oracle::{brute_iterate, dense_laplacian, expm_apply};
use heat_series_core::scalar::Scalar;
use heat_series_core::{BigRational, FiniteGraph, Graph, IteratedLaplacianTable, LocalFunction, SeriesSolution};
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{ordered_map, positive_tol, times, to_value, CommandOutput};
use crate::args::Options;
use crate::config::RunConfig;
use crate::error::CliError;
use crate::fixtures::{fixture_set, DEFAULT_SEED};
use crate::report::{fmt_f64, Table};
use crate::source::{GraphDescription, GraphSource};

pub const ORACLE_TOLERANCE: f64 = 1e-10;
pub const RESIDUAL_TOLERANCE: f64 = 1e-9;
const RESIDUAL_STEP: f64 = 1e-3;

#[derive(Debug, Serialize)]
struct DataCheck {
    data: &'static str,
    /// `max |series − expm(tΔ)a|` over vertices and times.
    series_max_error: f64,
    max_tail_bound: f64,
    /// `backward_solve(a,x,s)` equals `series_eval(a,x,−s)` bit for bit.
    duality_bitwise: bool,
    /// `max |backward_solve(a,x,s) − expm(−sΔ)a|`.
    backward_max_error: f64,
    max_residual: f64,
    /// Exact iterates equal dense matrix powers for every `k ≤ kmax`.
    iterates_match: bool,
    key_estimate_checks: usize,
    key_estimate_violations: usize,
    /// `Σ μ(x) Δᵏa(x) = 0` exactly for `1 ≤ k ≤ kmax`.
    conservation: bool,
    pass: bool,
}

#[derive(Debug, Serialize)]
struct FixtureReport {
    graph: GraphDescription,
    checks: Vec<DataCheck>,
    pass: bool,
}

#[derive(Serialize)]
struct VerifyResult {
    seed: u64,
    oracle_tolerance: f64,
    residual_tolerance: f64,
    fixtures: Vec<FixtureReport>,
}

/// Dyadic values in `[−1, 1]` on every vertex, so the exact checks stay cheap.
fn random_data(g: &FiniteGraph, seed: u64) -> LocalFunction<i64, f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    g.ids().iter().map(|&x| (x, rng.gen_range(-1024i32..=1024) as f64 / 1024.0)).collect()
}

struct Settings {
    times: Vec<f64>,
    tol: f64,
    kmax: usize,
    seed: u64,
}

fn check(g: &FiniteGraph, name: &'static str, a: &LocalFunction<i64, f64>, s: &Settings) -> Result<DataCheck, CliError> {
    let dense = dense_laplacian::<f64>(g)?;
    let order = dense.order().to_vec();
    let av = dense.to_vector(a);
    let solution = SeriesSolution::new(g, a.clone(), s.tol)?;
    // backward_solve on its own coefficient table, built once per data set
    let backward_solver = SeriesSolution::new(g, a.clone(), s.tol)?;

    let mut series_max_error = 0.0f64;
    let mut backward_max_error = 0.0f64;
    let mut max_tail_bound = 0.0f64;
    let mut max_residual = 0.0f64;
    let mut duality_bitwise = true;
    for &t in &s.times {
        let forward = expm_apply(&dense, &av, t);
        let back_s = t.abs();
        let backward = if t <= 0.0 { forward.clone() } else { expm_apply(&dense, &av, -back_s) };
        let rows = ordered_map(&order, |x| {
            let u = solution.eval(x, &t)?;
            let mirrored = if t <= 0.0 { u.clone() } else { solution.eval(x, &-back_s)? };
            let b = backward_solver.backward_eval(x, &back_s)?;
            let r = solution.residual_check(x, &t, RESIDUAL_STEP)?;
            Ok((u, mirrored, b, r))
        })?;
        for (i, (u, mirrored, b, r)) in rows.iter().enumerate() {
            series_max_error = series_max_error.max((u.value - forward[i]).abs());
            backward_max_error = backward_max_error.max((b.value - backward[i]).abs());
            max_tail_bound = max_tail_bound.max(u.tail_bound);
            max_residual = max_residual.max(r.residual);
            duality_bitwise &= mirrored.value.to_bits() == b.value.to_bits() && mirrored.k_used == b.k_used;
        }
    }

    let exact_dense = dense_laplacian::<BigRational>(g)?;
    let exact_a: LocalFunction<i64, BigRational> = a.map(|v| BigRational::lift(*v));
    let table = IteratedLaplacianTable::new(g, exact_a.clone());
    table.ensure(s.kmax)?;
    let mut brute = exact_dense.to_vector(&exact_a);
    let mut iterates_match = true;
    let mut conservation = true;
    let mut key_checks = 0;
    let mut key_violations = 0;
    for k in 0..=s.kmax {
        let f = table.entry(k)?;
        if k > 0 {
            brute = brute_iterate(&exact_dense, &brute, 1)?;
        }
        iterates_match &= exact_dense.to_vector(&f) == brute;
        if k > 0 {
            let mass = order.iter().try_fold(BigRational::zero(), |acc, x| {
                Ok::<_, CliError>(acc + BigRational::lift(g.measure(x)?) * f.get(x))
            })?;
            conservation &= mass.is_zero();
        }
        if k < s.kmax {
            let next = table.entry(k + 1)?;
            let bad = ordered_map(&order, |x| Ok(next.get(x).abs() > key_estimate_bound(g, &f, x)?))?;
            key_checks += bad.len();
            key_violations += bad.into_iter().filter(|&b| b).count();
        }
    }

    let pass = series_max_error <= ORACLE_TOLERANCE
        && backward_max_error <= ORACLE_TOLERANCE
        && duality_bitwise
        && max_residual <= RESIDUAL_TOLERANCE
        && iterates_match
        && key_violations == 0
        && conservation;
    Ok(DataCheck {
        data: name,
        series_max_error,
        max_tail_bound,
        duality_bitwise,
        backward_max_error,
        max_residual,
        iterates_match,
        key_estimate_checks: key_checks,
        key_estimate_violations: key_violations,
        conservation,
        pass,
    })
}

fn verify_fixture(source: &GraphSource, s: &Settings) -> Result<FixtureReport, CliError> {
    let g = source.finite().ok_or_else(|| CliError::usage("verify needs a finite graph (--graph FILE)"))?;
    let delta = LocalFunction::from_pairs([(g.root(), 1.0)]);
    let checks = vec![check(g, "delta-root", &delta, s)?, check(g, "random", &random_data(g, s.seed), s)?];
    let pass = checks.iter().all(|c| c.pass);
    Ok(FixtureReport { graph: source.describe(), checks, pass })
}

pub fn run(opts: &Options, config: &mut RunConfig) -> Result<CommandOutput, CliError> {
    if opts.exact {
        return Err(CliError::usage("verify always runs its exact checks exactly; --exact is not accepted"));
    }
    let seed = opts.seed.unwrap_or(DEFAULT_SEED);
    let sources = match super::graph_source(opts)? {
        Some(source) if !source.is_finite() => {
            return Err(CliError::usage("verify needs a finite graph (--graph FILE); families are infinite"))
        }
        Some(source) => vec![source],
        None => fixture_set(seed),
    };
    let tol = positive_tol(opts.tol.unwrap_or(super::solve::DEFAULT_TOL))?;
    let kmax = opts.kmax.unwrap_or(12);
    let times: Vec<f64> = times::<f64>(opts, &super::solve::DEFAULT_TIMES)?.into_iter().map(|(_, t)| t).collect();
    let settings = Settings { times, tol, kmax, seed };

    config.seed = Some(seed);
    config.tol = Some(tol);
    config.kmax = Some(kmax);
    if config.t.is_empty() {
        config.t = super::solve::DEFAULT_TIMES.iter().map(|s| s.to_string()).collect();
    }
    config.fixtures = sources.iter().map(GraphSource::describe).collect();

    let fixtures = sources.iter().map(|s| verify_fixture(s, &settings)).collect::<Result<Vec<_>, _>>()?;
    let mut table = Table::new(vec![
        "graph",
        "data",
        "series_max_error",
        "backward_max_error",
        "max_residual",
        "duality_bitwise",
        "iterates_match",
        "key_estimate_violations",
        "conservation",
        "pass",
    ]);
    for f in &fixtures {
        for c in &f.checks {
            table.push(vec![
                f.graph.name.clone().unwrap_or_default(),
                c.data.to_string(),
                fmt_f64(c.series_max_error),
                fmt_f64(c.backward_max_error),
                fmt_f64(c.max_residual),
                c.duality_bitwise.to_string(),
                c.iterates_match.to_string(),
                c.key_estimate_violations.to_string(),
                c.conservation.to_string(),
                c.pass.to_string(),
            ]);
        }
    }
    let pass = fixtures.iter().all(|f| f.pass);
    let result = VerifyResult { seed, oracle_tolerance: ORACLE_TOLERANCE, residual_tolerance: RESIDUAL_TOLERANCE, fixtures };
    Ok(CommandOutput { result: to_value(&result)?, table, pass, mode: heat_series_core::ArithmeticMode::Floating })
}
