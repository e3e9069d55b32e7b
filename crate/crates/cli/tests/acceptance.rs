//! Acceptance suite. Each test prints one `PASS`/`FAIL` line to the real
//! stderr (bypassing the harness capture) and then asserts.

use std::collections::BTreeSet;
use std::io::Write;
use std::process::Command;
use std::time::{Duration, Instant};

use heat_series_cli::fixtures::{complete_two, cycle, integer_segment, path, random_weighted, DEFAULT_SEED};
use heat_series_core::bounds::{
    convexity_split_holds, decay_threshold, lagrange_gap, lagrange_gap_bound, radius_estimate,
    radius_estimate_bounded_degree, remainder_bound_ln, stirling_lower_holds_exact, stirling_upper_holds_exact,
    DegreeGrowth, GrowthProfile,
};
use heat_series_core::counterexample::{run_audit, AuditGrid, FlatBump, FlatBumpParams};
use heat_series_core::graph::{EdgeRecord, GraphDocument, VertexRecord};
use heat_series_core::laplacian::{key_estimate_bound, set_estimate_bound};
use heat_series_core::oracle::{dense_laplacian, expm_apply};
use heat_series_core::scalar::Scalar;
use heat_series_core::series::coefficient_bound_audit;
use heat_series_core::{
    apply_laplacian, backward_solve, iterated_laplacian, BigRational, FiniteGraph, Graph, IntegerLine, LocalFunction,
    RadiusKind, RegularTree, SeriesSolution, TreeWord,
};
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report(n: u32, name: &str, ok: bool, detail: &str) {
    let verdict = if ok { "PASS" } else { "FAIL" };
    let line = format!("acceptance {n} [{verdict}] {name}: {detail}\n");
    let _ = std::io::stderr().lock().write_all(line.as_bytes());
}

fn oracle_fixtures() -> Vec<(&'static str, FiniteGraph)> {
    vec![
        ("K2", complete_two()),
        ("P10", path(10)),
        ("C100", cycle(100)),
        ("random-50", random_weighted(50, DEFAULT_SEED)),
        ("Z-segment-200", integer_segment(200)),
    ]
}

fn data_sets(g: &FiniteGraph, seed: u64) -> Vec<LocalFunction<i64, f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let random = g.ids().iter().map(|&x| (x, rng.gen_range(-1.0..=1.0))).collect();
    vec![LocalFunction::delta(g.root()), random]
}

const TIMES: [f64; 3] = [-0.1, -0.05, -0.01];

#[test]
fn acceptance_1_oracle_equivalence() {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for (name, g) in oracle_fixtures() {
        let l = dense_laplacian::<f64>(&g).unwrap();
        for a in data_sets(&g, 1) {
            let s = SeriesSolution::new(&g, a.clone(), 1e-11).unwrap();
            let av = l.to_vector(&a);
            for t in TIMES {
                let reference = expm_apply(&l, &av, t);
                for (i, x) in l.order().iter().enumerate() {
                    let u = s.eval(x, &t).unwrap_or_else(|e| panic!("{name} x={x} t={t}: {e}"));
                    worst = worst.max((u.value - reference[i]).abs());
                }
            }
        }
    }
    let elapsed = start.elapsed();
    let ok = worst <= 1e-10 && elapsed < Duration::from_secs(10);
    report(1, "series solver vs dense expm", ok, &format!("max error {worst:.3e}, runtime {elapsed:.2?}"));
    assert!(ok);
}

#[test]
fn acceptance_2_backward_duality() {
    let mut bitwise = true;
    let mut worst = 0.0f64;
    for (name, g) in oracle_fixtures() {
        let l = dense_laplacian::<f64>(&g).unwrap();
        for a in data_sets(&g, 2) {
            let s = SeriesSolution::new(&g, a.clone(), 1e-11).unwrap();
            let av = l.to_vector(&a);
            for t in TIMES {
                let back_t = -t;
                let reference = expm_apply(&l, &av, -back_t);
                for (i, x) in l.order().iter().enumerate() {
                    let b = backward_solve(&g, &a, x, &back_t, 1e-11).unwrap_or_else(|e| panic!("{name} {x}: {e}"));
                    let u = s.eval(x, &-back_t).unwrap();
                    bitwise &= b.value.to_bits() == u.value.to_bits();
                    worst = worst.max((b.value - reference[i]).abs());
                }
            }
        }
    }
    let ok = bitwise && worst <= 1e-10;
    report(2, "backward duality", ok, &format!("bit-identical: {bitwise}, max error vs e^(-tL)a {worst:.3e}"));
    assert!(ok);
}

/// Connected graph on `2..=12` vertices with weights and measures in
/// multiples of 1/8.
fn random_graph(rng: &mut ChaCha8Rng) -> FiniteGraph {
    let n = rng.gen_range(2..=12usize);
    let mut pairs = BTreeSet::new();
    for child in 1..n {
        pairs.insert((rng.gen_range(0..child), child));
    }
    for _ in 0..rng.gen_range(0..=n) {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if a != b {
            pairs.insert((a.min(b), a.max(b)));
        }
    }
    let vertices = (0..n).map(|i| VertexRecord { id: i as i64, mu: rng.gen_range(1..=32) as f64 / 8.0 }).collect();
    let edges = pairs
        .into_iter()
        .map(|(u, v)| EdgeRecord { u: u as i64, v: v as i64, w: rng.gen_range(1..=32) as f64 / 8.0 })
        .collect();
    FiniteGraph::from_document(&GraphDocument { root: 0, vertices, edges }).unwrap()
}

fn random_rational(rng: &mut ChaCha8Rng) -> BigRational {
    BigRational::new(rng.gen_range(-1000i64..=1000).into(), rng.gen_range(1i64..=97).into())
}

#[test]
fn acceptance_3_key_estimate_suite() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut point_violations, mut set_violations) = (0, 0);
    let instances = 10_000;
    for _ in 0..instances {
        let g = random_graph(&mut rng);
        let f: LocalFunction<i64, BigRational> = g.ids().iter().map(|&x| (x, random_rational(&mut rng))).collect();
        let lf = apply_laplacian(&g, &f).unwrap();
        let x = g.ids()[rng.gen_range(0..g.len())];
        if lf.get(&x).abs() > key_estimate_bound(&g, &f, &x).unwrap() {
            point_violations += 1;
        }
        let k: BTreeSet<i64> = g.ids().iter().copied().filter(|_| rng.gen_bool(0.4)).chain([x]).collect();
        let lhs = k.iter().map(|y| lf.get(y).abs()).fold(BigRational::from_u64(0), |m, v| m.max_of(v));
        if lhs > set_estimate_bound(&g, &f, &k).unwrap() {
            set_violations += 1;
        }
    }
    let ok = point_violations == 0 && set_violations == 0;
    report(
        3,
        "key estimate and set version (exact)",
        ok,
        &format!("{instances} instances, {point_violations} pointwise and {set_violations} set violations"),
    );
    assert!(ok);
}

#[test]
fn acceptance_4_radius_trichotomy() {
    let mut mismatches = Vec::new();
    let mut points = 0;
    let cs = [0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0, 5.0, 7.5, 10.0];
    for i in 0..10u32 {
        for j in 0..10u32 {
            for &c in &cs {
                points += 1;
                // A2 = i/10 and A3 = (j + 1)/10 + 1/20·[j odd]; decided on the integer sum
                let a2 = format!("0.{i}");
                let (a3, twentieths) = if j % 2 == 0 {
                    (format!("{}.{}", (j + 1) / 10, (j + 1) % 10), 2 * (i + j + 1))
                } else {
                    (format!("{}.{}5", (j + 1) / 10, (j + 1) % 10), 2 * (i + j + 1) + 1)
                };
                let gp = GrowthProfile::parse(1.0, &a2).unwrap();
                let dg = DegreeGrowth::parse(c, &a3).unwrap();
                let cert = radius_estimate(&gp, &dg);
                let expected = twentieths.cmp(&20);
                let ok = match expected {
                    std::cmp::Ordering::Less => cert.kind == RadiusKind::Infinite && cert.radius == f64::INFINITY,
                    std::cmp::Ordering::Equal => {
                        cert.kind == RadiusKind::FiniteLowerBound
                            && cert.radius == 1.0 / (2.0 * std::f64::consts::E * c)
                    }
                    std::cmp::Ordering::Greater => cert.kind == RadiusKind::OutOfHypothesis,
                };
                if !ok {
                    mismatches.push(format!("A2={a2} A3={a3} C={c}: {cert}"));
                }
            }
        }
    }
    let mut bounded_ok = true;
    for &d in &cs {
        let sharp = radius_estimate_bounded_degree(&GrowthProfile::parse(1.0, "1").unwrap(), d).unwrap();
        bounded_ok &= sharp.finite_radius() == Some(1.0 / (2.0 * std::f64::consts::E * d));
        let sub = radius_estimate_bounded_degree(&GrowthProfile::parse(1.0, "0.95").unwrap(), d).unwrap();
        bounded_ok &= sub.kind == RadiusKind::Infinite;
    }
    let ok = mismatches.is_empty() && bounded_ok;
    report(
        4,
        "radius trichotomy",
        ok,
        &format!("{points} grid points, {} mismatches, bounded-degree specialisation ok: {bounded_ok}", mismatches.len()),
    );
    assert!(ok, "{mismatches:?}");
}

#[test]
fn acceptance_5_remainder_decay() {
    let start = Instant::now();
    let delta = 0.9 / (2.0 * std::f64::consts::E);
    let mut failures = Vec::new();
    for (a2, a3) in [("1", "0"), ("0.5", "0.5"), ("0", "1")] {
        let gp = GrowthProfile::parse(1.0, a2).unwrap();
        let dg = DegreeGrowth::parse(1.0, a3).unwrap();
        for r in [1.0, 5.0, 10.0] {
            let ln_q: Vec<f64> = (1..10_000u64).map(|k| remainder_bound_ln(k, delta, &dg, &gp, r).unwrap()).collect();
            let last_rise = ln_q.windows(2).rposition(|w| w[1] >= w[0]).map_or(1, |i| i + 2);
            let below = ln_q.iter().position(|&v| v < (1e-30f64).ln());
            if last_rise >= 9_999 || below.is_none() {
                failures.push(format!("zeta=0 A2={a2} R={r}: last rise {last_rise}, below 1e-30 at {below:?}"));
            }
        }
    }
    for (a2, a3, zeta) in [("0.8", "0", 0.2), ("0.4", "0.4", 0.2), ("0.5", "0", 0.5), ("0.25", "0.25", 0.5)] {
        let gp = GrowthProfile::parse(1.0, a2).unwrap();
        let dg = DegreeGrowth::parse(1.0, a3).unwrap();
        for r in [1.0, 5.0, 10.0] {
            let threshold = decay_threshold(zeta, delta, dg.c, r).unwrap().ceil() as u64;
            for k in threshold..threshold + 10_000 {
                let lhs = remainder_bound_ln(k, delta, &dg, &gp, r).unwrap();
                let kf = k as f64;
                let rhs = gp.a1.ln() - (zeta / 3.0) * kf * kf.ln();
                if lhs > rhs {
                    failures.push(format!("zeta={zeta} A2={a2} R={r} k={k}: ln Q {lhs} > {rhs}"));
                    break;
                }
            }
        }
    }
    let elapsed = start.elapsed();
    let ok = failures.is_empty() && elapsed < Duration::from_secs(5);
    report(5, "remainder decay", ok, &format!("{} failures, runtime {elapsed:.2?}", failures.len()));
    assert!(ok, "{failures:?}");
}

#[test]
fn acceptance_6_elementary_inequalities() {
    let stirling = (1..=500u64).filter(|&k| !(stirling_lower_holds_exact(k) && stirling_upper_holds_exact(k))).count();
    let mut lagrange = 0;
    for r in [1u64, 2, 5, 10] {
        for k in r..=10_000 {
            if lagrange_gap(k, r as f64) > lagrange_gap_bound(k, r as f64).unwrap() {
                lagrange += 1;
            }
        }
    }
    let mut convexity = 0;
    for k in 1..=1000u64 {
        for d in 1..=1000u64 {
            if !convexity_split_holds(k, d).unwrap() {
                convexity += 1;
            }
        }
    }
    let ok = stirling == 0 && lagrange == 0 && convexity == 0;
    report(
        6,
        "Stirling, Lagrange gap and convexity sweeps",
        ok,
        &format!("violations: stirling {stirling}, lagrange {lagrange}, convexity {convexity}"),
    );
    assert!(ok);
}

#[test]
fn acceptance_7_counterexample_audit() {
    let start = Instant::now();
    let params = FlatBumpParams::new(4.0, None, 1.0, 1.0).unwrap();
    let bump = FlatBump::new(params);
    let grid = AuditGrid::default();
    let audit = run_audit(&bump, &grid).unwrap();

    let residual_ok = audit.max_residual <= 1e-9 && audit.residual_polynomial_zero == Some(true);
    let window_ok = audit.growth.x_min == params.r0().ceil() as i64 && audit.growth.x_max == 60;
    let growth_ok = audit.growth_pass && window_ok;
    let ln_tol = (1e-8f64).ln();
    let mut flat_ok = true;
    for x in 0..=3i64 {
        let w = bump.non_analyticity_witness(x, 10, 30, 1e-8).unwrap();
        for row in &w.flatness {
            flat_ok &= row.j <= 10 && row.ln_abs[29] <= ln_tol;
        }
        flat_ok &= w.flatness.len() == 11;
    }
    let v = bump.v_eval(0, 0.5).unwrap();
    let g = bump.g_eval(0.5);
    let nonzero_ok = v > 0.0 && (v - g).abs() <= 1e-14 * g;
    let elapsed = start.elapsed();
    let ok = residual_ok && growth_ok && flat_ok && nonzero_ok && audit.pass && elapsed < Duration::from_secs(30);
    report(
        7,
        "flat-bump counterexample audit",
        ok,
        &format!(
            "relative residual {:.3e}, residual polynomial zero {:?}, growth window [{}, {}] pass {}, flat at 2^-30 {flat_ok}, v(0,0.5) = {v:.6e}, runtime {elapsed:.2?}",
            audit.max_residual, audit.residual_polynomial_zero, audit.growth.x_min, audit.growth.x_max, audit.growth_pass
        ),
    );
    assert!(ok);
}

#[test]
fn acceptance_8_coefficient_bound_audit() {
    let z = IntegerLine::unit();
    let sz = SeriesSolution::<_, BigRational>::new(&z, LocalFunction::delta(0), 1e-12).unwrap();
    let gp = GrowthProfile::parse(1.0, "0").unwrap();
    let line = coefficient_bound_audit(&sz, &gp, &DegreeGrowth::parse(2.0, "0").unwrap(), 25, 25).unwrap();

    let tree = RegularTree::unit(3).unwrap();
    let quotient = tree.radial_quotient(27).unwrap();
    let sq = SeriesSolution::<_, BigRational>::new(&quotient, LocalFunction::delta(0), 1e-12).unwrap();
    let radial = coefficient_bound_audit(&sq, &gp, &DegreeGrowth::parse(3.0, "0").unwrap(), 25, 25).unwrap();

    let mut quotient_matches = true;
    for k in 0..=6 {
        let on_tree =
            iterated_laplacian(&tree, &LocalFunction::<TreeWord, BigRational>::delta(TreeWord::default()), k).unwrap();
        let on_path = iterated_laplacian(&quotient, &LocalFunction::<i64, BigRational>::delta(0), k).unwrap();
        for (x, v) in on_tree.iter() {
            quotient_matches &= *v == on_path.get(&(x.0.len() as i64));
        }
    }
    let ok = line.pass && radial.pass && quotient_matches && line.checked > 0 && radial.checked > 0;
    report(
        8,
        "coefficient bound (2D)^k on Z and the 3-regular tree",
        ok,
        &format!(
            "Z: {} checks pass {}; tree (radial quotient): {} checks pass {}; tree equals quotient for k <= 6: {quotient_matches}",
            line.checked, line.pass, radial.checked, radial.pass
        ),
    );
    assert!(ok, "{:?} {:?}", line.first_violation, radial.first_violation);
}

fn run_verify(threads: &str) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_heat-series"))
        .arg("verify")
        .env("HEAT_SERIES_THREADS", threads)
        .output()
        .expect("run heat-series");
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    out.stdout
}

#[test]
fn acceptance_9_determinism() {
    let first = run_verify("1");
    let second = run_verify("1");
    let parallel = run_verify("4");
    let ok = !first.is_empty() && first == second && first == parallel;
    report(9, "verify reports are byte-identical", ok, &format!("{} bytes, repeated and 4-thread runs identical: {ok}", first.len()));
    assert!(ok);
}
