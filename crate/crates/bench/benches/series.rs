use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use heat_series_bench::cycle;
use heat_series_core::counterexample::{FlatBump, FlatBumpParams};
use heat_series_core::oracle::{dense_laplacian, expm_apply};
use heat_series_core::{iterated_laplacian, BigRational, IntegerLine, LocalFunction, SeriesSolution};

fn series_vs_expm(c: &mut Criterion) {
    let g = cycle(100);
    let a = LocalFunction::delta(0);
    let l = dense_laplacian::<f64>(&g).unwrap();
    let av = l.to_vector(&a);
    let mut group = c.benchmark_group("heat_flow_c100");
    for t in [-0.01, -0.1, -1.0] {
        group.bench_with_input(BenchmarkId::new("series_all_vertices", t), &t, |b, &t| {
            b.iter(|| {
                let s = SeriesSolution::new(&g, a.clone(), 1e-11).unwrap();
                (0..100).map(|x| s.eval(&x, &t).unwrap().value).sum::<f64>()
            })
        });
        group.bench_with_input(BenchmarkId::new("expm_apply", t), &t, |b, &t| {
            b.iter(|| expm_apply(&l, black_box(&av), t))
        });
    }
    group.finish();
}

fn iterates_on_z(c: &mut Criterion) {
    let z = IntegerLine::unit();
    let mut group = c.benchmark_group("iterated_laplacian_z");
    for k in [10usize, 40] {
        group.bench_with_input(BenchmarkId::new("f64", k), &k, |b, &k| {
            b.iter(|| iterated_laplacian(&z, &LocalFunction::<i64, f64>::delta(0), k).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("exact", k), &k, |b, &k| {
            b.iter(|| iterated_laplacian(&z, &LocalFunction::<i64, BigRational>::delta(0), k).unwrap())
        });
    }
    group.finish();
}

fn flat_bump_derivatives(c: &mut Criterion) {
    let params = FlatBumpParams::new(4.0, None, 1.0, 1.0).unwrap();
    c.bench_function("flat_bump_derivatives_order_20", |b| {
        b.iter(|| {
            let bump = FlatBump::new(params);
            bump.at(black_box(0.5), 20).unwrap().derivative(20)
        })
    });
}

criterion_group!(benches, series_vs_expm, iterates_on_z, flat_bump_derivatives);
criterion_main!(benches);
