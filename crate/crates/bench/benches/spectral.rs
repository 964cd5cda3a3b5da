use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use discgeom::{commute_distance, eigendecompose, isoperimetric_constant, FilterKind, FilterSpec};
use discgeom_bench::{graph, signal};

fn spectrum(c: &mut Criterion) {
    let mut group = c.benchmark_group("eigendecompose");
    for n in [16, 64, 256] {
        let g = graph(n, 0.2, 1);
        group.bench_with_input(BenchmarkId::from_parameter(n), &g, |b, g| {
            b.iter(|| eigendecompose(black_box(g)).unwrap())
        });
    }
    group.finish();
}

fn isoperimetric(c: &mut Criterion) {
    let mut group = c.benchmark_group("isoperimetric_constant");
    for n in [8, 12, 16] {
        let g = graph(n, 0.4, 2);
        group.bench_with_input(BenchmarkId::from_parameter(n), &g, |b, g| {
            b.iter(|| isoperimetric_constant(black_box(g)).unwrap())
        });
    }
    group.finish();
}

fn commute(c: &mut Criterion) {
    let mut group = c.benchmark_group("commute_distance");
    for n in [16, 64] {
        let g = graph(n, 0.2, 3);
        group.bench_with_input(BenchmarkId::from_parameter(n), &g, |b, g| {
            b.iter(|| commute_distance(black_box(g), 0.0).unwrap())
        });
    }
    group.finish();
}

fn chebyshev(c: &mut Criterion) {
    let n = 128;
    let g = graph(n, 0.1, 4);
    let s = eigendecompose(&g).unwrap();
    let f = signal(n, 5);
    let spec = FilterSpec::new(FilterKind::Heat { t: 1.0, c: 1.0 }, 30).unwrap();
    c.bench_function("chebyshev_heat_order30_n128", |b| {
        b.iter(|| s.apply_filter(black_box(&spec), black_box(&f)).unwrap())
    });
}

criterion_group!(benches, spectrum, isoperimetric, commute, chebyshev);
criterion_main!(benches);
