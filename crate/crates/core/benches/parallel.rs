//! Default rayon pool against a one-thread pool on the heavy kernels. Built
//! without the `parallel` feature, both arms run the sequential fallback.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use koszul_core::flag::Grassmannian;
use koszul_core::fsplit::{closure_property_check, schubert_chart_data, ChartCase};
use koszul_core::koszul::{bar_tor_table, koszul_lattice_test, resolution_tor_table, DEFAULT_CAP};
use koszul_core::PrimeField;

fn pools() -> Vec<(&'static str, rayon::ThreadPool)> {
    vec![
        ("one-thread", rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap()),
        ("default", rayon::ThreadPoolBuilder::new().build().unwrap()),
    ]
}

fn tor(c: &mut Criterion) {
    let f = PrimeField::new(32003).unwrap();
    let g24 = Grassmannian::new(2, 4, f).unwrap().presentation;
    let g25 = Grassmannian::new(2, 5, f).unwrap().presentation;
    let mut group = c.benchmark_group("tor");
    group.sample_size(10);
    for (name, pool) in pools() {
        group.bench_with_input(BenchmarkId::new("bar-gr24-j4", name), &pool, |b, pool| {
            b.iter(|| pool.install(|| bar_tor_table(&g24, 4, 4).unwrap()))
        });
        group.bench_with_input(BenchmarkId::new("resolution-gr25-j5", name), &pool, |b, pool| {
            b.iter(|| pool.install(|| resolution_tor_table(&g25, 4, 5).unwrap()))
        });
    }
    group.finish();
}

fn lattice(c: &mut Criterion) {
    let f = PrimeField::new(32003).unwrap();
    let g25 = Grassmannian::new(2, 5, f).unwrap().presentation;
    let mut group = c.benchmark_group("lattice");
    group.sample_size(10);
    for (name, pool) in pools() {
        group.bench_with_input(BenchmarkId::new("gr25-n4", name), &pool, |b, pool| {
            b.iter(|| pool.install(|| koszul_lattice_test(&g25, 4, DEFAULT_CAP).unwrap()))
        });
    }
    group.finish();
}

fn splitting(c: &mut Criterion) {
    let chart = schubert_chart_data(ChartCase::Gr24BigCell, PrimeField::new(3).unwrap()).unwrap();
    let s = chart.candidate().unwrap();
    let mut group = c.benchmark_group("fsplit");
    group.sample_size(10);
    for (name, pool) in pools() {
        group.bench_with_input(BenchmarkId::new("gr24-closure-d10", name), &pool, |b, pool| {
            b.iter(|| pool.install(|| closure_property_check(&s, &chart.ideals[1], &chart.ideals[3], 10).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, tor, lattice, splitting);
criterion_main!(benches);
