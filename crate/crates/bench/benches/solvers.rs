use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use latdiff::greensfn::{green_double_table, green_recursive, green_single_table, DEFAULT_TOL_REC};
use latdiff::{solve_scattering, Halfline, Scatterer, Wedge};
use latdiff_bench::{reference_wavenumber, PHI_IN};
use std::hint::black_box;

fn green(c: &mut Criterion) {
    let k = reference_wavenumber();
    let mut g = c.benchmark_group("green_table");
    for n in [4, 8, 16] {
        g.bench_with_input(BenchmarkId::new("double", n), &n, |b, &n| {
            b.iter(|| green_double_table(&k, n, 256).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("single", n), &n, |b, &n| {
            b.iter(|| green_single_table(&k, n, 256).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("recursive", n), &n, |b, &n| {
            b.iter(|| green_recursive(&k, n, DEFAULT_TOL_REC).unwrap())
        });
    }
    g.finish();
}

fn halfline(c: &mut Criterion) {
    let k = reference_wavenumber();
    c.bench_function("halfline_setup", |b| b.iter(|| Halfline::new(&k, black_box(PHI_IN)).unwrap()));
    let h = Halfline::new(&k, PHI_IN).unwrap();
    c.bench_function("halfline_residue_table_8", |b| b.iter(|| h.residue_table(black_box(8)).unwrap()));
    c.bench_function("halfline_wh_table_8", |b| b.iter(|| h.wiener_hopf_table(black_box(8), 4096).unwrap()));
}

fn wedge(c: &mut Criterion) {
    let k = reference_wavenumber();
    let mut g = c.benchmark_group("wedge");
    g.sample_size(10);
    g.bench_function("setup", |b| b.iter(|| Wedge::new(&k, black_box(PHI_IN)).unwrap()));
    let w = Wedge::new(&k, PHI_IN).unwrap();
    g.bench_function("field_-3_-2", |b| b.iter(|| w.wedge_field(black_box(-3), black_box(-2)).unwrap()));
    g.finish();
}

fn oracle(c: &mut Criterion) {
    let k = reference_wavenumber();
    let h = Halfline::new(&k, PHI_IN).unwrap();
    let mut g = c.benchmark_group("oracle");
    g.sample_size(10);
    for r in [20, 40] {
        g.bench_with_input(BenchmarkId::new("halfline", r), &r, |b, &r| {
            b.iter(|| solve_scattering(&k, r, Scatterer::HalfLine, h.incident).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, green, halfline, wedge, oracle);
criterion_main!(benches);
