use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qfock_bench::demo_space;
use qfock_core::conjugate::{conjugate_series, dual_matrix};
use qfock_core::fock::{fields, t_adjoint, WickTable};

fn operators(c: &mut Criterion) {
    let s = demo_space(6);
    let f = fields(&s).unwrap();
    let mut g = c.benchmark_group("operators");
    g.sample_size(10);
    g.bench_function("fields", |b| b.iter(|| fields(&s).unwrap()));
    g.bench_function("t_adjoint", |b| b.iter(|| t_adjoint(&s, &f[0])));
    g.bench_function("dual_matrix", |b| b.iter(|| dual_matrix(&s, 0).unwrap()));
    for len in [2, 3, 4] {
        g.bench_with_input(BenchmarkId::new("wick_table", len), &len, |b, &len| {
            b.iter(|| WickTable::build(&s, len, 6 - len).unwrap())
        });
    }
    g.finish();
}

fn series(c: &mut Criterion) {
    let s = demo_space(6);
    let mut g = c.benchmark_group("conjugate_series");
    g.sample_size(10);
    for m in [1, 2, 3] {
        g.bench_with_input(BenchmarkId::from_parameter(m), &m, |b, &m| b.iter(|| conjugate_series(&s, 0, m).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, operators, series);
criterion_main!(benches);
