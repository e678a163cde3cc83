use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qfock_bench::{demo_exact, demo_float};
use qfock_core::build_space;
use qfock_core::oracle::{gram_oracle, ORACLE_CAP};

fn recursion(c: &mut Criterion) {
    let exact = demo_exact();
    let float = demo_float();
    let mut g = c.benchmark_group("gram_recursion");
    g.sample_size(10);
    for n in [3, 4, 5, 6] {
        g.bench_with_input(BenchmarkId::new("exact", n), &n, |b, &n| b.iter(|| build_space(&exact, n).unwrap()));
        g.bench_with_input(BenchmarkId::new("float", n), &n, |b, &n| b.iter(|| build_space(&float, n).unwrap()));
    }
    g.finish();
}

fn oracle(c: &mut Criterion) {
    let exact = demo_exact();
    let mut g = c.benchmark_group("gram_oracle");
    g.sample_size(10);
    for n in [3, 4, 5] {
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| b.iter(|| gram_oracle(&exact, n, ORACLE_CAP).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, recursion, oracle);
criterion_main!(benches);
