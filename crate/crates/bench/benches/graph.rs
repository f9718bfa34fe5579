use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use modulizer_bench::dag;
use modulizer_core::graph::{detect_cycles, histogram};

fn closure(c: &mut Criterion) {
    let mut group = c.benchmark_group("transitive_counts");
    for n in [500, 2000, 8000] {
        let g = dag(n, 6.0, 3);
        group.bench_with_input(BenchmarkId::from_parameter(n), &g, |b, g| {
            // The closure is cached per graph, so measure a fresh copy.
            b.iter(|| g.clone().transitive_counts())
        });
    }
    group.finish();
}

fn cycles(c: &mut Criterion) {
    let mut group = c.benchmark_group("detect_cycles");
    for n in [2000, 8000] {
        let g = dag(n, 6.0, 4);
        group.bench_with_input(BenchmarkId::from_parameter(n), &g, |b, g| b.iter(|| detect_cycles(g)));
    }
    group.finish();
}

fn buckets(c: &mut Criterion) {
    let g = dag(4000, 6.0, 5);
    let edges = [0, 1, 2, 5, 10, 20, 50, 100, 200, 500, 1000];
    c.bench_function("histogram/4000", |b| b.iter(|| histogram(&g.clone(), &edges).unwrap()));
}

criterion_group!(benches, closure, cycles, buckets);
criterion_main!(benches);
