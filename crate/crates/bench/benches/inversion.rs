use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use qsvand::displacement::materialize;
use qsvand::fast_gepp::gepp;
use qsvand::inversion_engine::invert;
use qsvand::oracle::dense_inverse;
use qsvand_bench::bench_instance;

fn fast_vs_dense_inverse(c: &mut Criterion) {
    let mut group = c.benchmark_group("inverse");
    group.sample_size(10);
    for n in [64usize, 128] {
        let inst = bench_instance(n, 1, 42);
        let r = materialize(&inst);
        group.bench_with_input(BenchmarkId::new("fast", n), &inst, |bch, inst| {
            bch.iter(|| invert(inst).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("dense_oracle", n), &r, |bch, r| {
            bch.iter(|| dense_inverse(r).unwrap())
        });
    }
    group.finish();
}

fn structured_factorization(c: &mut Criterion) {
    let mut group = c.benchmark_group("gepp");
    group.sample_size(10);
    let inst = bench_instance(256, 1, 42);
    group.bench_function("fast_256", |bch| bch.iter(|| gepp(&inst).unwrap()));
    group.finish();
}

criterion_group!(benches, fast_vs_dense_inverse, structured_factorization);
criterion_main!(benches);
