//! Sequential versus parallel execution of the heavier oracles.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;
use symloop::acceptance::run_criterion;
use symloop::oracles::schur::{
    bar_boundaries, cyclic_torus_generator, enumerate_group, schur_multiplier_of, sl2_f3_generators,
};
use symloop::Exec;

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn schur(c: &mut Criterion) {
    let mut g = c.benchmark_group("schur");
    g.sample_size(10);
    let groups = [
        ("sl2_f3", enumerate_group(&sl2_f3_generators().unwrap(), 200, Exec::Sequential).unwrap()),
        ("c30", enumerate_group(&[cyclic_torus_generator(30).unwrap()], 200, Exec::Sequential).unwrap()),
    ];
    for (name, group) in &groups {
        for (mode, exec) in MODES {
            g.bench_with_input(BenchmarkId::new(*name, mode), group, |b, group| {
                b.iter(|| black_box(schur_multiplier_of(group, exec)))
            });
        }
    }
    g.finish();
}

fn boundaries(c: &mut Criterion) {
    let mut g = c.benchmark_group("bar_boundaries");
    let group = enumerate_group(&sl2_f3_generators().unwrap(), 200, Exec::Sequential).unwrap();
    for (mode, exec) in MODES {
        g.bench_function(mode, |b| b.iter(|| black_box(bar_boundaries(&group, exec))));
    }
    g.finish();
}

fn criteria(c: &mut Criterion) {
    let mut g = c.benchmark_group("criterion");
    g.sample_size(10);
    for id in [2, 4] {
        for (mode, exec) in MODES {
            g.bench_function(BenchmarkId::new(id.to_string(), mode), |b| {
                b.iter(|| black_box(run_criterion(id, 1729, exec)))
            });
        }
    }
    g.finish();
}

criterion_group!(benches, schur, boundaries, criteria);
criterion_main!(benches);
