use std::hint::black_box;

use chill_core::ansatz::{weighted_error_norm, Explicit};
use chill_core::operators::{damped_kernel_table, duhamel_step, Grid};
use chill_core::par::Exec;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn weighted_norm(c: &mut Criterion) {
    let mut g = c.benchmark_group("weighted_error_norm");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::new(name, "k=2,t=1e3"), &exec, |b, &exec| {
            b.iter(|| weighted_error_norm(&Explicit { k: 2 }, black_box(1e3), 1.0, 2.0, exec).unwrap())
        });
    }
    g.finish();
}

fn heat_kernel_table(c: &mut Criterion) {
    let mut g = c.benchmark_group("damped_kernel_table");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::new(name, "tau=1,n=400"), &exec, |b, &exec| {
            b.iter(|| damped_kernel_table(black_box(1.0), 0.05, 400, exec).unwrap())
        });
    }
    g.finish();
}

fn duhamel(c: &mut Criterion) {
    let grid = Grid::symmetric(20.0, 801).unwrap();
    let f = grid.sample(|x| (-x * x).exp());
    let mut g = c.benchmark_group("duhamel_step");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::new(name, "tau=0.5,n=801"), &exec, |b, &exec| {
            b.iter(|| duhamel_step(black_box(&f), 0.5, &grid, exec).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, weighted_norm, heat_kernel_table, duhamel);
criterion_main!(benches);
