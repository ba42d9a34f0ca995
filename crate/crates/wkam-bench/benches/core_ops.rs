use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use wkam_bench::{adapted_kernel, grid, pendulum, pendulum_kernel};
use wkam_core::weakkam::{
    critical_value, peierls_barrier, weak_kam_solve, BarrierOptions, CriticalValueOptions,
    SolveOptions,
};
use wkam_core::{ActionKernel, GridField, Semigroup};

fn bench_kernel_assembly(c: &mut Criterion) {
    let spec = pendulum();
    let mut group = c.benchmark_group("kernel_assembly");
    for n in [64usize, 128] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| ActionKernel::assemble(&spec, grid(n), 0.5, 2, 8).unwrap());
        });
    }
    group.finish();
}

fn bench_minplus_compose(c: &mut Criterion) {
    let mut group = c.benchmark_group("minplus_compose");
    for n in [64usize, 128] {
        let kernel = pendulum_kernel(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &kernel, |b, kernel| {
            b.iter(|| kernel.compose(black_box(kernel)).unwrap());
        });
    }
    group.finish();
}

fn bench_minplus_apply(c: &mut Criterion) {
    let kernel = pendulum_kernel(128);
    let u = GridField::from_fn(kernel.grid(), |q| (q[0] * 7.3).sin());
    c.bench_function("minplus_apply_128", |b| {
        b.iter(|| kernel.apply(black_box(&u), Semigroup::Negative));
    });
}

fn bench_karp(c: &mut Criterion) {
    let mut group = c.benchmark_group("karp_min_mean_cycle");
    for n in [64usize, 128] {
        let kernel = pendulum_kernel(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &kernel, |b, kernel| {
            b.iter(|| kernel.min_mean_cycle());
        });
    }
    group.finish();
}

fn bench_weak_kam_solve(c: &mut Criterion) {
    let kernel = pendulum_kernel(128);
    let cv = critical_value(&kernel, &pendulum(), CriticalValueOptions::default()).unwrap();
    c.bench_function("weak_kam_solve_128", |b| {
        b.iter(|| {
            weak_kam_solve(
                &kernel,
                cv.shift,
                Semigroup::Negative,
                SolveOptions::default(),
            )
            .unwrap()
        });
    });
}

fn bench_barrier(c: &mut Criterion) {
    let kernel = adapted_kernel(64);
    let cv = critical_value(
        &kernel,
        &wkam_bench::adapted(),
        CriticalValueOptions::default(),
    )
    .unwrap();
    c.bench_function("peierls_barrier_64", |b| {
        b.iter(|| peierls_barrier(&kernel, cv.shift, BarrierOptions::default()).unwrap());
    });
}

criterion_group!(
    benches,
    bench_kernel_assembly,
    bench_minplus_compose,
    bench_minplus_apply,
    bench_karp,
    bench_weak_kam_solve,
    bench_barrier
);
criterion_main!(benches);
