use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use cwmarket::{
    chi_square_survival, enumerate_shells, hamiltonian_kernel, independent_pmf, sample_next,
    simulate_trajectory, stationary_distribution, ModelParams, SamplerSpec, SpinConfiguration,
};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

fn shells(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumerate_shells");
    for n in [10usize, 100, 1000] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| enumerate_shells(black_box(n)).unwrap());
        });
    }
    group.finish();
}

fn pmf(c: &mut Criterion) {
    let mut group = c.benchmark_group("independent_pmf");
    for n in [10usize, 100, 1000] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| independent_pmf(black_box(n)).unwrap());
        });
    }
    group.finish();
}

fn kernel_row(c: &mut Criterion) {
    let mut group = c.benchmark_group("hamiltonian_kernel_row");
    for n in [10usize, 100, 1000] {
        let shell = enumerate_shells(n).unwrap().pop().unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| hamiltonian_kernel(black_box(n), 1.0, &shell).unwrap());
        });
    }
    group.finish();
}

fn stationary(c: &mut Criterion) {
    let mut group = c.benchmark_group("stationary_distribution");
    for n in [10usize, 100] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| stationary_distribution(black_box(n), 1.0).unwrap());
        });
    }
    group.finish();
}

fn sampling(c: &mut Criterion) {
    let params = ModelParams::new(10, 1.0).unwrap();
    let prev = SpinConfiguration::all_plus(10).unwrap();
    let mut rng = ChaCha12Rng::seed_from_u64(1);
    c.bench_function("sample_next_n10", |b| {
        b.iter(|| sample_next(black_box(&prev), &params, &mut rng).unwrap());
    });

    c.bench_function("simulate_trajectory_n10_1000_steps", |b| {
        b.iter(|| {
            let spec = SamplerSpec::new(
                ModelParams::new(10, 1.0).unwrap(),
                1000,
                7,
                SpinConfiguration::all_plus(10).unwrap(),
            )
            .unwrap();
            simulate_trajectory(black_box(&spec)).unwrap()
        });
    });
}

fn survival(c: &mut Criterion) {
    c.bench_function("chi_square_survival", |b| {
        b.iter(|| chi_square_survival(black_box(5.29), black_box(3)));
    });
}

criterion_group!(benches, shells, pmf, kernel_row, stationary, sampling, survival);
criterion_main!(benches);
