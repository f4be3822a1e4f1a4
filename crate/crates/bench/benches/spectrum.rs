use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use sympent_core::{
    chain_model, entanglement_entropy, ground_state_covariance, symplectic_spectrum, williamson,
    Boundary, CovarianceMatrix, EntropyOptions, ModePartition,
};

const SIZES: [usize; 4] = [4, 16, 32, 64];

fn chain_state(n: usize) -> CovarianceMatrix {
    let model = chain_model(n, 1.0, 0.5, 1.0, Boundary::Periodic).unwrap();
    ground_state_covariance(&model).unwrap()
}

fn spectrum(c: &mut Criterion) {
    let mut group = c.benchmark_group("symplectic_spectrum");
    for n in SIZES {
        let gamma = chain_state(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &gamma, |b, g| {
            b.iter(|| symplectic_spectrum(black_box(g)).unwrap())
        });
    }
    group.finish();
}

fn williamson_form(c: &mut Criterion) {
    let mut group = c.benchmark_group("williamson");
    for n in SIZES {
        // Half a chain is mixed, so the normal form is non-trivial.
        let gamma = chain_state(2 * n)
            .reduce(&(0..n).collect::<Vec<_>>())
            .unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &gamma, |b, g| {
            b.iter(|| williamson(black_box(g)).unwrap())
        });
    }
    group.finish();
}

fn half_chain_entropy(c: &mut Criterion) {
    let mut group = c.benchmark_group("entanglement_entropy");
    let opts = EntropyOptions::default();
    for n in SIZES {
        let gamma = chain_state(n);
        let partition = ModePartition::with_complement(n, (0..n / 2).collect()).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &gamma, |b, g| {
            b.iter(|| entanglement_entropy(black_box(g), &partition, &opts).unwrap())
        });
    }
    group.finish();
}

fn ground_state(c: &mut Criterion) {
    let mut group = c.benchmark_group("ground_state_covariance");
    for n in SIZES {
        let model = chain_model(n, 1.0, 0.5, 1.0, Boundary::Open).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &model, |b, m| {
            b.iter(|| ground_state_covariance(black_box(m)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(
    benches,
    spectrum,
    williamson_form,
    half_chain_entropy,
    ground_state
);
criterion_main!(benches);
