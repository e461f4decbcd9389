use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use spinboson::hamiltonians::REFERENCE_N_FOCK;
use spinboson::redfield::{dsr_secular_dynamics, FourLevelModel};
use spinboson::{build_exact, eigh, sigma_z_series, InitialState, RateOptions, Scheme};
use spinboson_bench::reference_params;

fn eigensolver(c: &mut Criterion) {
    let h = build_exact(&reference_params(), REFERENCE_N_FOCK).unwrap();
    c.bench_function("eigh dim 18", |b| b.iter(|| eigh(black_box(&h)).unwrap()));
}

fn rates(c: &mut Criterion) {
    let params = reference_params();
    let opts = RateOptions::default();
    c.bench_function("secular rates with Lamb shift", |b| {
        b.iter(|| dsr_secular_dynamics(black_box(&params), &opts, InitialState::default()).unwrap())
    });
}

fn dynamics(c: &mut Criterion) {
    let params = reference_params();
    let opts = RateOptions {
        lamb_shift: false,
        ..RateOptions::default()
    };
    let secular = dsr_secular_dynamics(&params, &opts, InitialState::default()).unwrap();
    let times: Vec<f64> = (0..4000).map(|k| k as f64 * 0.05).collect();
    c.bench_function("secular trace 4000 samples", |b| {
        b.iter(|| sigma_z_series(black_box(&secular), &times))
    });
    let full = FourLevelModel::for_scheme(&params, Scheme::Dsr, &opts).unwrap();
    let short: Vec<f64> = (0..200).map(|k| k as f64 * 0.1).collect();
    c.bench_function("full Redfield 4 levels to t=20", |b| {
        b.iter(|| full.sigma_z_series(black_box(&short), 0.01).unwrap())
    });
}

criterion_group!(benches, eigensolver, rates, dynamics);
criterion_main!(benches);
