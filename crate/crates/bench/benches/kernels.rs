use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use quasiherm_bench::reference_hamiltonian;
use quasiherm_core::{
    diagonal_metric, eigenvalues, hermitize, linspace, locate_ep, solve_metric_kernel,
    sweep_spectrum, unitarity_report, HamiltonianPencil, StateVector, DEFAULT_TOL,
};

fn spectral(c: &mut Criterion) {
    let h = reference_hamiltonian();
    c.bench_function("eigenvalues_4x4", |b| {
        b.iter(|| eigenvalues(black_box(&h), DEFAULT_TOL).unwrap())
    });

    let pencil = HamiltonianPencil::nonhermitian(1.2);
    let grid = linspace(-2.0, 2.0, 81);
    c.bench_function("sweep_81", |b| {
        b.iter(|| sweep_spectrum(&pencil, black_box(&grid), DEFAULT_TOL).unwrap())
    });
    c.bench_function("locate_ep", |b| {
        b.iter(|| locate_ep(&pencil, black_box((0.5, 1.0)), 1e-4, 1e-10).unwrap())
    });
}

fn metric(c: &mut Criterion) {
    let h = reference_hamiltonian();
    c.bench_function("metric_kernel", |b| {
        b.iter(|| solve_metric_kernel(black_box(&h), 1e-9).unwrap())
    });
    let theta = diagonal_metric(0.5, 1.2).unwrap();
    c.bench_function("hermitize", |b| {
        b.iter(|| hermitize(black_box(&h), &theta, 1e-10).unwrap())
    });
}

fn evolution(c: &mut Criterion) {
    let h = reference_hamiltonian();
    let theta = diagonal_metric(0.5, 1.2).unwrap();
    let psi0 = StateVector::basis(4, 0).unwrap();
    let times = linspace(0.0, 10.0, 101);
    c.bench_function("unitarity_report_101", |b| {
        b.iter(|| unitarity_report(black_box(&h), &theta, &psi0, &times).unwrap())
    });
}

criterion_group!(benches, spectral, metric, evolution);
criterion_main!(benches);
