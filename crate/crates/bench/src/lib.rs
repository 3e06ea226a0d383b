//! Shared workloads for the benchmarks.

use quasiherm_core::{eval_nonhermitian, ComplexMatrix};

/// Evenly spaced grid with `count` points on `[start, stop]`.
pub fn linspace(start: f64, stop: f64, count: usize) -> Vec<f64> {
    (0..count)
        .map(|k| start + (stop - start) * k as f64 / (count - 1) as f64)
        .collect()
}

/// A non-Hermitian model point inside the positive-metric domain.
pub fn reference_hamiltonian() -> ComplexMatrix {
    eval_nonhermitian(0.5, 1.2)
}
