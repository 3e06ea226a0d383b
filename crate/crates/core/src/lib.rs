//! Quasi-Hermitian lattice models.
//!
//! Small dense complex matrix models on a truncated discrete lattice, together
//! with the machinery needed to study them: a general eigensolver, exceptional
//! point location, reconstruction of the Hilbert-space metric `Θ` from the
//! constraint `H†Θ = ΘH`, the Dyson map `Ω = Θ^{1/2}` with its Hermitized
//! partner `𝔥 = ΩHΩ⁻¹`, and Θ-norm preserving time evolution.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dyson;
mod error;
pub mod evolution;
pub mod hermitian;
pub mod lattice;
mod matrix;
pub mod metric;
pub mod spectral;

pub use dyson::{hermitize, hermitized_pencil, matrix_sqrt_pd, Continuation, DysonDecomposition};
pub use error::{Error, Result};
pub use evolution::{
    propagate, theta_norm, unitarity_report, EvolutionTrace, Propagator, PropagatorMethod,
    StateVector,
};
pub use lattice::{
    build_hermitian_interaction, build_kinetic, eval_hermitian, eval_nonhermitian, eval_unified,
    gamma, HamiltonianPencil, PencilFamily, MODEL_DIM,
};
pub use matrix::{c64, ComplexMatrix};
pub use metric::{
    check_positive_definite, diagonal_metric, interface_match, metric_from_params,
    quasi_hermiticity_residual, solve_metric_kernel, MetricBasis, MetricParams, Positivity,
};
pub use spectral::{
    classify_reality, closed_form_hermitian, closed_form_nonhermitian, closed_form_unified,
    eigenvalues, linspace, locate_ep, scan_eps, sweep_spectrum, EpKind, ExceptionalPoint, Reality,
    Signature, Spectrum, SweepPoint, DEFAULT_KIND_PROBE, DEFAULT_TOL,
};
