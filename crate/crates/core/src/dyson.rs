//! Dyson maps and Hermitized partner Hamiltonians.
//!
//! Given a positive definite metric `Θ` for `H`, the canonical Dyson map is
//! the Hermitian positive square root `Ω = Θ^{1/2}`, and `𝔥 = ΩHΩ⁻¹` is the
//! textbook Hermitian Hamiltonian isospectral to `H`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hermitian::hermitian_eigen;
use crate::lattice::{HamiltonianPencil, PencilFamily};
use crate::matrix::ComplexMatrix;
use crate::metric::{check_positive_definite, diagonal_metric, quasi_hermiticity_residual};
use crate::spectral::{eigenvalues, DEFAULT_TOL};

/// Hermitian positive square root of a Hermitian positive definite matrix.
pub fn matrix_sqrt_pd(theta: &ComplexMatrix, tol: f64) -> Result<ComplexMatrix> {
    Ok(sqrt_and_inverse(theta, tol)?.0)
}

fn sqrt_and_inverse(theta: &ComplexMatrix, tol: f64) -> Result<(ComplexMatrix, ComplexMatrix)> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let defect = theta.hermiticity_defect();
    if defect > tol * theta.max_abs().max(1.0) {
        return Err(Error::InvalidMetric(format!(
            "not Hermitian (defect {defect:e})"
        )));
    }
    if is_exact_identity(theta) {
        let id = ComplexMatrix::identity(theta.dim());
        return Ok((id.clone(), id));
    }
    let eig = hermitian_eigen(theta)?;
    let smallest = eig.values[0];
    if smallest <= tol {
        return Err(Error::NotPositiveDefinite {
            eigenvalue: smallest,
        });
    }
    Ok((eig.map(f64::sqrt), eig.map(|w| 1.0 / w.sqrt())))
}

fn is_exact_identity(m: &ComplexMatrix) -> bool {
    let n = m.dim();
    (0..n).all(|i| {
        (0..n).all(|j| m.get(i, j).im == 0.0 && m.get(i, j).re == if i == j { 1.0 } else { 0.0 })
    })
}

/// `H = Ω⁻¹𝔥Ω` with `Θ = Ω†Ω` and diagnostics.
#[derive(Debug, Clone)]
pub struct DysonDecomposition {
    pub omega: ComplexMatrix,
    pub omega_inverse: ComplexMatrix,
    pub theta: ComplexMatrix,
    pub hermitized: ComplexMatrix,
    /// `‖𝔥 − 𝔥†‖_max`.
    pub hermiticity_defect: f64,
    /// Largest distance between the sorted spectra of `H` and `𝔥`.
    pub isospectral_defect: f64,
    /// `λ_max(Θ) / λ_min(Θ)`.
    pub theta_condition: f64,
}

/// Hermitize `h` with the metric `theta`.
///
/// Fails with a constraint violation when `‖H†Θ − ΘH‖_max > tol`, and when
/// `Θ` is not positive definite.
pub fn hermitize(h: &ComplexMatrix, theta: &ComplexMatrix, tol: f64) -> Result<DysonDecomposition> {
    hermitize_with(h, theta, tol, tol)
}

/// As [`hermitize`], with separate tolerances for the constraint residual and
/// for the smallest admissible eigenvalue of `Θ`.
fn hermitize_with(
    h: &ComplexMatrix,
    theta: &ComplexMatrix,
    tol: f64,
    pd_tol: f64,
) -> Result<DysonDecomposition> {
    let residual = quasi_hermiticity_residual(h, theta)?;
    if !(residual <= tol) {
        return Err(Error::ConstraintViolation { residual });
    }
    let positivity = check_positive_definite(theta, pd_tol)?;
    if !positivity.is_pd {
        return Err(Error::NotPositiveDefinite {
            eigenvalue: positivity.eigenvalues[0],
        });
    }
    let (omega, omega_inverse) = sqrt_and_inverse(theta, pd_tol)?;
    let hermitized = if is_exact_identity(theta) {
        h.clone()
    } else {
        &(&omega * h) * &omega_inverse
    };
    let hermiticity_defect = hermitized.hermiticity_defect();
    let before = eigenvalues(h, DEFAULT_TOL)?;
    let after = eigenvalues(&hermitized, DEFAULT_TOL)?;
    let isospectral_defect = before.max_distance(&after)?;
    Ok(DysonDecomposition {
        omega,
        omega_inverse,
        theta: theta.clone(),
        hermitized,
        hermiticity_defect,
        isospectral_defect,
        theta_condition: positivity.condition_number(),
    })
}

/// How the unified pencil's Hermitian partner is continued below the interface `τ = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Continuation {
    /// `𝔥(τ) = H(τ)`; the matrix is already Hermitian there.
    #[default]
    Instantaneous,
    /// `𝔥(τ) = H(0)` for every `τ < 0`.
    Frozen,
}

/// Per-point Hermitization of a pencil with the diagonal metric.
///
/// Hermitian family members and the unified pencil at `τ ≤ 0` use `Θ = I`.
/// Failures (metric singularity, indefinite metric) are reported per point.
pub fn hermitized_pencil(
    pencil: &HamiltonianPencil,
    grid: &[f64],
    continuation: Continuation,
) -> Vec<(f64, Result<DysonDecomposition>)> {
    grid.par_iter()
        .map(|&p| {
            (
                p,
                hermitize_point(pencil, p, continuation).map_err(|e| Error::at(p, e)),
            )
        })
        .collect()
}

fn hermitize_point(
    pencil: &HamiltonianPencil,
    p: f64,
    continuation: Continuation,
) -> Result<DysonDecomposition> {
    if !p.is_finite() {
        return Err(Error::NonFinite);
    }
    let h = pencil.try_evaluate(p)?;
    let identity_branch = match pencil.family {
        PencilFamily::Hermitian => true,
        PencilFamily::NonHermitian => p == 0.0,
        PencilFamily::Unified => p <= 0.0,
    };
    if identity_branch {
        let h = match (pencil.family, continuation) {
            (PencilFamily::Unified, Continuation::Frozen) if p < 0.0 => pencil.evaluate(0.0),
            _ => h,
        };
        return hermitize(&h, &ComplexMatrix::identity(h.dim()), DEFAULT_TOL);
    }
    let theta = diagonal_metric(p, pencil.lambda)?;
    // the constraint residual grows with the metric entries
    let tol = DEFAULT_TOL * theta.max_abs().max(1.0);
    hermitize_with(&h, &theta, tol, DEFAULT_TOL)
}
