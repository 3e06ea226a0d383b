//! Schrödinger evolution under stationary Hamiltonians and Θ-norm bookkeeping.
//!
//! `Ψ(t) = exp(−iHt)Ψ(0)` with `ħ = 1`. For quasi-Hermitian `H` the naive norm
//! `‖Ψ‖` drifts while `√(Ψ†ΘΨ)` is conserved; the mapped state `ψ = ΩΨ`
//! carries the same norm in the Hermitian representation.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::dyson::matrix_sqrt_pd;
use crate::error::{Error, Result};
use crate::matrix::{c64, svd, ComplexMatrix};
use crate::metric::{check_positive_definite, quasi_hermiticity_residual};
use crate::spectral::eigen::{eigenvectors_from_schur, schur};
use crate::spectral::DEFAULT_TOL;

/// Eigenvector condition numbers at or above this switch to the series propagator.
pub const EIGENVECTOR_CONDITION_CAP: f64 = 1e8;

const FD_STEP: f64 = 1e-4;
const FD_RESIDUAL_BOUND: f64 = 1e-6;
const MAX_TAYLOR_TERMS: usize = 60;

/// A finite, nonzero state.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidDimension { dim: 0, min: 1 });
        }
        if amplitudes
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite);
        }
        if amplitudes.iter().all(|z| z.norm() == 0.0) {
            return Err(Error::InvalidArgument(
                "state vector must have a nonzero amplitude".into(),
            ));
        }
        Ok(Self { amplitudes })
    }

    /// Unit vector `e_k` in dimension `dim`.
    pub fn basis(dim: usize, k: usize) -> Result<Self> {
        if k >= dim {
            return Err(Error::InvalidArgument(format!(
                "basis index {k} out of range for dimension {dim}"
            )));
        }
        let mut v = vec![c64(0.0, 0.0); dim];
        v[k] = c64(1.0, 0.0);
        Self::new(v)
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Euclidean norm `‖Ψ‖`.
    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn scale(&self, factor: Complex64) -> Result<Self> {
        Self::new(self.amplitudes.iter().map(|z| z * factor).collect())
    }

    /// Largest entrywise distance.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .fold(0.0, |acc, (a, b)| acc.max((a - b).norm())))
    }

    fn as_dvector(&self) -> DVector<Complex64> {
        DVector::from_column_slice(&self.amplitudes)
    }
}

/// How a [`Propagator`] evaluates `exp(−iHt)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PropagatorMethod {
    Eigendecomposition,
    ScalingAndSquaring,
}

#[derive(Debug, Clone)]
enum Kernel {
    Eigen {
        values: Vec<Complex64>,
        vectors: DMatrix<Complex64>,
        inverse: DMatrix<Complex64>,
    },
    Series,
}

/// Reusable `t ↦ exp(−iHt)` for a fixed `H`.
#[derive(Debug, Clone)]
pub struct Propagator {
    h: ComplexMatrix,
    kernel: Kernel,
    eigenvector_condition: f64,
}

impl Propagator {
    pub fn new(h: &ComplexMatrix) -> Result<Self> {
        let (t, z) = schur(h)?;
        let vectors = eigenvectors_from_schur(&t, &z);
        let (sv, _) = svd(vectors.clone(), false)?;
        let (smax, smin) = sv.iter().fold((0.0f64, f64::INFINITY), |(hi, lo), &s| {
            (hi.max(s), lo.min(s))
        });
        let cond = if smin > 0.0 {
            smax / smin
        } else {
            f64::INFINITY
        };
        let kernel = match vectors.clone().lu().try_inverse() {
            Some(inverse) if cond < EIGENVECTOR_CONDITION_CAP => Kernel::Eigen {
                values: (0..h.dim()).map(|i| t[(i, i)]).collect(),
                vectors,
                inverse,
            },
            _ => Kernel::Series,
        };
        Ok(Self {
            h: h.clone(),
            kernel,
            eigenvector_condition: cond,
        })
    }

    pub fn method(&self) -> PropagatorMethod {
        match self.kernel {
            Kernel::Eigen { .. } => PropagatorMethod::Eigendecomposition,
            Kernel::Series => PropagatorMethod::ScalingAndSquaring,
        }
    }

    /// 2-norm condition number of the eigenvector matrix.
    pub fn eigenvector_condition(&self) -> f64 {
        self.eigenvector_condition
    }

    pub fn hamiltonian(&self) -> &ComplexMatrix {
        &self.h
    }

    /// `exp(−iHt)` as a matrix.
    pub fn matrix(&self, t: f64) -> Result<ComplexMatrix> {
        if !t.is_finite() {
            return Err(Error::NonFinite);
        }
        if t == 0.0 {
            return Ok(ComplexMatrix::identity(self.h.dim()));
        }
        let m = match &self.kernel {
            Kernel::Eigen {
                values,
                vectors,
                inverse,
            } => {
                let mut scaled = vectors.clone();
                for (k, e) in values.iter().enumerate() {
                    let phase = (c64(0.0, -t) * e).exp();
                    for z in scaled.column_mut(k).iter_mut() {
                        *z *= phase;
                    }
                }
                scaled * inverse
            }
            Kernel::Series => series_exp(&self.h.scale(c64(0.0, -t)))?,
        };
        ComplexMatrix::new(m).map_err(|_| Error::NumericFailure {
            what: "propagator",
            residual: f64::INFINITY,
        })
    }

    /// `exp(−iHt)·ψ₀` without the finite-difference check.
    pub fn apply(&self, psi0: &StateVector, t: f64) -> Result<StateVector> {
        if psi0.dim() != self.h.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.h.dim(),
                found: psi0.dim(),
            });
        }
        let v = self.matrix(t)?.as_matrix() * psi0.as_dvector();
        StateVector::new(v.iter().copied().collect())
    }

    /// `exp(−iHt)·ψ₀`, verified against `dΨ/dt = −iHΨ` with a central difference.
    pub fn apply_checked(&self, psi0: &StateVector, t: f64) -> Result<StateVector> {
        let psi = self.apply(psi0, t)?;
        let step = FD_STEP / self.h.max_abs().max(1.0);
        let fwd = self.apply(psi0, t + step)?.as_dvector();
        let bwd = self.apply(psi0, t - step)?.as_dvector();
        let v = psi.as_dvector();
        let derivative = (fwd - bwd) / c64(2.0 * step, 0.0);
        let generator = self.h.as_matrix() * &v * c64(0.0, 1.0);
        let residual = (derivative + generator).norm();
        let scale = v.norm() * self.h.as_matrix().norm().max(1.0);
        if residual > FD_RESIDUAL_BOUND * scale.max(f64::MIN_POSITIVE) {
            return Err(Error::NumericFailure {
                what: "propagation residual check",
                residual: residual / scale,
            });
        }
        Ok(psi)
    }
}

/// `exp(A)` by scaling and squaring with a Taylor series.
fn series_exp(a: &ComplexMatrix) -> Result<DMatrix<Complex64>> {
    let n = a.dim();
    let m = a.as_matrix();
    let one_norm = (0..n)
        .map(|j| m.column(j).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let squarings = if one_norm > 0.5 {
        (one_norm / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let scaled = m / c64(2f64.powi(squarings), 0.0);

    let mut sum = DMatrix::<Complex64>::identity(n, n);
    let mut term = DMatrix::<Complex64>::identity(n, n);
    let mut converged = false;
    for k in 1..=MAX_TAYLOR_TERMS {
        term = &term * &scaled / c64(k as f64, 0.0);
        sum += &term;
        if term.norm() <= f64::EPSILON * sum.norm() {
            converged = true;
            break;
        }
    }
    if !converged || sum.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NumericFailure {
            what: "matrix exponential series",
            residual: term.norm(),
        });
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    Ok(sum)
}

/// `exp(−iHt)·ψ₀`.
pub fn propagate(h: &ComplexMatrix, psi0: &StateVector, t: f64) -> Result<StateVector> {
    Propagator::new(h)?.apply_checked(psi0, t)
}

fn quadratic_form(psi: &StateVector, theta: &ComplexMatrix) -> f64 {
    let v = psi.as_dvector();
    (v.adjoint() * theta.as_matrix() * &v)[(0, 0)].re
}

/// `√(ψ†Θψ)` for a Hermitian positive definite `Θ`.
pub fn theta_norm(psi: &StateVector, theta: &ComplexMatrix) -> Result<f64> {
    if psi.dim() != theta.dim() {
        return Err(Error::DimensionMismatch {
            expected: theta.dim(),
            found: psi.dim(),
        });
    }
    let positivity = check_positive_definite(theta, DEFAULT_TOL)?;
    if !positivity.is_pd {
        return Err(Error::InvalidMetric(format!(
            "indefinite metric (smallest eigenvalue {:e})",
            positivity.eigenvalues[0]
        )));
    }
    Ok(quadratic_form(psi, theta).sqrt())
}

/// Norm histories of one trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionTrace {
    pub times: Vec<f64>,
    /// `√(Ψ†ΘΨ)`.
    pub theta_norms: Vec<f64>,
    /// `‖Ψ‖`.
    pub naive_norms: Vec<f64>,
    /// `‖ΩΨ‖` with `Ω = Θ^{1/2}`.
    pub mapped_norms: Vec<f64>,
}

impl EvolutionTrace {
    /// `max_t |n(t) − n(0)| / n(0)` for the Θ-norm.
    pub fn theta_drift(&self) -> f64 {
        relative_drift(&self.theta_norms)
    }

    pub fn naive_drift(&self) -> f64 {
        relative_drift(&self.naive_norms)
    }
}

fn relative_drift(series: &[f64]) -> f64 {
    match series.first() {
        Some(&n0) => series.iter().fold(0.0f64, |acc, n| acc.max((n - n0).abs())) / n0,
        None => 0.0,
    }
}

/// Propagate `ψ₀` over `times` and record the three norms at each instant.
///
/// `times` must be non-negative and strictly increasing.
pub fn unitarity_report(
    h: &ComplexMatrix,
    theta: &ComplexMatrix,
    psi0: &StateVector,
    times: &[f64],
) -> Result<EvolutionTrace> {
    if times.is_empty() {
        return Err(Error::InvalidArgument("empty time grid".into()));
    }
    if times.iter().any(|t| !t.is_finite()) {
        return Err(Error::NonFinite);
    }
    if times[0] < 0.0 || times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument(
            "times must be non-negative and strictly increasing".into(),
        ));
    }
    let residual = quasi_hermiticity_residual(h, theta)?;
    let bound = 1e-8 * theta.max_abs().max(1.0) * h.max_abs().max(1.0);
    if residual > bound {
        return Err(Error::ConstraintViolation { residual });
    }
    let omega = matrix_sqrt_pd(theta, DEFAULT_TOL)?;
    let propagator = Propagator::new(h)?;

    let rows = times
        .par_iter()
        .map(|&t| {
            let psi = propagator
                .apply_checked(psi0, t)
                .map_err(|e| Error::at(t, e))?;
            let mapped = omega.mul_vec(psi.amplitudes())?;
            let mapped_norm = mapped.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            Ok((quadratic_form(&psi, theta).sqrt(), psi.norm(), mapped_norm))
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(EvolutionTrace {
        times: times.to_vec(),
        theta_norms: rows.iter().map(|r| r.0).collect(),
        naive_norms: rows.iter().map(|r| r.1).collect(),
        mapped_norms: rows.iter().map(|r| r.2).collect(),
    })
}
