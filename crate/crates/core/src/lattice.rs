//! Matrix models on a truncated one-dimensional lattice.
//!
//! The kinetic term is the discrete Laplacian with unit hopping. The interaction
//! models are all four-site tridiagonal matrices: a Hermitian pencil
//! `T + ε 𝔳(λ)`, its de-Hermitized counterpart `T + η W(λ)`, and a unified
//! family that is Hermitian for `τ < 0` and non-Hermitian for `τ > 0`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{c64, ComplexMatrix};

/// Number of lattice sites of the interaction models.
pub const MODEL_DIM: usize = 4;

/// Truncated discrete Laplacian: zero diagonal, `-1` on both off-diagonals.
pub fn build_kinetic(dim: usize) -> Result<ComplexMatrix> {
    if dim < 2 {
        return Err(Error::InvalidDimension { dim, min: 2 });
    }
    ComplexMatrix::from_fn(dim, |i, j| {
        if i.abs_diff(j) == 1 {
            c64(-1.0, 0.0)
        } else {
            c64(0.0, 0.0)
        }
    })
}

/// Tridiagonal matrix with the given super- and subdiagonals.
fn tridiagonal(sup: [Complex64; MODEL_DIM - 1], sub: [Complex64; MODEL_DIM - 1]) -> ComplexMatrix {
    ComplexMatrix::from_fn(MODEL_DIM, |i, j| {
        if j == i + 1 {
            sup[i]
        } else if i == j + 1 {
            sub[j]
        } else {
            c64(0.0, 0.0)
        }
    })
    .expect("tridiagonal model entries are finite")
}

/// The Hermitian interaction `𝔳(λ)`: superdiagonal `(i, iλ, i)`, subdiagonal
/// its conjugate.
pub fn build_hermitian_interaction(lambda: f64) -> ComplexMatrix {
    let i = c64(0.0, 1.0);
    tridiagonal([i, i * lambda, i], [-i, -i * lambda, -i])
}

/// `𝔥 = T + ε 𝔳(λ)`, Hermitian for every real `ε` and `λ`.
pub fn eval_hermitian(epsilon: f64, lambda: f64) -> ComplexMatrix {
    // Entries are assembled directly rather than by matrix addition so that
    // the result is exactly Hermitian bit for bit.
    let outer = c64(-1.0, epsilon);
    let middle = c64(-1.0, epsilon * lambda);
    tridiagonal(
        [outer, middle, outer],
        [outer.conj(), middle.conj(), outer.conj()],
    )
}

/// `H = T + η W(λ)`: superdiagonal `(-1+η, -1+ηλ, -1+η)`, subdiagonal
/// `(-1-η, -1-ηλ, -1-η)`.
pub fn eval_nonhermitian(eta: f64, lambda: f64) -> ComplexMatrix {
    let outer = (-1.0 + eta, -1.0 - eta);
    let middle = (-1.0 + eta * lambda, -1.0 - eta * lambda);
    tridiagonal(
        [c64(outer.0, 0.0), c64(middle.0, 0.0), c64(outer.0, 0.0)],
        [c64(outer.1, 0.0), c64(middle.1, 0.0), c64(outer.1, 0.0)],
    )
}

/// `γ(τ) = √(τ|τ|)`: `iτ` for negative `τ`, `τ` otherwise.
pub fn gamma(tau: f64) -> Complex64 {
    if tau < 0.0 {
        c64(0.0, tau)
    } else {
        c64(tau, 0.0)
    }
}

/// Interface Hamiltonian: `γ(τ)` in the outer couplings, `λ γ(τ)` in the middle
/// one. Hermitian for `τ ≤ 0`, equal to [`eval_nonhermitian`] for `τ ≥ 0`.
pub fn eval_unified(tau: f64, lambda: f64) -> ComplexMatrix {
    let g = gamma(tau);
    let one = c64(1.0, 0.0);
    let outer = (-one + g, -one - g);
    let middle = (-one + g * lambda, -one - g * lambda);
    tridiagonal([outer.0, middle.0, outer.0], [outer.1, middle.1, outer.1])
}

/// Which parametric family a [`HamiltonianPencil`] evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PencilFamily {
    Hermitian,
    NonHermitian,
    Unified,
}

impl PencilFamily {
    pub fn as_str(self) -> &'static str {
        match self {
            PencilFamily::Hermitian => "hermitian",
            PencilFamily::NonHermitian => "nonhermitian",
            PencilFamily::Unified => "unified",
        }
    }

    /// Name of the swept coupling: `epsilon`, `eta` or `tau`.
    pub fn sweep_param_name(self) -> &'static str {
        match self {
            PencilFamily::Hermitian => "epsilon",
            PencilFamily::NonHermitian => "eta",
            PencilFamily::Unified => "tau",
        }
    }
}

impl fmt::Display for PencilFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PencilFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "hermitian" => Ok(PencilFamily::Hermitian),
            "nonhermitian" | "non-hermitian" => Ok(PencilFamily::NonHermitian),
            "unified" => Ok(PencilFamily::Unified),
            other => Err(Error::InvalidArgument(format!(
                "unknown pencil family `{other}`"
            ))),
        }
    }
}

/// A one-parameter family of four-site Hamiltonians at fixed interaction shape `λ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HamiltonianPencil {
    pub family: PencilFamily,
    pub lambda: f64,
}

impl HamiltonianPencil {
    pub fn new(family: PencilFamily, lambda: f64) -> Self {
        Self { family, lambda }
    }

    pub fn hermitian(lambda: f64) -> Self {
        Self::new(PencilFamily::Hermitian, lambda)
    }

    pub fn nonhermitian(lambda: f64) -> Self {
        Self::new(PencilFamily::NonHermitian, lambda)
    }

    pub fn unified(lambda: f64) -> Self {
        Self::new(PencilFamily::Unified, lambda)
    }

    pub fn dim(&self) -> usize {
        MODEL_DIM
    }

    pub fn sweep_param_name(&self) -> &'static str {
        self.family.sweep_param_name()
    }

    /// The matrix at coupling `param` (`ε`, `η` or `τ` depending on the family).
    ///
    /// Panics when an entry overflows; see [`Self::try_evaluate`].
    pub fn evaluate(&self, param: f64) -> ComplexMatrix {
        match self.family {
            PencilFamily::Hermitian => eval_hermitian(param, self.lambda),
            PencilFamily::NonHermitian => eval_nonhermitian(param, self.lambda),
            PencilFamily::Unified => eval_unified(param, self.lambda),
        }
    }

    /// As [`Self::evaluate`], failing with [`Error::NonFinite`] instead of panicking.
    pub fn try_evaluate(&self, param: f64) -> Result<ComplexMatrix> {
        if param.is_finite() && (param * self.lambda).is_finite() {
            Ok(self.evaluate(param))
        } else {
            Err(Error::NonFinite)
        }
    }
}
