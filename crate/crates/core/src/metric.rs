//! Hilbert-space metrics for the non-Hermitian pencil.
//!
//! A metric `Θ` makes `H` self-adjoint in the inner product `⟨φ, Θψ⟩`, i.e.
//! `H†Θ = ΘH`. This module reconstructs the full solution space of that linear
//! constraint numerically and provides the explicit four-parameter family of
//! solutions for `H = T + ηW(λ)`, its diagonal member, and a positivity check.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hermitian::hermitian_eigen;
use crate::lattice::MODEL_DIM;
use crate::matrix::{c64, svd, ComplexMatrix};

/// Minimum singular-value ratio across the null-space cut.
const RANK_GAP_RATIO: f64 = 1e3;

/// Denominators closer than this to zero are treated as a metric singularity.
const SINGULAR_DENOMINATOR: f64 = 1e-13;

/// Free parameters `(c, d, f, g)` of the general metric family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricParams {
    pub c: f64,
    pub d: f64,
    pub f: f64,
    pub g: f64,
}

impl MetricParams {
    pub const fn new(c: f64, d: f64, f: f64, g: f64) -> Self {
        Self { c, d, f, g }
    }

    /// `c = d = g = 0`, `f = 1`: the member that reduces to the identity at `η = 0`.
    pub const fn interface() -> Self {
        Self::new(0.0, 0.0, 1.0, 0.0)
    }

    /// The unit vectors `(1,0,0,0)`, … spanning the family.
    pub fn unit_choices() -> [Self; 4] {
        [
            Self::new(1.0, 0.0, 0.0, 0.0),
            Self::new(0.0, 1.0, 0.0, 0.0),
            Self::new(0.0, 0.0, 1.0, 0.0),
            Self::new(0.0, 0.0, 0.0, 1.0),
        ]
    }
}

impl Default for MetricParams {
    fn default() -> Self {
        Self::interface()
    }
}

/// Orthonormal basis of the Hermitian solutions of `H†Θ = ΘH`.
#[derive(Debug, Clone)]
pub struct MetricBasis {
    pub basis: Vec<ComplexMatrix>,
    /// `‖H†B − BH‖_max` for each basis element.
    pub residuals: Vec<f64>,
    /// Singular values of the constraint map, descending.
    pub singular_values: Vec<f64>,
}

impl MetricBasis {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// Frobenius distance from `m` to the span of the basis.
    pub fn projection_residual(&self, m: &ComplexMatrix) -> f64 {
        let mut rest = m.clone();
        for b in &self.basis {
            let coef = b.trace_inner(&rest);
            rest = &rest - &b.scale(c64(coef, 0.0));
        }
        rest.as_matrix().norm()
    }
}

/// `‖H†Θ − ΘH‖_max`.
pub fn quasi_hermiticity_residual(h: &ComplexMatrix, theta: &ComplexMatrix) -> Result<f64> {
    h.check_same_dim(theta)?;
    let lhs = &h.adjoint() * theta;
    let rhs = theta * h;
    lhs.max_abs_diff(&rhs)
}

/// Null space of `Θ ↦ H†Θ − ΘH`, restricted to Hermitian matrices.
///
/// The map is assembled as a `dim² × dim²` matrix and decomposed by SVD;
/// singular values below `tol · σ_max` span the kernel. Hermitian and
/// anti-Hermitian parts of each kernel vector are both solutions (the kernel
/// is closed under `†`), so both are collected and re-orthonormalised under
/// the trace inner product.
pub fn solve_metric_kernel(h: &ComplexMatrix, tol: f64) -> Result<MetricBasis> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let n = h.dim();
    let n2 = n * n;
    let hd = h.adjoint();
    let mut map = DMatrix::<Complex64>::zeros(n2, n2);
    for col in 0..n2 {
        let unit = ComplexMatrix::from_inner_unchecked(DMatrix::from_fn(n, n, |i, j| {
            if i + j * n == col {
                c64(1.0, 0.0)
            } else {
                c64(0.0, 0.0)
            }
        }));
        let image = &(&hd * &unit) - &(&unit * h);
        for (row, v) in image.as_matrix().iter().enumerate() {
            map[(row, col)] = *v;
        }
    }

    let (raw_sigma, v_t) = svd(map, true)?;
    let v_t = v_t.expect("right singular vectors requested");
    let mut order: Vec<usize> = (0..n2).collect();
    order.sort_by(|&a, &b| raw_sigma[b].total_cmp(&raw_sigma[a]));
    let sigma: Vec<f64> = order.iter().map(|&k| raw_sigma[k]).collect();

    let cut = tol * sigma[0].max(f64::MIN_POSITIVE);
    let rank = sigma.iter().filter(|&&s| s >= cut).count();
    if rank > 0 && rank < n2 {
        let above = sigma[rank - 1];
        let below = sigma[rank];
        if below > 0.0 && above / below < RANK_GAP_RATIO {
            return Err(Error::RankAmbiguity {
                singular_values: sigma,
            });
        }
    }

    let mut candidates = Vec::with_capacity(2 * (n2 - rank));
    for &k in &order[rank..] {
        // rows of V† are conjugated right singular vectors
        let b = ComplexMatrix::from_inner_unchecked(DMatrix::from_fn(n, n, |i, j| {
            v_t[(k, i + j * n)].conj()
        }));
        let bd = b.adjoint();
        candidates.push((&b + &bd).scale(c64(0.5, 0.0)));
        candidates.push((&b - &bd).scale(c64(0.0, 0.5)));
    }

    let mut basis: Vec<ComplexMatrix> = Vec::new();
    for cand in candidates {
        let mut rest = cand;
        // two Gram-Schmidt passes
        for _ in 0..2 {
            for b in &basis {
                let coef = b.trace_inner(&rest);
                rest = &rest - &b.scale(c64(coef, 0.0));
            }
        }
        let norm = rest.as_matrix().norm();
        if norm > 1e-6 {
            basis.push(rest.scale(c64(1.0 / norm, 0.0)));
        }
    }
    if basis.len() != n2 - rank {
        return Err(Error::RankAmbiguity {
            singular_values: sigma,
        });
    }

    let residuals = basis
        .iter()
        .map(|b| quasi_hermiticity_residual(h, b))
        .collect::<Result<Vec<_>>>()?;
    Ok(MetricBasis {
        basis,
        residuals,
        singular_values: sigma,
    })
}

fn check_denominators(eta: f64, lambda: f64) -> Result<()> {
    let candidates = [
        (1.0 - eta, 1.0),
        (1.0 + eta, -1.0),
        (1.0 - eta * lambda, 1.0),
        (1.0 + eta * lambda, -1.0),
    ];
    for (k, (den, sign)) in candidates.iter().enumerate() {
        if den.abs() <= SINGULAR_DENOMINATOR {
            let location = if k < 2 { *sign } else { sign / lambda };
            return Err(Error::MetricSingularity { eta, location });
        }
    }
    Ok(())
}

/// The general real symmetric metric of `T + ηW(λ)` with parameters `(c, d, f, g)`.
///
/// Corners are `A(f,c)/((1∓η)²(1∓ηλ))` with the shared numerator
/// `A(f,c) = f − fη² − c + cη²λ²`.
pub fn metric_from_params(eta: f64, lambda: f64, p: MetricParams) -> Result<ComplexMatrix> {
    check_denominators(eta, lambda)?;
    let MetricParams { c, d, f, g } = p;
    let (em, ep) = (1.0 - eta, 1.0 + eta);
    let (lm, lp) = (1.0 - eta * lambda, 1.0 + eta * lambda);
    let numerator = f - f * eta * eta - c + c * eta * eta * lambda * lambda;
    let a11 = numerator / (em * em * lm);
    let a44 = numerator / (ep * ep * lp);
    let a12 = (g - d) * ep / lm;
    let a34 = (g - d) * em / lp;
    let rows = [
        [a11, a12, c / em, d],
        [a12, f / lm, g, c / ep],
        [c / em, g, f / lp, a34],
        [d, c / ep, a34, a44],
    ];
    ComplexMatrix::from_fn(MODEL_DIM, |i, j| c64(rows[i][j], 0.0))
}

/// Diagonal metric `diag((1+η)/((1−η)(1−ηλ)), 1/(1−ηλ), 1/(1+ηλ), (1−η)/((1+η)(1+ηλ)))`.
pub fn diagonal_metric(eta: f64, lambda: f64) -> Result<ComplexMatrix> {
    check_denominators(eta, lambda)?;
    let (em, ep) = (1.0 - eta, 1.0 + eta);
    let (lm, lp) = (1.0 - eta * lambda, 1.0 + eta * lambda);
    ComplexMatrix::from_diagonal(&[ep / (em * lm), 1.0 / lm, 1.0 / lp, em / (ep * lp)])
}

/// Result of [`check_positive_definite`].
#[derive(Debug, Clone, PartialEq)]
pub struct Positivity {
    pub is_pd: bool,
    /// Ascending eigenvalues.
    pub eigenvalues: Vec<f64>,
}

impl Positivity {
    /// `λ_max / λ_min`, infinite when not positive definite.
    pub fn condition_number(&self) -> f64 {
        match (self.eigenvalues.first(), self.eigenvalues.last()) {
            (Some(&lo), Some(&hi)) if self.is_pd => hi / lo,
            _ => f64::INFINITY,
        }
    }
}

/// Eigenvalues of a Hermitian `Θ`; positive definite iff the smallest exceeds `tol`.
pub fn check_positive_definite(theta: &ComplexMatrix, tol: f64) -> Result<Positivity> {
    let defect = theta.hermiticity_defect();
    if defect > tol * theta.max_abs().max(1.0) {
        return Err(Error::InvalidMetric(format!(
            "not Hermitian (defect {defect:e})"
        )));
    }
    let eig = hermitian_eigen(theta)?;
    let is_pd = eig.values.first().is_some_and(|&w| w > tol);
    Ok(Positivity {
        is_pd,
        eigenvalues: eig.values,
    })
}

/// Does the metric family `Θ(σ)` join the identity as `σ → σ₋`?
///
/// `probe` must approach `sigma_minus` from above. The distance `‖Θ(σ) − I‖_max`
/// has to decrease strictly along the probe, and the limit obtained by
/// Richardson (quadratic) extrapolation of `Θ` entrywise has to lie within
/// `tol` of the identity. The extrapolation nodes continue the geometric
/// refinement of the last two probe offsets, starting at the last probe point.
pub fn interface_match<F>(
    pencil_metric: F,
    sigma_minus: f64,
    probe: &[f64],
    tol: f64,
) -> Result<bool>
where
    F: Fn(f64) -> Result<ComplexMatrix>,
{
    if probe.len() < 2 {
        return Err(Error::InvalidArgument(
            "interface probe needs at least two points".into(),
        ));
    }
    let offsets: Vec<f64> = probe.iter().map(|s| s - sigma_minus).collect();
    if offsets.iter().any(|h| !(*h > 0.0)) || offsets.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidArgument(
            "probe must decrease strictly toward sigma_minus from above".into(),
        ));
    }

    let mut distances = Vec::with_capacity(probe.len());
    for &s in probe {
        let theta = pencil_metric(s)?;
        distances.push(theta.max_abs_diff(&ComplexMatrix::identity(theta.dim()))?);
    }
    if distances.windows(2).any(|w| w[1] >= w[0]) {
        return Ok(false);
    }

    let last = offsets[offsets.len() - 1];
    let ratio = offsets[offsets.len() - 2] / last;
    let nodes = [last, last / ratio, last / (ratio * ratio)];
    let mats = nodes
        .iter()
        .map(|h| pencil_metric(sigma_minus + h))
        .collect::<Result<Vec<_>>>()?;
    let limit = richardson_at_zero(&nodes, &mats);
    let dist = limit.max_abs_diff(&ComplexMatrix::identity(limit.dim()))?;
    Ok(dist <= tol)
}

/// Value at `h = 0` of the quadratic through `(h_k, M_k)`, entrywise.
fn richardson_at_zero(h: &[f64; 3], m: &[ComplexMatrix]) -> ComplexMatrix {
    let w0 = h[1] * h[2] / ((h[0] - h[1]) * (h[0] - h[2]));
    let w1 = h[0] * h[2] / ((h[1] - h[0]) * (h[1] - h[2]));
    let w2 = h[0] * h[1] / ((h[2] - h[0]) * (h[2] - h[1]));
    &(&m[0].scale(c64(w0, 0.0)) + &m[1].scale(c64(w1, 0.0))) + &m[2].scale(c64(w2, 0.0))
}
