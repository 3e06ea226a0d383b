use std::fmt;
use std::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hermitian::jacobi_rotation;

/// Shorthand constructor for a complex scalar.
#[inline]
pub const fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Dense square complex matrix with finite entries.
///
/// Every Hamiltonian, metric and Dyson map in the crate is carried by this
/// type. Storage is column-major (nalgebra).
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<Complex64>);

impl ComplexMatrix {
    /// Wraps a nalgebra matrix, checking that it is square, non-empty and finite.
    pub fn new(inner: DMatrix<Complex64>) -> Result<Self> {
        if inner.nrows() == 0 {
            return Err(Error::InvalidDimension { dim: 0, min: 1 });
        }
        if inner.nrows() != inner.ncols() {
            return Err(Error::DimensionMismatch {
                expected: inner.nrows(),
                found: inner.ncols(),
            });
        }
        if inner.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self(inner))
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> Complex64) -> Result<Self> {
        Self::new(DMatrix::from_fn(dim, dim, f))
    }

    /// Builds a matrix from row slices.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let dim = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bad.len(),
            });
        }
        Self::from_fn(dim, |i, j| rows[i][j])
    }

    /// Real-valued matrix from row slices.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bad.len(),
            });
        }
        Self::from_fn(dim, |i, j| c64(rows[i][j], 0.0))
    }

    pub fn identity(dim: usize) -> Self {
        Self(DMatrix::identity(dim, dim))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(DMatrix::zeros(dim, dim))
    }

    pub fn from_diagonal(diag: &[f64]) -> Result<Self> {
        Self::from_fn(diag.len(), |i, j| {
            if i == j {
                c64(diag[i], 0.0)
            } else {
                c64(0.0, 0.0)
            }
        })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.0[(row, col)]
    }

    pub fn as_matrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<Complex64> {
        self.0
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self(self.0.map(|z| z * factor))
    }

    /// Largest entry modulus, `‖M‖_max`.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |acc, z| acc.max(z.norm()))
    }

    /// `‖M − M†‖_max`.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.0[(i, j)] - self.0[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// True when every entry has an exactly zero imaginary part.
    pub fn is_real(&self) -> bool {
        self.0.iter().all(|z| z.im == 0.0)
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.dim()).map(|i| self.0[(i, i)]).collect()
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    /// `‖A − B‖_max`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_same_dim(other)?;
        Ok(self
            .0
            .iter()
            .zip(other.0.iter())
            .fold(0.0, |acc, (a, b)| acc.max((a - b).norm())))
    }

    pub fn try_inverse(&self) -> Option<Self> {
        self.0.clone().try_inverse().map(Self)
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: v.len(),
            });
        }
        let out = &self.0 * DVector::from_column_slice(v);
        Ok(out.iter().copied().collect())
    }

    pub(crate) fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }

    /// Frobenius inner product `Re tr(A†B)`; real for pairs of Hermitian matrices.
    pub(crate) fn trace_inner(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a.conj() * b).re)
            .sum()
    }

    pub(crate) fn from_inner_unchecked(inner: DMatrix<Complex64>) -> Self {
        debug_assert_eq!(inner.nrows(), inner.ncols());
        Self(inner)
    }
}

const SVD_MAX_SWEEPS: usize = 64;

/// Singular values and, if requested, `V†` of `m`, by one-sided Jacobi.
///
/// Columns of `m` are rotated pairwise until mutually orthogonal; their norms
/// are then the singular values and the accumulated rotations form `V`.
pub(crate) fn svd(
    m: DMatrix<Complex64>,
    with_v: bool,
) -> Result<(Vec<f64>, Option<DMatrix<Complex64>>)> {
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    let mut a = m;
    let n = a.ncols();
    // rounding floor of a column inner product
    let threshold = a.nrows().max(1) as f64 * f64::EPSILON;
    // columns this small are numerically zero; rotating them only churns underflow
    let negligible = f64::EPSILON * f64::EPSILON * a.norm();
    let mut v = DMatrix::<Complex64>::identity(n, n);
    let mut sweeps = 0;
    loop {
        let mut rotated = false;
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                let (np, nq) = (a.column(p).norm(), a.column(q).norm());
                if np.min(nq) <= negligible {
                    continue;
                }
                let gamma = a.column(p).dotc(&a.column(q));
                if gamma.norm() <= threshold * np * nq {
                    continue;
                }
                let (alpha, beta) = (np * np, nq * nq);
                rotated = true;
                let (jpp, jpq, jqp, jqq) = jacobi_rotation(alpha, beta, gamma);
                for target in [&mut a, &mut v] {
                    for k in 0..target.nrows() {
                        let xp = target[(k, p)];
                        let xq = target[(k, q)];
                        target[(k, p)] = xp * jpp + xq * jqp;
                        target[(k, q)] = xp * jpq + xq * jqq;
                    }
                }
            }
        }
        if !rotated {
            break;
        }
        sweeps += 1;
        if sweeps == SVD_MAX_SWEEPS {
            return Err(Error::NumericFailure {
                what: "singular value decomposition",
                residual: f64::NAN,
            });
        }
    }
    let sigma = (0..n).map(|j| a.column(j).norm()).collect();
    Ok((sigma, with_v.then(|| v.adjoint())))
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.dim(), self.dim())?;
        for i in 0..self.dim() {
            let row: Vec<String> = (0..self.dim())
                .map(|j| {
                    let z = self.0[(i, j)];
                    format!("{:+.6}{:+.6}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl<'a> Mul<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        assert_eq!(
            self.dim(),
            rhs.dim(),
            "dimension mismatch in matrix product"
        );
        ComplexMatrix(&self.0 * &rhs.0)
    }
}

impl<'a> Add<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch in matrix sum");
        ComplexMatrix(&self.0 + &rhs.0)
    }
}

impl<'a> Sub<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        assert_eq!(
            self.dim(),
            rhs.dim(),
            "dimension mismatch in matrix difference"
        );
        ComplexMatrix(&self.0 - &rhs.0)
    }
}
