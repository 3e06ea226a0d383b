//! Cyclic Jacobi eigensolver for Hermitian matrices.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{c64, ComplexMatrix};

const MAX_SWEEPS: usize = 64;

/// Eigen-decomposition `A = V diag(w) V†` of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Ascending eigenvalues.
    pub values: Vec<f64>,
    /// Unitary matrix of eigenvectors (columns, in the order of `values`).
    pub vectors: DMatrix<Complex64>,
}

impl HermitianEigen {
    /// `V diag(f(w)) V†`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.values.len();
        let mut scaled = self.vectors.clone();
        for (k, &w) in self.values.iter().enumerate() {
            let fw = c64(f(w), 0.0);
            for i in 0..n {
                scaled[(i, k)] *= fw;
            }
        }
        ComplexMatrix::from_inner_unchecked(scaled * self.vectors.adjoint())
    }
}

/// Unitary `J = [jpp, jpq; jqp, jqq]` with `J† [app, apq; conj(apq), aqq] J` diagonal.
///
/// A phase makes the coupling real, then a real Jacobi rotation zeroes it.
pub(crate) fn jacobi_rotation(
    app: f64,
    aqq: f64,
    apq: Complex64,
) -> (Complex64, Complex64, Complex64, Complex64) {
    let mag = apq.norm();
    let phase = apq / mag;
    let theta = (aqq - app) / (2.0 * mag);
    let t = if theta == 0.0 {
        1.0
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    (c64(c, 0.0), phase * s, -phase.conj() * s, c64(c, 0.0))
}

/// Jacobi diagonalisation. The input is symmetrised as `(A + A†)/2`; callers
/// are expected to have checked Hermiticity.
pub fn hermitian_eigen(a: &ComplexMatrix) -> Result<HermitianEigen> {
    let n = a.dim();
    let m = a.as_matrix();
    let mut h = (m + m.adjoint()).map(|z| z * 0.5);
    let mut v = DMatrix::<Complex64>::identity(n, n);
    let scale = h.norm();

    let off = |h: &DMatrix<Complex64>| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += h[(i, j)].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut converged = n == 1 || off(&h) <= f64::EPSILON * scale;
    let mut sweeps = 0;
    while !converged {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NumericFailure {
                what: "Jacobi sweep",
                residual: off(&h),
            });
        }
        sweeps += 1;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = h[(p, q)];
                if apq.norm() == 0.0 {
                    continue;
                }
                let (jpp, jpq, jqp, jqq) = jacobi_rotation(h[(p, p)].re, h[(q, q)].re, apq);
                for k in 0..n {
                    let hkp = h[(k, p)];
                    let hkq = h[(k, q)];
                    h[(k, p)] = hkp * jpp + hkq * jqp;
                    h[(k, q)] = hkp * jpq + hkq * jqq;
                }
                for k in 0..n {
                    let hpk = h[(p, k)];
                    let hqk = h[(q, k)];
                    h[(p, k)] = jpp.conj() * hpk + jqp.conj() * hqk;
                    h[(q, k)] = jpq.conj() * hpk + jqq.conj() * hqk;
                }
                h[(p, q)] = c64(0.0, 0.0);
                h[(q, p)] = c64(0.0, 0.0);
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * jpp + vkq * jqp;
                    v[(k, q)] = vkp * jpq + vkq * jqq;
                }
            }
        }
        converged = off(&h) <= f64::EPSILON * scale;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| h[(i, i)].re.total_cmp(&h[(j, j)].re));
    let values = order.iter().map(|&i| h[(i, i)].re).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(HermitianEigen { values, vectors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::eval_hermitian;

    #[test]
    fn diagonal_matrix_is_returned_exactly() {
        let d = ComplexMatrix::from_diagonal(&[3.0, -1.0, 0.5, 2.0]).unwrap();
        let e = hermitian_eigen(&d).unwrap();
        assert_eq!(e.values, vec![-1.0, 0.5, 2.0, 3.0]);
    }

    #[test]
    fn reconstructs_complex_hermitian() {
        let h = eval_hermitian(0.8, 1.3);
        let e = hermitian_eigen(&h).unwrap();
        let back = e.map(|w| w);
        assert!(back.max_abs_diff(&h).unwrap() < 1e-14);
        let vtv = e.vectors.adjoint() * &e.vectors;
        assert!((vtv - DMatrix::<Complex64>::identity(4, 4)).norm() < 1e-14);
        assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
    }
}
