//! Dense complex eigensolver.
//!
//! Householder reduction to upper Hessenberg form followed by implicit
//! single-shift QR sweeps (Wilkinson shift, exceptional shifts every tenth
//! iteration, Ahues–Tisseur deflation test). The converged Schur form gives
//! the eigenvalues; eigenvectors come from back substitution on the triangular
//! factor. Eigenvalues are then polished by simultaneous Aberth iteration on
//! `det(zI − M)`, evaluated through an LU factorization of the original matrix,
//! which keeps relative accuracy in the small couplings that decide where
//! levels cross.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{c64, ComplexMatrix};

const ULP: f64 = f64::EPSILON;
const SAFE_MIN: f64 = f64::MIN_POSITIVE;

/// QR sweeps allowed per unit of dimension.
pub(crate) const ITERATIONS_PER_DIM: usize = 100;

#[inline]
fn cabs1(z: Complex64) -> f64 {
    z.re.abs() + z.im.abs()
}

/// Options for [`eigenvalues_with`].
#[derive(Debug, Clone, Copy)]
pub struct EigenOptions {
    /// Run the Aberth polishing pass after QR.
    pub polish: bool,
    /// Maximum admissible eigenvalue backward error relative to `max(1, ‖M‖_F)`.
    pub residual_bound: f64,
}

impl Default for EigenOptions {
    fn default() -> Self {
        Self {
            polish: true,
            residual_bound: 1e-8,
        }
    }
}

/// Reduces `a` to upper Hessenberg form in place, accumulating the unitary
/// similarity into `q` when given.
fn hessenberg(a: &mut DMatrix<Complex64>, mut q: Option<&mut DMatrix<Complex64>>) {
    let n = a.nrows();
    if n < 3 {
        return;
    }
    for k in 0..n - 2 {
        let tail_norm: f64 = (k + 2..n).map(|i| a[(i, k)].norm_sqr()).sum::<f64>();
        if tail_norm == 0.0 {
            continue;
        }
        let alpha = a[(k + 1, k)];
        let norm = (alpha.norm_sqr() + tail_norm).sqrt();
        let phase = if alpha.norm() == 0.0 {
            c64(1.0, 0.0)
        } else {
            alpha / alpha.norm()
        };
        // v = x + phase * |x| e1, reflector P = I - 2 v v† / (v† v)
        let mut v: Vec<Complex64> = (k + 1..n).map(|i| a[(i, k)]).collect();
        v[0] += phase * norm;
        let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        let beta = 2.0 / vnorm2;

        // left: A <- P A on rows k+1..n
        for j in 0..n {
            let dot: Complex64 = v
                .iter()
                .enumerate()
                .map(|(r, vi)| vi.conj() * a[(k + 1 + r, j)])
                .sum();
            let f = dot * beta;
            for (r, vi) in v.iter().enumerate() {
                a[(k + 1 + r, j)] -= vi * f;
            }
        }
        // right: A <- A P on columns k+1..n
        for i in 0..n {
            let dot: Complex64 = v
                .iter()
                .enumerate()
                .map(|(r, vi)| a[(i, k + 1 + r)] * vi)
                .sum();
            let f = dot * beta;
            for (r, vi) in v.iter().enumerate() {
                a[(i, k + 1 + r)] -= f * vi.conj();
            }
        }
        if let Some(q) = q.as_deref_mut() {
            for i in 0..n {
                let dot: Complex64 = v
                    .iter()
                    .enumerate()
                    .map(|(r, vi)| q[(i, k + 1 + r)] * vi)
                    .sum();
                let f = dot * beta;
                for (r, vi) in v.iter().enumerate() {
                    q[(i, k + 1 + r)] -= f * vi.conj();
                }
            }
        }
        for i in k + 2..n {
            a[(i, k)] = c64(0.0, 0.0);
        }
    }
}

/// Rotation `[c, s; -s̄, c]` mapping `(x, y)` to `(r, 0)`.
fn givens(x: Complex64, y: Complex64) -> (f64, Complex64, Complex64) {
    if y.norm() == 0.0 {
        return (1.0, c64(0.0, 0.0), x);
    }
    if x.norm() == 0.0 {
        let ny = y.norm();
        return (0.0, y.conj() / ny, c64(ny, 0.0));
    }
    let nx = x.norm();
    let norm = nx.hypot(y.norm());
    let phase = x / nx;
    (nx / norm, phase * y.conj() / norm, phase * norm)
}

/// Complex Schur decomposition of an upper Hessenberg matrix by shifted QR.
///
/// On success `h` is upper triangular; `z` (if given) accumulates the
/// transformations. Fails after `ITERATIONS_PER_DIM * n` sweeps in total.
fn hessenberg_qr(h: &mut DMatrix<Complex64>, mut z: Option<&mut DMatrix<Complex64>>) -> Result<()> {
    let n = h.nrows();
    if n == 1 {
        return Ok(());
    }
    let cap = ITERATIONS_PER_DIM * n;
    let mut total = 0usize;
    let mut ihi = n - 1;
    let mut its = 0usize;

    loop {
        // locate the start of the active unreduced block
        let mut l = ihi;
        while l > 0 {
            let sub = h[(l, l - 1)];
            if cabs1(sub) <= SAFE_MIN {
                h[(l, l - 1)] = c64(0.0, 0.0);
                break;
            }
            let mut tst = cabs1(h[(l - 1, l - 1)]) + cabs1(h[(l, l)]);
            if tst == 0.0 {
                if l >= 2 {
                    tst += cabs1(h[(l - 1, l - 2)]);
                }
                if l < ihi {
                    tst += cabs1(h[(l + 1, l)]);
                }
            }
            if cabs1(sub) <= ULP * tst {
                let ab = cabs1(sub).max(cabs1(h[(l - 1, l)]));
                let ba = cabs1(sub).min(cabs1(h[(l - 1, l)]));
                let diff = h[(l - 1, l - 1)] - h[(l, l)];
                let aa = cabs1(h[(l, l)]).max(cabs1(diff));
                let bb = cabs1(h[(l, l)]).min(cabs1(diff));
                let s = aa + ab;
                if ba * (ab / s) <= SAFE_MIN.max(ULP * (bb * (aa / s))) {
                    h[(l, l - 1)] = c64(0.0, 0.0);
                    break;
                }
            }
            l -= 1;
        }

        if l == ihi {
            // 1x1 block converged
            if ihi == 0 {
                return Ok(());
            }
            ihi -= 1;
            its = 0;
            continue;
        }

        total += 1;
        its += 1;
        if total > cap {
            let residual = (1..n).map(|i| h[(i, i - 1)].norm()).fold(0.0, f64::max);
            return Err(Error::NumericFailure {
                what: "shifted QR iteration",
                residual,
            });
        }

        let shift = if its % 20 == 10 {
            c64(0.75 * h[(l + 1, l)].re.abs(), 0.0) + h[(l, l)]
        } else if its.is_multiple_of(20) {
            c64(0.75 * h[(ihi, ihi - 1)].re.abs(), 0.0) + h[(ihi, ihi)]
        } else {
            wilkinson_shift(h, ihi)
        };

        for k in l..ihi {
            let (x, y) = if k == l {
                (h[(l, l)] - shift, h[(l + 1, l)])
            } else {
                (h[(k, k - 1)], h[(k + 1, k - 1)])
            };
            let (c, s, r) = givens(x, y);
            let col_start = if k > l {
                h[(k, k - 1)] = r;
                h[(k + 1, k - 1)] = c64(0.0, 0.0);
                k
            } else {
                k
            };
            for j in col_start..n {
                let a = h[(k, j)];
                let b = h[(k + 1, j)];
                h[(k, j)] = a * c + s * b;
                h[(k + 1, j)] = -s.conj() * a + b * c;
            }
            let row_end = (k + 2).min(ihi);
            for i in 0..=row_end {
                let a = h[(i, k)];
                let b = h[(i, k + 1)];
                h[(i, k)] = a * c + b * s.conj();
                h[(i, k + 1)] = -s * a + b * c;
            }
            if let Some(z) = z.as_deref_mut() {
                for i in 0..n {
                    let a = z[(i, k)];
                    let b = z[(i, k + 1)];
                    z[(i, k)] = a * c + b * s.conj();
                    z[(i, k + 1)] = -s * a + b * c;
                }
            }
        }
    }
}

fn wilkinson_shift(h: &DMatrix<Complex64>, ihi: usize) -> Complex64 {
    let mut t = h[(ihi, ihi)];
    let u = h[(ihi - 1, ihi)].sqrt() * h[(ihi, ihi - 1)].sqrt();
    let mut s = cabs1(u);
    if s != 0.0 {
        let x = (h[(ihi - 1, ihi - 1)] - t) * 0.5;
        let sx = cabs1(x);
        s = s.max(sx);
        let mut y = ((x / s).powi(2) + (u / s).powi(2)).sqrt() * s;
        if sx > 0.0 {
            let xs = x / sx;
            if xs.re * y.re + xs.im * y.im < 0.0 {
                y = -y;
            }
        }
        let denom = x + y;
        if denom.norm() > 0.0 {
            t -= u * (u / denom);
        }
    }
    t
}

/// Complex Schur form `M = Z T Z†`, returned as `(T, Z)`.
pub(crate) fn schur(m: &ComplexMatrix) -> Result<(DMatrix<Complex64>, DMatrix<Complex64>)> {
    let n = m.dim();
    let mut t = m.as_matrix().clone();
    let mut z = DMatrix::identity(n, n);
    hessenberg(&mut t, Some(&mut z));
    hessenberg_qr(&mut t, Some(&mut z))?;
    Ok((t, z))
}

/// Raw QR eigenvalues in Schur-diagonal order.
pub(crate) fn qr_eigenvalues(m: &ComplexMatrix) -> Result<Vec<Complex64>> {
    let mut t = m.as_matrix().clone();
    hessenberg(&mut t, None);
    hessenberg_qr(&mut t, None)?;
    Ok((0..m.dim()).map(|i| t[(i, i)]).collect())
}

/// Right eigenvectors from a Schur pair, one unit-norm column per diagonal entry of `T`.
pub(crate) fn eigenvectors_from_schur(
    t: &DMatrix<Complex64>,
    z: &DMatrix<Complex64>,
) -> DMatrix<Complex64> {
    let n = t.nrows();
    let tnorm = t.iter().fold(0.0f64, |acc, v| acc.max(v.norm()));
    // floor keeps |d|² representable in the complex division below
    let smin = (ULP * tnorm).max(SAFE_MIN.sqrt());
    let mut y = DMatrix::<Complex64>::zeros(n, n);
    for k in 0..n {
        y[(k, k)] = c64(1.0, 0.0);
        for i in (0..k).rev() {
            let mut acc = c64(0.0, 0.0);
            for j in i + 1..=k {
                acc += t[(i, j)] * y[(j, k)];
            }
            let mut d = t[(i, i)] - t[(k, k)];
            if d.norm() < smin {
                d = c64(smin, 0.0);
            }
            y[(i, k)] = -acc / d;
        }
    }
    let mut v = z * y;
    for mut col in v.column_iter_mut() {
        let nrm = col.norm();
        if nrm > 0.0 {
            col /= Complex64::new(nrm, 0.0);
        }
    }
    v
}

/// Simultaneous Aberth iteration on `det(zI − M)`.
///
/// The Newton ratio `p'(z)/p(z)` is `tr((zI − M)⁻¹)`. Returns `None` when the
/// iteration wanders (non-finite values or a move larger than `max_move`).
fn aberth_polish(m: &ComplexMatrix, start: &[Complex64], max_move: f64) -> Option<Vec<Complex64>> {
    let n = start.len();
    let mut z = start.to_vec();
    let a = m.as_matrix();
    for _ in 0..80 {
        let mut biggest_step: f64 = 0.0;
        let mut scale: f64 = 0.0;
        for k in 0..n {
            let shifted = DMatrix::from_diagonal_element(n, n, z[k]) - a;
            let Some(inv) = shifted.lu().try_inverse() else {
                continue;
            };
            let ratio = inv.trace();
            let mut repulsion = c64(0.0, 0.0);
            for j in 0..n {
                if j != k && z[j] != z[k] {
                    repulsion += (z[k] - z[j]).inv();
                }
            }
            let denom = ratio - repulsion;
            if denom.norm() == 0.0 || !denom.re.is_finite() || !denom.im.is_finite() {
                continue;
            }
            let step = denom.inv();
            z[k] -= step;
            biggest_step = biggest_step.max(step.norm());
            scale = scale.max(z[k].norm());
        }
        if z.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return None;
        }
        if biggest_step <= 4.0 * ULP * scale.max(1.0) {
            break;
        }
    }
    if z.iter().zip(start).any(|(p, q)| (p - q).norm() > max_move) {
        return None;
    }
    Some(z)
}

/// Smallest singular value of `M − E·I`: the backward error of `E` as an eigenvalue.
pub(crate) fn eigen_residual(m: &ComplexMatrix, e: Complex64) -> f64 {
    let n = m.dim();
    let shifted = m.as_matrix() - DMatrix::from_diagonal_element(n, n, e);
    match crate::matrix::svd(shifted, false) {
        Ok((sv, _)) => sv.into_iter().fold(f64::INFINITY, f64::min),
        Err(_) => f64::INFINITY,
    }
}

/// Eigenvalues (unsorted, unsymmetrized) after QR, optional polishing and the
/// residual check.
pub(crate) fn raw_eigenvalues(m: &ComplexMatrix, opts: &EigenOptions) -> Result<Vec<Complex64>> {
    let qr = qr_eigenvalues(m)?;
    let scale = m.as_matrix().norm().max(1.0);
    let values = if opts.polish && m.dim() > 1 {
        aberth_polish(m, &qr, 1e-3 * scale).unwrap_or(qr)
    } else {
        qr
    };
    let worst = values
        .iter()
        .map(|&e| eigen_residual(m, e))
        .fold(0.0, f64::max);
    if worst > opts.residual_bound * scale {
        return Err(Error::NumericFailure {
            what: "eigenvalue residual check",
            residual: worst,
        });
    }
    Ok(values)
}
