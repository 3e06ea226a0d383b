//! Spectra of the lattice models.
//!
//! Numerical eigenvalues for arbitrary small matrices, the closed-form spectra
//! of the four-site pencils, reality classification, exceptional-point
//! location and parameter sweeps.

mod closed_form;
pub(crate) mod eigen;
mod ep;
mod sweep;

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{c64, ComplexMatrix};

pub use closed_form::{closed_form_hermitian, closed_form_nonhermitian, closed_form_unified};
pub use eigen::EigenOptions;
pub use ep::{locate_ep, scan_eps, EpKind, ExceptionalPoint, DEFAULT_KIND_PROBE};
pub use sweep::{linspace, sweep_spectrum, SweepPoint};

/// Default tolerance for reality classification.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Whether a spectrum is entirely real.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Reality {
    AllReal,
    PartiallyComplex,
}

impl Reality {
    pub fn as_str(self) -> &'static str {
        match self {
            Reality::AllReal => "real",
            Reality::PartiallyComplex => "complex",
        }
    }
}

impl fmt::Display for Reality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Counts of real, purely imaginary and generic complex eigenvalues.
///
/// For real matrices with an `E ↦ −E` symmetric spectrum, eigenvalues can
/// only leave the real or the imaginary axis by colliding, so a change of
/// signature along a pencil marks an exceptional point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Signature {
    pub real: usize,
    pub imaginary: usize,
    pub complex: usize,
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}r/{}i/{}c", self.real, self.imaginary, self.complex)
    }
}

/// An ordered list of eigenvalues with its reality classification.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    values: Vec<Complex64>,
    reality: Reality,
    tol_used: f64,
}

/// Sorts by real part, then by imaginary part among values whose real parts
/// agree within `tol` (chained), so rounding in `Re` cannot reorder a conjugate
/// pair or a purely imaginary quartet.
fn sort_spectrum(values: &mut [Complex64], tol: f64) {
    values.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let mut start = 0;
    for i in 1..=values.len() {
        if i == values.len() || values[i].re - values[i - 1].re > tol {
            values[start..i].sort_by(|a, b| a.im.total_cmp(&b.im));
            start = i;
        }
    }
}

impl Spectrum {
    /// Sorts `values` by (real part, imaginary part) and classifies them.
    pub fn new(mut values: Vec<Complex64>, tol: f64) -> Result<Self> {
        if !(tol > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "tolerance must be positive, got {tol}"
            )));
        }
        if values
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite);
        }
        sort_spectrum(&mut values, tol);
        let reality = classify_values(&values, tol);
        Ok(Self {
            values,
            reality,
            tol_used: tol,
        })
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn reality(&self) -> Reality {
        self.reality
    }

    pub fn tol_used(&self) -> f64 {
        self.tol_used
    }

    pub fn is_real(&self) -> bool {
        self.reality == Reality::AllReal
    }

    pub fn max_abs_imag(&self) -> f64 {
        self.values.iter().fold(0.0, |acc, z| acc.max(z.im.abs()))
    }

    /// Largest eigenvalue modulus.
    pub fn radius(&self) -> f64 {
        self.values.iter().fold(0.0, |acc, z| acc.max(z.norm()))
    }

    /// `max Re E − min Re E`.
    pub fn real_spread(&self) -> f64 {
        let (lo, hi) = self
            .values
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), z| {
                (lo.min(z.re), hi.max(z.re))
            });
        hi - lo
    }

    /// Smallest distance between two eigenvalues, with the indices of the pair.
    pub fn min_gap(&self) -> Option<(f64, usize, usize)> {
        let mut best: Option<(f64, usize, usize)> = None;
        for i in 0..self.values.len() {
            for j in i + 1..self.values.len() {
                let d = (self.values[i] - self.values[j]).norm();
                if best.is_none_or(|(b, _, _)| d < b) {
                    best = Some((d, i, j));
                }
            }
        }
        best
    }

    /// Smallest positive real eigenvalue, if any.
    pub fn smallest_positive(&self) -> Option<f64> {
        self.values
            .iter()
            .filter(|z| z.im.abs() <= self.tol_used && z.re > self.tol_used)
            .map(|z| z.re)
            .fold(None, |acc: Option<f64>, x| {
                Some(acc.map_or(x, |a| a.min(x)))
            })
    }

    pub fn signature(&self) -> Signature {
        let tol = self.tol_used;
        let mut sig = Signature::default();
        for z in &self.values {
            if z.im.abs() <= tol {
                sig.real += 1;
            } else if z.re.abs() <= tol {
                sig.imaginary += 1;
            } else {
                sig.complex += 1;
            }
        }
        sig
    }

    /// Largest distance between corresponding entries of two spectra of equal length.
    pub fn max_distance(&self, other: &Spectrum) -> Result<f64> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: other.len(),
            });
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .fold(0.0, |acc, (a, b)| acc.max((a - b).norm())))
    }
}

fn classify_values(values: &[Complex64], tol: f64) -> Reality {
    if values.iter().all(|z| z.im.abs() <= tol) {
        Reality::AllReal
    } else {
        Reality::PartiallyComplex
    }
}

/// `AllReal` iff every `|Im E| ≤ tol`.
pub fn classify_reality(s: &Spectrum, tol: f64) -> Result<Reality> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    Ok(classify_values(s.values(), tol))
}

/// Eigenvalues of `m`, sorted and classified.
///
/// For matrices with exactly real entries the spectrum is made closed under
/// conjugation: imaginary parts within `tol` are zeroed and conjugate partners
/// that disagree by at most `tol` are averaged. For Hermitian input (up to a
/// few ulps) imaginary parts are dropped.
pub fn eigenvalues(m: &ComplexMatrix, tol: f64) -> Result<Spectrum> {
    eigenvalues_with(m, tol, &EigenOptions::default())
}

pub fn eigenvalues_with(m: &ComplexMatrix, tol: f64, opts: &EigenOptions) -> Result<Spectrum> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let mut values = eigen::raw_eigenvalues(m, opts)?;
    if m.hermiticity_defect() <= 8.0 * f64::EPSILON * m.max_abs() {
        for z in &mut values {
            z.im = 0.0;
        }
    } else if m.is_real() {
        symmetrize_conjugates(&mut values, tol);
    }
    Spectrum::new(values, tol)
}

fn symmetrize_conjugates(values: &mut [Complex64], tol: f64) {
    for z in values.iter_mut() {
        if z.im.abs() <= tol {
            z.im = 0.0;
        }
    }
    let mut paired = vec![false; values.len()];
    for i in 0..values.len() {
        if paired[i] || values[i].im <= 0.0 {
            continue;
        }
        let target = values[i].conj();
        let partner = (0..values.len())
            .filter(|&j| !paired[j] && j != i && values[j].im < 0.0)
            .min_by(|&a, &b| {
                (values[a] - target)
                    .norm()
                    .total_cmp(&(values[b] - target).norm())
            });
        if let Some(j) = partner {
            if (values[j] - target).norm() <= tol {
                let avg = (values[i] + values[j].conj()) * 0.5;
                values[i] = avg;
                values[j] = avg.conj();
                paired[i] = true;
                paired[j] = true;
            }
        }
    }
}

pub(crate) fn spectrum_from_exact(values: Vec<Complex64>) -> Spectrum {
    Spectrum::new(values, DEFAULT_TOL).expect("closed-form eigenvalues are finite")
}

pub(crate) fn real(x: f64) -> Complex64 {
    c64(x, 0.0)
}
