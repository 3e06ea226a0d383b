//! Exceptional-point location along a Hamiltonian pencil.
//!
//! Two indicators are used. Points where the [`Signature`] of the spectrum
//! changes (eigenvalues leaving the real or imaginary axis) are found by plain
//! bisection. Real level crossings, where the spectrum stays real on both
//! sides, show up as V-shaped zeros of the smallest level spacing and are
//! bracketed by golden-section search. The kind is then read off by probing
//! either side of the located point.

use std::fmt;

use rayon::prelude::*;

use super::sweep::check_grid;
use super::{eigenvalues, Signature, Spectrum, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::lattice::HamiltonianPencil;

/// Default offset used to probe either side of a located point.
pub const DEFAULT_KIND_PROBE: f64 = 1e-4;

/// Samples used when scanning a real stretch of the pencil for level crossings.
const CROSSING_SAMPLES: usize = 65;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EpKind {
    /// Eigenvalues are complex on at least one side.
    FirstKind,
    /// Real on both sides: an unavoided crossing without complexification.
    SecondKind,
}

impl EpKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EpKind::FirstKind => "first_kind",
            EpKind::SecondKind => "second_kind",
        }
    }
}

impl fmt::Display for EpKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExceptionalPoint {
    pub param_value: f64,
    pub kind: EpKind,
    /// Index pairs (into the sorted spectrum at `param_value`) of merging levels.
    pub level_pairs: Vec<(usize, usize)>,
    /// Smallest level spacing at `param_value`.
    pub residual_gap: f64,
    /// Spacing below which two levels count as merged at this point.
    pub gap_tolerance: f64,
    /// Width of the final bracket.
    pub bracket_width: f64,
}

impl ExceptionalPoint {
    /// Indices of all levels taking part in the degeneracy.
    pub fn merging_levels(&self) -> Vec<usize> {
        let mut levels: Vec<usize> = self.level_pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
        levels.sort_unstable();
        levels.dedup();
        levels
    }
}

struct Probe<'a> {
    pencil: &'a HamiltonianPencil,
}

impl Probe<'_> {
    fn spectrum(&self, x: f64) -> Result<Spectrum> {
        self.pencil
            .try_evaluate(x)
            .and_then(|h| eigenvalues(&h, DEFAULT_TOL))
            .map_err(|e| Error::at(x, e))
    }

    fn signature(&self, x: f64) -> Result<Signature> {
        Ok(self.spectrum(x)?.signature())
    }

    fn gap(&self, x: f64) -> Result<f64> {
        let s = self.spectrum(x)?;
        if !s.is_real() {
            return Ok(f64::INFINITY);
        }
        Ok(s.min_gap().map_or(f64::INFINITY, |(g, _, _)| g))
    }

    /// Bisection on the signature between two points whose signatures differ.
    fn bisect_signature(&self, mut lo: f64, mut hi: f64, tol: f64) -> Result<(f64, f64)> {
        let left = self.signature(lo)?;
        while hi - lo > tol {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.signature(mid)? == left {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok((0.5 * (lo + hi), hi - lo))
    }

    /// Golden-section minimisation of the level spacing on `[lo, hi]`.
    fn minimise_gap(&self, mut lo: f64, mut hi: f64, tol: f64) -> Result<(f64, f64)> {
        let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
        let mut x1 = hi - inv_phi * (hi - lo);
        let mut x2 = lo + inv_phi * (hi - lo);
        let mut g1 = self.gap(x1)?;
        let mut g2 = self.gap(x2)?;
        while hi - lo > tol {
            if g1 <= g2 {
                hi = x2;
                x2 = x1;
                g2 = g1;
                x1 = hi - inv_phi * (hi - lo);
                g1 = self.gap(x1)?;
            } else {
                lo = x1;
                x1 = x2;
                g1 = g2;
                x2 = lo + inv_phi * (hi - lo);
                g2 = self.gap(x2)?;
            }
            if x1 <= lo || x2 >= hi {
                break;
            }
        }
        Ok((0.5 * (lo + hi), hi - lo))
    }

    /// Real level crossings inside `[lo, hi]`, assuming the spectrum is real there.
    fn crossings(&self, lo: f64, hi: f64, tol: f64) -> Result<Vec<(f64, f64, f64)>> {
        let step = (hi - lo) / (CROSSING_SAMPLES - 1) as f64;
        let xs: Vec<f64> = (0..CROSSING_SAMPLES)
            .map(|i| lo + step * i as f64)
            .collect();
        let gaps = xs
            .iter()
            .map(|&x| self.gap(x))
            .collect::<Result<Vec<_>>>()?;
        let mut found = Vec::new();
        for i in 1..CROSSING_SAMPLES - 1 {
            if !gaps[i].is_finite() || gaps[i] > gaps[i - 1] || gaps[i] > gaps[i + 1] {
                continue;
            }
            let (x, width) = self.minimise_gap(xs[i - 1], xs[i + 1], tol)?;
            let g = self.gap(x)?;
            // slope of the V around the crossing
            let h = (1e3 * tol).max(1e-7).min(step);
            let (below, above) = (self.gap(x - h)?, self.gap(x + h)?);
            // a crossing needs a real spectrum on both sides; this also rejects
            // the stretch boundary where levels leave the real axis
            if !below.is_finite() || !above.is_finite() {
                continue;
            }
            let slope = (below + above) / (2.0 * h);
            let gap_tol = 10.0 * slope.max(1.0) * tol.max(width) + 1e-12;
            if g <= gap_tol {
                found.push((x, width, gap_tol));
            }
        }
        Ok(found)
    }
}

fn merging_pairs(s: &Spectrum, gap_tol: f64) -> Vec<(usize, usize)> {
    let v = s.values();
    let mut pairs = Vec::new();
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            if (v[i] - v[j]).norm() <= gap_tol {
                pairs.push((i, j));
            }
        }
    }
    pairs
}

/// Locates an exceptional point of `pencil` inside `bracket`.
///
/// A first-kind candidate exists when the spectral signature differs at the
/// bracket ends; second-kind candidates are real level crossings inside the
/// part of the bracket where the spectrum is real. The leftmost candidate is
/// returned. Candidates of both kinds closer than `tol` are reported as
/// [`Error::AmbiguousEp`].
pub fn locate_ep(
    pencil: &HamiltonianPencil,
    bracket: (f64, f64),
    kind_probe: f64,
    tol: f64,
) -> Result<ExceptionalPoint> {
    let (a, b) = bracket;
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::InvalidArgument(format!(
            "invalid bracket [{a}, {b}]"
        )));
    }
    if !(tol > 0.0) || !(kind_probe > 0.0) {
        return Err(Error::InvalidArgument(
            "tolerance and kind probe must be positive".into(),
        ));
    }
    let probe = Probe { pencil };
    let sa = probe.spectrum(a)?;
    let sb = probe.spectrum(b)?;

    let first = if sa.signature() != sb.signature() {
        Some(probe.bisect_signature(a, b, tol)?)
    } else {
        None
    };

    let real_stretch = match first {
        Some((x, _)) if sa.is_real() => Some((a, x)),
        Some((x, _)) if sb.is_real() => Some((x, b)),
        None if sa.is_real() && sb.is_real() => Some((a, b)),
        _ => None,
    };
    let seconds = match real_stretch {
        Some((lo, hi)) if hi - lo > 2.0 * tol => probe.crossings(lo, hi, tol)?,
        _ => Vec::new(),
    };

    if let Some((x1, _)) = first {
        if let Some(&(x2, _, _)) = seconds.iter().find(|(x2, _, _)| (x2 - x1).abs() <= tol) {
            return Err(Error::AmbiguousEp {
                first: x1,
                second: x2,
            });
        }
    }

    let second = seconds.first().copied();
    let (x, width, crossing_tol) = match (first, second) {
        (Some((x1, w1)), Some((x2, w2, gt))) => {
            if x2 < x1 {
                (x2, w2, Some(gt))
            } else {
                (x1, w1, None)
            }
        }
        (Some((x1, w1)), None) => (x1, w1, None),
        (None, Some((x2, w2, gt))) => (x2, w2, Some(gt)),
        (None, None) => return Err(Error::NoEpInBracket { lo: a, hi: b }),
    };

    let left = probe.spectrum(x - kind_probe)?;
    let right = probe.spectrum(x + kind_probe)?;
    let kind = if left.is_real() && right.is_real() {
        EpKind::SecondKind
    } else {
        EpKind::FirstKind
    };

    let at = probe.spectrum(x)?;
    let gap_tolerance =
        crossing_tol.unwrap_or_else(|| 10.0 * tol.max(width).sqrt() * at.radius().max(1.0));
    let residual_gap = at.min_gap().map_or(0.0, |(g, _, _)| g);
    Ok(ExceptionalPoint {
        param_value: x,
        kind,
        level_pairs: merging_pairs(&at, gap_tolerance),
        residual_gap,
        gap_tolerance,
        bracket_width: width,
    })
}

/// Finds every exceptional point resolved by a coarse `grid`.
///
/// Brackets come from consecutive grid points with different signatures
/// (isolated single-point anomalies are ignored) and from local minima of the
/// level spacing in real stretches; each is refined with [`locate_ep`].
/// Results are sorted by parameter with near-duplicates merged.
pub fn scan_eps(
    pencil: &HamiltonianPencil,
    grid: &[f64],
    kind_probe: f64,
    tol: f64,
) -> Result<Vec<ExceptionalPoint>> {
    check_grid(grid)?;
    let spectra = grid
        .par_iter()
        .map(|&x| {
            pencil
                .try_evaluate(x)
                .and_then(|h| eigenvalues(&h, DEFAULT_TOL))
                .map_err(|e| Error::at(x, e))
        })
        .collect::<Result<Vec<_>>>()?;
    let sigs: Vec<Signature> = spectra.iter().map(Spectrum::signature).collect();
    let n = grid.len();

    let anomalous: Vec<bool> = (0..n)
        .map(|i| i > 0 && i + 1 < n && sigs[i - 1] == sigs[i + 1] && sigs[i] != sigs[i - 1])
        .collect();
    let kept: Vec<usize> = (0..n).filter(|&i| !anomalous[i]).collect();

    let mut brackets: Vec<(f64, f64)> = kept
        .windows(2)
        .filter(|w| sigs[w[0]] != sigs[w[1]])
        .map(|w| (grid[w[0]], grid[w[1]]))
        .collect();

    let gaps: Vec<f64> = spectra
        .iter()
        .map(|s| {
            if s.is_real() {
                s.min_gap().map_or(f64::INFINITY, |(g, _, _)| g)
            } else {
                f64::INFINITY
            }
        })
        .collect();
    for i in 1..n.saturating_sub(1) {
        if gaps[i].is_finite()
            && gaps[i - 1].is_finite()
            && gaps[i + 1].is_finite()
            && gaps[i] <= gaps[i - 1]
            && gaps[i] <= gaps[i + 1]
        {
            brackets.push((grid[i - 1], grid[i + 1]));
        }
    }

    let located = brackets
        .par_iter()
        .map(|&br| match locate_ep(pencil, br, kind_probe, tol) {
            Err(Error::NoEpInBracket { .. }) => Ok(None),
            other => other.map(Some),
        })
        .collect::<Result<Vec<_>>>()?;

    let mut eps: Vec<ExceptionalPoint> = located.into_iter().flatten().collect();
    eps.sort_by(|p, q| p.param_value.total_cmp(&q.param_value));
    let merge_radius = (100.0 * tol).max(1e-6);
    eps.dedup_by(|later, earlier| (later.param_value - earlier.param_value).abs() <= merge_radius);
    Ok(eps)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_kind_at_inverse_lambda() {
        let ep = locate_ep(
            &HamiltonianPencil::nonhermitian(1.2),
            (0.5, 1.0),
            1e-4,
            1e-10,
        )
        .unwrap();
        assert!((ep.param_value - 5.0 / 6.0).abs() < 1e-9, "{ep:?}");
        assert_eq!(ep.kind, EpKind::FirstKind);
        assert_eq!(ep.level_pairs, vec![(0, 1), (2, 3)]);
        assert!(ep.residual_gap <= ep.gap_tolerance);
    }

    #[test]
    fn second_kind_crossing_at_one() {
        let ep = locate_ep(
            &HamiltonianPencil::nonhermitian(0.6),
            (0.9, 1.1),
            1e-4,
            1e-10,
        )
        .unwrap();
        assert!((ep.param_value - 1.0).abs() < 1e-9, "{ep:?}");
        assert_eq!(ep.kind, EpKind::SecondKind);
        assert_eq!(ep.level_pairs, vec![(1, 2)]);
        assert!(ep.residual_gap <= ep.gap_tolerance);
    }

    #[test]
    fn unified_fourfold() {
        let ep = locate_ep(&HamiltonianPencil::unified(1.0), (0.9, 1.1), 1e-4, 1e-8).unwrap();
        assert!((ep.param_value - 1.0).abs() < 1e-7, "{ep:?}");
        assert_eq!(ep.kind, EpKind::FirstKind);
        assert_eq!(ep.merging_levels(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn no_ep_for_hermitian_pencil() {
        let err =
            locate_ep(&HamiltonianPencil::hermitian(1.0), (-0.5, 0.5), 1e-4, 1e-8).unwrap_err();
        assert!(matches!(err, Error::NoEpInBracket { .. }));
    }

    #[test]
    fn rejects_bad_inputs() {
        let p = HamiltonianPencil::nonhermitian(1.0);
        assert!(locate_ep(&p, (1.0, 0.5), 1e-4, 1e-8).is_err());
        assert!(locate_ep(&p, (0.5, 1.0), 0.0, 1e-8).is_err());
        assert!(locate_ep(&p, (0.5, 1.0), 1e-4, 0.0).is_err());
    }
}
