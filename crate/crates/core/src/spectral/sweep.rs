use rayon::prelude::*;

use super::{eigenvalues, Reality, Spectrum};
use crate::error::{Error, Result};
use crate::lattice::HamiltonianPencil;

/// One grid point of a spectral sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub param: f64,
    pub spectrum: Spectrum,
}

impl SweepPoint {
    pub fn reality(&self) -> Reality {
        self.spectrum.reality()
    }
}

/// `count` evenly spaced points from `start` to `stop` inclusive.
///
/// Points are interpolated as `start·(1−f) + stop·f`, so symmetric grids
/// contain an exact zero when `count` is odd.
pub fn linspace(start: f64, stop: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![start],
        _ => (0..count)
            .map(|k| {
                let f = k as f64 / (count - 1) as f64;
                start * (1.0 - f) + stop * f
            })
            .collect(),
    }
}

pub(crate) fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidArgument("grid must not be empty".into()));
    }
    if grid.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument(
            "grid must be strictly increasing".into(),
        ));
    }
    Ok(())
}

/// Spectrum of `pencil` at every grid point, in grid order.
///
/// Points are evaluated in parallel; each one is an independent pure
/// computation, so the output does not depend on the thread count.
pub fn sweep_spectrum(
    pencil: &HamiltonianPencil,
    grid: &[f64],
    tol: f64,
) -> Result<Vec<SweepPoint>> {
    check_grid(grid)?;
    grid.par_iter()
        .map(|&param| {
            pencil
                .try_evaluate(param)
                .and_then(|h| eigenvalues(&h, tol))
                .map(|spectrum| SweepPoint { param, spectrum })
                .map_err(|e| Error::at(param, e))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::build_kinetic;

    fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
        (0..n)
            .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
            .collect()
    }

    #[test]
    fn rejects_bad_grids() {
        let p = HamiltonianPencil::hermitian(1.0);
        assert!(sweep_spectrum(&p, &[], 1e-9).is_err());
        assert!(sweep_spectrum(&p, &[0.0, 0.0], 1e-9).is_err());
        assert!(sweep_spectrum(&p, &[1.0, 0.0], 1e-9).is_err());
    }

    #[test]
    fn single_point_is_kinetic() {
        let pts = sweep_spectrum(&HamiltonianPencil::nonhermitian(1.0), &[0.0], 1e-9).unwrap();
        let direct = eigenvalues(&build_kinetic(4).unwrap(), 1e-9).unwrap();
        assert_eq!(pts.len(), 1);
        assert!(pts[0].spectrum.max_distance(&direct).unwrap() < 1e-14);
    }

    #[test]
    fn hermitian_repulsion_minimum_at_zero() {
        let grid = linspace(-2.0, 2.0, 81);
        let pts = sweep_spectrum(&HamiltonianPencil::hermitian(1.0), &grid, 1e-9).unwrap();
        let (arg, min) = pts
            .iter()
            .map(|p| (p.param, p.spectrum.smallest_positive().unwrap()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        assert_eq!(arg, 0.0);
        assert!((min - 0.6180339887498949).abs() < 1e-10);
    }

    #[test]
    fn output_order_follows_grid() {
        let grid = linspace(-1.0, 1.0, 33);
        let pts = sweep_spectrum(&HamiltonianPencil::unified(1.0), &grid, 1e-9).unwrap();
        assert!(pts.iter().zip(&grid).all(|(p, g)| p.param == *g));
    }
}
