//! Closed-form spectra of the four-site pencils.
//!
//! Each formula has the shape `E = ±√(x ± y)`; all four sign combinations are
//! emitted and then sorted like any other spectrum.

use num_complex::Complex64;

use super::{real, spectrum_from_exact, Spectrum};

/// Roots of `E⁴ − sum·E² + product` given `disc = sum² − 4·product`.
///
/// The larger `E²` comes from the quadratic formula, the smaller from
/// `E₊²E₋² = product`, which avoids cancellation near a zero eigenvalue.
fn four_roots(sum: Complex64, disc: Complex64, product: Complex64) -> Vec<Complex64> {
    let root = disc.sqrt();
    let big = if (sum + root).norm() >= (sum - root).norm() {
        (sum + root) * 0.5
    } else {
        (sum - root) * 0.5
    };
    let small = if big.norm() == 0.0 {
        big
    } else {
        product / big
    };
    let (p, m) = (big.sqrt(), small.sqrt());
    vec![p, -p, m, -m]
}

/// `E = ±½ √((6 ± 2√5)(1 + ε²))`, the `λ = 1` Hermitian pencil.
pub fn closed_form_hermitian(epsilon: f64) -> Spectrum {
    let factor = 1.0 + epsilon * epsilon;
    // ½√((6 ± 2√5) f) = √((3 ± √5) f / 2)
    spectrum_from_exact(four_roots(
        real(3.0 * factor),
        real(5.0 * factor * factor),
        real(factor * factor),
    ))
}

/// `E = ±(1/√2) √(3 − (λ²+2)η² ± √((5 − (λ²+4)η²)(1 − λ²η²)))`.
///
/// Principal complex square roots are used, so the result is complex whenever
/// either radicand turns negative.
pub fn closed_form_nonhermitian(eta: f64, lambda: f64) -> Spectrum {
    let l2 = lambda * lambda;
    let e2 = eta * eta;
    let outer = 3.0 - (l2 + 2.0) * e2;
    let inner = (5.0 - (l2 + 4.0) * e2) * (1.0 - l2 * e2);
    let ends = 1.0 - e2;
    spectrum_from_exact(four_roots(real(outer), real(inner), real(ends * ends)))
}

/// Spectrum of the `λ = 1` interface Hamiltonian.
///
/// Uses `1 − γ(τ)² = 1 − τ|τ|`: for `τ < 0` this is the Hermitian formula, for
/// `0 ≤ τ ≤ 1` its continuation `(1 − τ²)`, and for `τ > 1` two purely
/// imaginary conjugate pairs `±i ρ (1 ± √5)/2` with `ρ = √(τ² − 1)`.
pub fn closed_form_unified(tau: f64) -> Spectrum {
    let factor = 1.0 - tau * tau.abs();
    spectrum_from_exact(four_roots(
        real(3.0 * factor),
        real(5.0 * factor * factor),
        real(factor * factor),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::c64;
    use crate::spectral::Reality;

    const GOLDEN: f64 = 1.618033988749895;

    fn assert_close(s: &Spectrum, want: &[Complex64], tol: f64) {
        assert_eq!(s.len(), want.len());
        for (a, b) in s.values().iter().zip(want) {
            assert!((a - b).norm() <= tol, "{a} vs {b}\n{:?}", s.values());
        }
    }

    #[test]
    fn hermitian_at_zero_is_golden() {
        let s = closed_form_hermitian(0.0);
        assert_close(
            &s,
            &[
                real(-GOLDEN),
                real(1.0 - GOLDEN),
                real(GOLDEN - 1.0),
                real(GOLDEN),
            ],
            1e-12,
        );
    }

    #[test]
    fn hermitian_at_one() {
        // brute-force: roots of E^4 - 3(1+ε²)E² + (1+ε²)² at ε=1
        let f = 2.0f64;
        let big = ((3.0 * f + (9.0 * f * f - 4.0 * f * f).sqrt()) / 2.0).sqrt();
        let small = ((3.0 * f - (5.0 * f * f).sqrt()) / 2.0).sqrt();
        assert!((big - 2.2882456).abs() < 1e-7);
        assert!((small - 0.8740320).abs() < 1e-7);
        assert_close(
            &closed_form_hermitian(1.0),
            &[real(-big), real(-small), real(small), real(big)],
            1e-12,
        );
    }

    #[test]
    fn hermitian_even_in_epsilon() {
        assert_eq!(closed_form_hermitian(-2.0), closed_form_hermitian(2.0));
        assert_eq!(closed_form_hermitian(5.0).reality(), Reality::AllReal);
    }

    #[test]
    fn nonhermitian_reduces_to_kinetic() {
        for lambda in [0.0, 0.6, 1.0, 1.2, 3.0] {
            assert_close(
                &closed_form_nonhermitian(0.0, lambda),
                &[
                    real(-GOLDEN),
                    real(1.0 - GOLDEN),
                    real(GOLDEN - 1.0),
                    real(GOLDEN),
                ],
                1e-12,
            );
        }
    }

    #[test]
    fn nonhermitian_second_kind_crossing() {
        let s = closed_form_nonhermitian(1.0, 0.6);
        assert_close(&s, &[real(-0.8), real(0.0), real(0.0), real(0.8)], 1e-12);
    }

    #[test]
    fn nonhermitian_reality_regimes() {
        assert_eq!(
            closed_form_nonhermitian(0.9, 1.2).reality(),
            Reality::PartiallyComplex
        );
        assert_eq!(
            closed_form_nonhermitian(0.5, 1.2).reality(),
            Reality::AllReal
        );
    }

    #[test]
    fn unified_regimes() {
        let s = closed_form_unified(1.0);
        assert!(s.values().iter().all(|z| z.norm() == 0.0));
        let s = closed_form_unified(2f64.sqrt());
        assert_close(
            &s,
            &[
                c64(0.0, -GOLDEN),
                c64(0.0, 1.0 - GOLDEN),
                c64(0.0, GOLDEN - 1.0),
                c64(0.0, GOLDEN),
            ],
            1e-12,
        );
        assert_eq!(closed_form_unified(-1.0), closed_form_hermitian(-1.0));
        assert_close(
            &closed_form_unified(-1.0),
            closed_form_hermitian(1.0).values(),
            1e-15,
        );
    }

    #[test]
    fn lambda_one_formula_matches_general() {
        for k in 0..=200 {
            let eta = -2.0 + 4.0 * k as f64 / 200.0;
            let a = closed_form_unified(eta.abs());
            let b = closed_form_nonhermitian(eta.abs(), 1.0);
            assert!(a.max_distance(&b).unwrap() <= 1e-12, "eta={eta}");
        }
    }
}
