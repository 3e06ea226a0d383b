use proptest::prelude::*;
use quasiherm_core::*;

fn is_tridiagonal(m: &ComplexMatrix) -> bool {
    (0..m.dim()).all(|i| (0..m.dim()).all(|j| i.abs_diff(j) <= 1 || m.get(i, j) == c64(0.0, 0.0)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn hermitian_pencil_is_hermitian(eps in -5.0f64..5.0, lambda in -3.0f64..3.0) {
        let h = eval_hermitian(eps, lambda);
        prop_assert_eq!(h.hermiticity_defect(), 0.0);
        prop_assert!(is_tridiagonal(&h));
    }

    #[test]
    fn nonhermitian_adjoint_flips_eta(eta in -5.0f64..5.0, lambda in -3.0f64..3.0) {
        let h = eval_nonhermitian(eta, lambda);
        prop_assert_eq!(h.adjoint(), eval_nonhermitian(-eta, lambda));
        prop_assert!(is_tridiagonal(&h));
    }

    #[test]
    fn numeric_matches_closed_form(eta in -2.0f64..2.0, lambda in 0.0f64..2.5) {
        let numeric = eigenvalues(&eval_nonhermitian(eta, lambda), DEFAULT_TOL).unwrap();
        let exact = closed_form_nonhermitian(eta, lambda);
        // away from exceptional points the eigenvalues are well conditioned
        let near_ep = [1.0, 1.0 / lambda.max(1e-9)].iter().any(|p| (eta.abs() - p).abs() < 1e-3)
            || exact.min_gap().unwrap().0 < 1e-4;
        prop_assume!(!near_ep);
        prop_assert!(numeric.max_distance(&exact).unwrap() <= 1e-8);
    }

    #[test]
    fn real_spectra_are_conjugation_closed(eta in -2.0f64..2.0, lambda in -2.5f64..2.5) {
        let s = eigenvalues(&eval_nonhermitian(eta, lambda), DEFAULT_TOL).unwrap();
        for z in s.values() {
            let partner = s.values().iter().map(|w| (w - z.conj()).norm()).fold(f64::INFINITY, f64::min);
            prop_assert!(partner <= 1e-8);
        }
    }

    #[test]
    fn similarity_invariance(
        eta in -0.9f64..0.9,
        lambda in 0.0f64..2.0,
        entries in proptest::collection::vec(-0.3f64..0.3, 32),
    ) {
        let h = eval_nonhermitian(eta, lambda);
        // S = I + small perturbation is well conditioned
        let s = ComplexMatrix::from_fn(4, |i, j| {
            let k = 2 * (4 * i + j);
            c64(if i == j { 1.0 } else { 0.0 } + entries[k], entries[k + 1])
        }).unwrap();
        let s_inv = s.try_inverse().unwrap();
        let similar = &(&s * &h) * &s_inv;
        let before = eigenvalues(&h, DEFAULT_TOL).unwrap();
        let after = eigenvalues(&similar, DEFAULT_TOL).unwrap();
        prop_assume!(before.min_gap().unwrap().0 > 1e-3);
        prop_assert!(before.max_distance(&after).unwrap() <= 1e-7);
    }
}

#[test]
fn unified_pencil_is_continuous_at_zero() {
    let left = eval_unified(-1e-300, 1.0);
    let right = eval_unified(1e-300, 1.0);
    let at = eval_unified(0.0, 1.0);
    assert!(left.max_abs_diff(&at).unwrap() <= 1e-299);
    assert!(right.max_abs_diff(&at).unwrap() <= 1e-299);
    assert_eq!(at, build_kinetic(4).unwrap());
}

#[test]
fn hermitian_agreement_on_grid() {
    for eps in linspace(-2.0, 2.0, 81) {
        let d = eigenvalues(&eval_hermitian(eps, 1.0), DEFAULT_TOL)
            .unwrap()
            .max_distance(&closed_form_hermitian(eps))
            .unwrap();
        assert!(d <= 1e-8, "eps={eps}: {d:e}");
    }
}

#[test]
fn nonhermitian_agreement_on_grid() {
    for lambda in [0.6, 1.0, 1.2] {
        for eta in linspace(-2.0, 2.0, 81) {
            let d = eigenvalues(&eval_nonhermitian(eta, lambda), DEFAULT_TOL)
                .unwrap()
                .max_distance(&closed_form_nonhermitian(eta, lambda))
                .unwrap();
            assert!(d <= 1e-8, "eta={eta}, lambda={lambda}: {d:e}");
        }
    }
}

#[test]
fn unified_formula_is_the_general_one_at_lambda_one() {
    for tau in linspace(0.0, 2.0, 201) {
        let d = closed_form_unified(tau)
            .max_distance(&closed_form_nonhermitian(tau, 1.0))
            .unwrap();
        assert!(d <= 1e-12, "tau={tau}: {d:e}");
    }
}

#[test]
fn first_kind_ep_at_inverse_lambda() {
    for lambda in [1.2, 1.5, 2.0] {
        let ep = locate_ep(
            &HamiltonianPencil::nonhermitian(lambda),
            (0.3, 1.0 / lambda + 0.05),
            1e-4,
            1e-10,
        )
        .unwrap();
        assert!(
            (ep.param_value - 1.0 / lambda).abs() <= 1e-8,
            "lambda={lambda}: {ep:?}"
        );
        assert_eq!(ep.kind, EpKind::FirstKind);
    }
}

#[test]
fn ep_taxonomy_at_three_fifths() {
    let pencil = HamiltonianPencil::nonhermitian(0.6);
    let eps = scan_eps(&pencil, &linspace(-2.0, 2.0, 81), DEFAULT_KIND_PROBE, 1e-10).unwrap();
    let found: Vec<(f64, EpKind)> = eps.iter().map(|e| (e.param_value, e.kind)).collect();
    let onset = (5.0f64 / 4.36).sqrt();
    let want = [
        (-5.0 / 3.0, EpKind::FirstKind),
        (-onset, EpKind::FirstKind),
        (-1.0, EpKind::SecondKind),
        (1.0, EpKind::SecondKind),
        (onset, EpKind::FirstKind),
        (5.0 / 3.0, EpKind::FirstKind),
    ];
    assert_eq!(found.len(), want.len(), "{found:?}");
    for ((x, k), (wx, wk)) in found.iter().zip(&want) {
        assert!((x - wx).abs() <= 1e-8, "{x} vs {wx}");
        assert_eq!(k, wk);
    }
}

#[test]
fn second_kind_neighbourhood_stays_real() {
    let pencil = HamiltonianPencil::nonhermitian(0.6);
    for x in linspace(0.95, 1.05, 21) {
        assert!(
            eigenvalues(&pencil.evaluate(x), DEFAULT_TOL)
                .unwrap()
                .is_real(),
            "eta={x}"
        );
    }
}

#[test]
fn no_ep_in_hermitian_sweep() {
    let eps = scan_eps(
        &HamiltonianPencil::hermitian(1.0),
        &linspace(-2.0, 2.0, 41),
        DEFAULT_KIND_PROBE,
        1e-10,
    )
    .unwrap();
    assert!(eps.is_empty());
}

#[test]
fn sweep_is_deterministic_and_ordered() {
    let pencil = HamiltonianPencil::nonhermitian(1.2);
    let g = linspace(-2.0, 2.0, 81);
    let a = sweep_spectrum(&pencil, &g, DEFAULT_TOL).unwrap();
    let b = sweep_spectrum(&pencil, &g, DEFAULT_TOL).unwrap();
    assert_eq!(a, b);
    assert!(a.iter().zip(&g).all(|(p, x)| p.param == *x));
}
