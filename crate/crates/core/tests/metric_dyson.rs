use proptest::prelude::*;
use quasiherm_core::*;

fn unit_family(eta: f64, lambda: f64) -> Vec<ComplexMatrix> {
    MetricParams::unit_choices()
        .iter()
        .map(|&p| metric_from_params(eta, lambda, p).unwrap())
        .collect()
}

/// Frobenius distance of `m` from the span of `basis` (not assumed orthonormal).
fn span_residual(basis: &[ComplexMatrix], m: &ComplexMatrix) -> f64 {
    let mut ortho: Vec<ComplexMatrix> = Vec::new();
    for b in basis {
        let mut r = b.clone();
        for q in &ortho {
            let c = inner(q, &r);
            r = &r - &q.scale(c64(c, 0.0));
        }
        let n = r.as_matrix().norm();
        if n > 1e-12 {
            ortho.push(r.scale(c64(1.0 / n, 0.0)));
        }
    }
    let mut r = m.clone();
    for q in &ortho {
        let c = inner(q, &r);
        r = &r - &q.scale(c64(c, 0.0));
    }
    r.as_matrix().norm() / m.as_matrix().norm().max(1.0)
}

fn inner(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    a.as_matrix()
        .iter()
        .zip(b.as_matrix().iter())
        .map(|(x, y)| (x.conj() * y).re)
        .sum()
}

#[test]
fn kernel_dimension_and_span() {
    for (eta, lambda) in [(0.25, 1.0), (0.5, 1.2), (0.3, 0.6)] {
        let h = eval_nonhermitian(eta, lambda);
        let kernel = solve_metric_kernel(&h, 1e-9).unwrap();
        assert_eq!(kernel.dimension(), 4, "({eta}, {lambda})");
        assert!(kernel.residuals.iter().all(|&r| r <= 1e-10));
        let family = unit_family(eta, lambda);
        for m in &family {
            assert!(quasi_hermiticity_residual(&h, m).unwrap() <= 1e-12);
            assert!(kernel.projection_residual(m) / m.as_matrix().norm() <= 1e-9);
        }
        for b in &kernel.basis {
            assert!(span_residual(&family, b) <= 1e-9);
        }
    }
}

#[test]
fn kernel_rejects_non_positive_tolerance() {
    assert!(solve_metric_kernel(&eval_nonhermitian(0.2, 1.0), 0.0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn family_is_exactly_symmetric(
        eta in -0.95f64..0.95,
        lambda in 0.0f64..1.0,
        c in -2.0f64..2.0, d in -2.0f64..2.0, f in -2.0f64..2.0, g in -2.0f64..2.0,
    ) {
        let m = metric_from_params(eta, lambda, MetricParams::new(c, d, f, g)).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                prop_assert_eq!(m.get(i, j), m.get(j, i));
            }
        }
        let h = eval_nonhermitian(eta, lambda);
        let scale = m.max_abs().max(1.0);
        prop_assert!(quasi_hermiticity_residual(&h, &m).unwrap() <= 1e-12 * scale);
    }

    #[test]
    fn diagonal_metric_positivity_domain(eta in -2.0f64..2.0, lambda in 0.05f64..2.5) {
        let bound = 1.0f64.min(1.0 / lambda);
        prop_assume!((eta.abs() - bound).abs() > 1e-9);
        let theta = diagonal_metric(eta, lambda).unwrap();
        let all_positive = theta.diagonal().iter().all(|z| z.re > 0.0);
        prop_assert_eq!(all_positive, eta.abs() < bound);
    }

    #[test]
    fn hermitization_of_kernel_metrics(
        eta in -0.7f64..0.7,
        lambda in 0.0f64..1.3,
        weights in proptest::collection::vec(-0.2f64..0.2, 4),
    ) {
        let h = eval_nonhermitian(eta, lambda);
        let kernel = solve_metric_kernel(&h, 1e-9).unwrap();
        // a small kernel perturbation of the diagonal metric stays positive definite
        let mut theta = diagonal_metric(eta, lambda).unwrap();
        for (w, b) in weights.iter().zip(&kernel.basis) {
            theta = &theta + &b.scale(c64(*w, 0.0));
        }
        let positivity = check_positive_definite(&theta, 1e-9).unwrap();
        prop_assume!(positivity.is_pd && positivity.condition_number() < 1e4);
        let residual = quasi_hermiticity_residual(&h, &theta).unwrap();
        let d = hermitize(&h, &theta, 1e-9).unwrap();
        let floor = f64::EPSILON * theta.max_abs() * h.max_abs();
        prop_assert!(d.hermiticity_defect <= 100.0 * residual.max(floor) * positivity.condition_number());
        prop_assert!(d.hermiticity_defect <= 1e-10);
        prop_assert!(d.isospectral_defect <= 1e-8);
        // canonical root: Hermitian and positive
        prop_assert!(d.omega.hermiticity_defect() <= 1e-12);
        prop_assert!(check_positive_definite(&d.omega, 1e-12).unwrap().is_pd);
        prop_assert!((&d.omega.adjoint() * &d.omega).max_abs_diff(&theta).unwrap() <= 1e-10 * theta.max_abs());
        prop_assert!((&d.omega * &d.omega_inverse).max_abs_diff(&ComplexMatrix::identity(4)).unwrap() <= 1e-10);
    }
}

#[test]
fn polar_freedom_leaves_metric_unchanged() {
    let theta = diagonal_metric(0.5, 1.2).unwrap();
    let omega = matrix_sqrt_pd(&theta, 1e-12).unwrap();
    // a unitary: complex Givens rotation in the (0, 2) plane with a phase
    let (c, s) = (0.6, 0.8);
    let u = ComplexMatrix::from_rows(&[
        vec![c64(c, 0.0), c64(0.0, 0.0), c64(0.0, s), c64(0.0, 0.0)],
        vec![c64(0.0, 0.0), c64(1.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0)],
        vec![c64(0.0, s), c64(0.0, 0.0), c64(c, 0.0), c64(0.0, 0.0)],
        vec![c64(0.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(1.0, 0.0)],
    ])
    .unwrap();
    let rotated = &u * &omega;
    assert!(
        (&rotated.adjoint() * &rotated)
            .max_abs_diff(&theta)
            .unwrap()
            <= 1e-13
    );
    assert!(rotated.hermiticity_defect() > 0.1);
}

#[test]
fn indefinite_metric_blocks_hermitization() {
    // beyond the exceptional point the diagonal metric loses positivity
    let h = eval_nonhermitian(0.9, 1.2);
    let theta = diagonal_metric(0.9, 1.2).unwrap();
    assert!(quasi_hermiticity_residual(&h, &theta).unwrap() <= 1e-12);
    assert!(matches!(
        hermitize(&h, &theta, 1e-9),
        Err(Error::NotPositiveDefinite { .. })
    ));
}

#[test]
fn unified_pencil_hermitization_sweep() {
    let grid = linspace(-0.9, 0.9, 37);
    let out = hermitized_pencil(
        &HamiltonianPencil::unified(1.0),
        &grid,
        Continuation::default(),
    );
    for (tau, d) in &out {
        let d = d.as_ref().unwrap();
        assert!(d.hermiticity_defect <= 1e-10, "tau={tau}");
        assert!(d.isospectral_defect <= 1e-8, "tau={tau}");
    }
    let zero = out.iter().find(|(t, _)| *t == 0.0).unwrap();
    assert_eq!(zero.1.as_ref().unwrap().theta_condition, 1.0);
}

#[test]
fn interface_limit() {
    let probe = [0.1, 0.01, 0.001];
    assert!(interface_match(|s| diagonal_metric(s, 1.2), 0.0, &probe, 1e-6).unwrap());
    // the distance to the identity is linear in eta with slope 2 + lambda
    for eta in probe {
        let dist = diagonal_metric(eta, 1.2)
            .unwrap()
            .max_abs_diff(&ComplexMatrix::identity(4))
            .unwrap();
        let exact = (1.0 + eta) / ((1.0 - eta) * (1.0 - 1.2 * eta)) - 1.0;
        assert!((dist - exact).abs() <= 1e-14);
        assert!(dist <= 3.2 * eta * 1.25 + 1e-12);
    }
}

#[test]
fn interface_probe_hits_singularity() {
    let out = interface_match(
        |s| diagonal_metric(s, 1.2),
        0.5,
        &[5.0 / 6.0, 0.7, 0.6],
        1e-6,
    );
    assert!(matches!(out, Err(Error::MetricSingularity { .. })));
}
