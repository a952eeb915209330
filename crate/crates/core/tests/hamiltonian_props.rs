use std::f64::consts::PI;

use calabi_lab::hamiltonian::HamiltonianConfig;
use calabi_lab::{ComplexPoint, Hamiltonian, HamiltonianSpec};
use num_complex::Complex64;
use proptest::prelude::*;

fn catalog() -> Vec<HamiltonianSpec> {
    let bump = HamiltonianSpec::radial_bump(1.0, 0.8).unwrap();
    let moving = HamiltonianSpec::moving_bump(1.0, 0.25, 0.4).unwrap();
    vec![
        HamiltonianSpec::radial_polynomial(1.0, 2, 1.0).unwrap(),
        HamiltonianSpec::radial_polynomial(-0.7, 5, 0.6).unwrap(),
        bump.clone(),
        moving.clone(),
        HamiltonianSpec::time_scaled(vec![0.5, -1.0, 3.0], bump.clone()).unwrap(),
        HamiltonianSpec::concatenate(bump, moving),
    ]
}

fn point() -> impl Strategy<Value = Complex64> {
    (0.0..0.97f64, 0.0..(2.0 * PI)).prop_map(|(r, a)| Complex64::from_polar(r, a))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    // ∂H/∂z̄ = ½(H_x + i H_y)
    #[test]
    fn wirtinger_matches_finite_differences(z in point(), t in 0.01..0.99f64, which in 0usize..6) {
        let h = &catalog()[which];
        let d = 1e-6;
        let hx = (h.value(t, z + d) - h.value(t, z - d)) / (2.0 * d);
        let hy = (h.value(t, z + Complex64::new(0.0, d)) - h.value(t, z - Complex64::new(0.0, d))) / (2.0 * d);
        let expected = 0.5 * Complex64::new(hx, hy);
        let got = h.dzbar(t, z);
        prop_assert!((got - expected).norm() <= 1e-6 * (1.0 + got.norm()), "{got} vs {expected}");
    }

    #[test]
    fn field_is_divergence_free(z in point(), t in 0.01..0.99f64, which in 0usize..6) {
        let h = &catalog()[which];
        let d = 1e-6;
        let div = (h.velocity(t, z + d).re - h.velocity(t, z - d).re
            + h.velocity(t, z + Complex64::new(0.0, d)).im
            - h.velocity(t, z - Complex64::new(0.0, d)).im)
            / (2.0 * d);
        let scale = 1.0 + h.velocity(t, z).norm() / 0.25;
        prop_assert!(div.abs() <= 1e-5 * scale, "div = {div}");
    }

    #[test]
    fn vanishes_outside_support(r in 0.0..1.0f64, a in 0.0..(2.0 * PI), t in 0.0..=1.0f64, which in 0usize..6) {
        let h = &catalog()[which];
        let (centre, rho) = h.support_disc(t);
        let z = centre + Complex64::from_polar(rho + r * (2.0 - rho), a);
        prop_assert_eq!(h.value(t, z), 0.0);
        prop_assert_eq!(h.dzbar(t, z), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn vanishes_on_the_boundary(a in 0.0..(2.0 * PI), t in 0.0..=1.0f64, which in 0usize..6) {
        let h = &catalog()[which];
        let z = Complex64::from_polar(1.0, a);
        prop_assert_eq!(h.value(t, z), 0.0);
        prop_assert_eq!(h.velocity(t, z), Complex64::new(0.0, 0.0));
    }
}

#[test]
fn checked_evaluation_rejects_bad_times() {
    let h = HamiltonianSpec::radial_bump(1.0, 0.5).unwrap();
    let z = ComplexPoint::new(0.1, 0.2).unwrap();
    assert!(h.evaluate(-0.1, z).is_err());
    assert!(h.velocity_at(1.5, z).is_err());
    let v = h.velocity_at(0.5, z).unwrap();
    assert_eq!(v.as_vector(), [v.xi.re, v.xi.im]);
}

#[test]
fn invalid_parameters_are_rejected() {
    assert!(HamiltonianSpec::radial_polynomial(1.0, 1, 1.0).is_err());
    assert!(HamiltonianSpec::radial_polynomial(1.0, 2, 1.5).is_err());
    assert!(HamiltonianSpec::radial_bump(f64::NAN, 0.5).is_err());
    assert!(HamiltonianSpec::moving_bump(1.0, 0.5, 0.6).is_err());
    assert!(HamiltonianSpec::time_scaled(vec![], HamiltonianSpec::Zero).is_err());
}

#[test]
fn configs_round_trip() {
    for h in catalog() {
        let cfg = HamiltonianConfig::from(&h);
        let json = serde_json::to_string(&cfg).unwrap();
        let back: HamiltonianConfig = serde_json::from_str(&json).unwrap();
        assert_eq!(HamiltonianSpec::try_from(&back).unwrap(), h);
    }
    let bad = r#"{"name": "radial-polynomial", "params": [1.0, 2.5, 1.0]}"#;
    let cfg: HamiltonianConfig = serde_json::from_str(bad).unwrap();
    assert!(HamiltonianSpec::try_from(&cfg).is_err());
}
