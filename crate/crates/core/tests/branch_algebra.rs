//! Sheet conventions of the branched square roots.

use layered_green::branch::*;
use layered_green::C64;
use proptest::prelude::*;

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm().max(f64::MIN_POSITIVE)
}

fn off_axis() -> impl Strategy<Value = C64> {
    (-6.0..6.0f64, 0.01..6.0f64, any::<bool>()).prop_map(|(x, y, up)| C64::new(x, if up { y } else { -y }))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 500, ..ProptestConfig::default() })]

    #[test]
    fn both_products_square_to_z2_minus_a2(z in off_axis(), a in 0.1..4.0f64) {
        prop_assume!((z.re - a).abs() > 1e-6 && (z.re + a).abs() > 1e-6);
        let reference = z * z - a * a;
        if let Ok(s) = s_cut(z, a) {
            prop_assert!(rel(s * s, reference) < 1e-14);
        }
        if let Ok(s) = s_tilde(z, a) {
            prop_assert!(rel(s * s, reference) < 1e-14);
        }
    }

    #[test]
    fn physical_sheet_and_evenness_on_real_line(xi in -20.0..20.0f64, a in 0.1..4.0f64) {
        prop_assume!((xi.abs() - a).abs() > 1e-9);
        let s = s_cut(C64::new(xi, 0.0), a).unwrap();
        prop_assert!(s.re >= 0.0 && s.im <= 0.0);
        let m = s_cut(C64::new(-xi, 0.0), a).unwrap();
        prop_assert!((s - m).norm() <= 1e-15 * s.norm().max(1.0));
    }

    #[test]
    fn sheeted_roots_square_back(z in off_axis()) {
        prop_assume!(z.re.abs() > 1e-9);
        let (r1, r2) = (s1(z).unwrap(), s2(z).unwrap());
        prop_assert!(rel(r1 * r1, z) < 1e-15 && rel(r2 * r2, z) < 1e-15);
        // C1 angles in (-3 pi / 2, pi / 2) halve into (-3 pi / 4, pi / 4); C2 into (-pi / 4, 3 pi / 4)
        prop_assert!(r1.arg() > -0.75 * std::f64::consts::PI - 1e-15 && r1.arg() < 0.25 * std::f64::consts::PI + 1e-15);
        prop_assert!(r2.arg() > -0.25 * std::f64::consts::PI - 1e-15 && r2.arg() < 0.75 * std::f64::consts::PI + 1e-15);
    }

    #[test]
    fn cut_limits_are_opposite_tilde_values(a in 0.2..3.0f64, t in 0.01..5.0f64) {
        let z = C64::new(a, t);
        let right = s_limit(z, a, BranchSide::FromRight).unwrap();
        let left = s_limit(z, a, BranchSide::FromLeft).unwrap();
        prop_assert!((right + left).norm() == 0.0);
        prop_assert!(rel(right, s_tilde(z, a).unwrap()) < 1e-15);
        // one-sided probes at h = 1e-8, linearly extrapolated
        let h = 1e-8;
        for (sgn, lim) in [(1.0, right), (-1.0, left)] {
            let p = s_cut(z + sgn * h / 2.0, a).unwrap() * 2.0 - s_cut(z + sgn * h, a).unwrap();
            prop_assert!(rel(p, lim) < 1e-12);
        }
    }

    #[test]
    fn principal_power_is_multiplicative_in_exponent(z in off_axis(), b1 in -2.0..2.0f64, b2 in -2.0..2.0f64) {
        let lhs = principal_power(z, b1 + b2).unwrap();
        let rhs = principal_power(z, b1).unwrap() * principal_power(z, b2).unwrap();
        prop_assert!(rel(lhs, rhs) < 1e-13);
    }
}

#[test]
fn cut_adjacent_inputs_are_rejected() {
    // on the C1 cut (positive imaginary axis) and the C2 cut (negative imaginary axis)
    assert!(s1(C64::new(0.0, 1.0)).is_err());
    assert!(s2(C64::new(0.0, -1.0)).is_err());
    assert!(s1(C64::new(1e-14, 1.0)).is_err());
    assert!(principal_power(C64::new(-1.0, 0.0), 0.5).is_err());
    assert!(principal_power(C64::new(0.0, 0.0), 0.0).is_err());
    assert_eq!(principal_power(C64::new(0.0, 0.0), 2.0).unwrap(), C64::new(0.0, 0.0));
    assert!(s_limit(C64::new(1.5, 1.0), 1.0, BranchSide::FromRight).is_err());
}
