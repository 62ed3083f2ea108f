//! Patterns, coefficients and the plane-wave reference field.

use std::f64::consts::PI;

use layered_green::farfield::*;
use layered_green::sommerfeld::green;
use layered_green::{Point, QuadSpec, WaveProfile, C64};
use proptest::prelude::*;

fn wp(kp: f64, km: f64) -> WaveProfile {
    WaveProfile::new(kp, km).unwrap()
}

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm()
}

fn source() -> impl Strategy<Value = Point> {
    (-1.0..1.0f64, 0.05..1.0f64, any::<bool>()).prop_map(|(a, b, up)| Point::new(a, if up { b } else { -b }))
}

fn direction() -> impl Strategy<Value = f64> {
    (0.02..PI - 0.02, any::<bool>()).prop_map(|(t, up)| if up { t } else { t + PI })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, ..ProptestConfig::default() })]

    #[test]
    fn reflection_is_bounded_and_total_below_critical(theta in 0.01..PI - 0.01, kp in 1.0..3.0f64, km in 1.0..3.0f64) {
        let w = wp(kp, km);
        let r = refl_coeff(theta, &w).unwrap();
        prop_assert!(r.norm() <= 1.0 + 1e-14);
        prop_assert!((trans_coeff(theta, &w).unwrap() - r - 1.0).norm() < 1e-15);
        if let Some(tc) = w.theta_c() {
            let grazing = theta.min(PI - theta);
            if kp > km && grazing < tc - 1e-9 {
                prop_assert!((r.norm() - 1.0).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn swapped_media_dualize_coefficients(theta in 0.01..PI - 0.01, kp in 1.0..3.0f64, km in 1.0..3.0f64) {
        let (a, b) = (wp(kp, km), wp(km, kp));
        // 1 / n is rounded differently under the two profiles; stay off the branch point
        prop_assume!((theta.cos().abs() - a.n().min(1.0 / a.n())).abs() > 1e-6);
        let lower = 2.0 * PI - theta;
        let diff = (refl_tilde(lower, &a).unwrap() - refl_coeff(theta, &b).unwrap()).norm();
        prop_assert!(diff < 1e-12, "{}", diff);
        prop_assert!((trans_tilde(lower, &a).unwrap() - refl_tilde(lower, &a).unwrap() - 1.0).norm() < 1e-15);
    }

    #[test]
    fn gradient_pattern_is_source_gradient(theta in direction(), y in source(), ordering in any::<bool>()) {
        let w = if ordering { wp(2.0, 1.0) } else { wp(1.0, 2.0) };
        let d = FarDirection::new(theta).unwrap();
        let h = 1e-6;
        let g = |d1: f64, d2: f64| g_farfield(&d, &y.translated(d1, d2), &w).unwrap();
        let fd = [(g(h, 0.0) - g(-h, 0.0)) / (2.0 * h), (g(0.0, h) - g(0.0, -h)) / (2.0 * h)];
        let hf = h_farfield(&d, &y, &w).unwrap();
        let err = ((hf.0 - fd[0]).norm().powi(2) + (hf.1 - fd[1]).norm().powi(2)).sqrt();
        prop_assert!(err <= 1e-7 * hf.norm().max(1e-3));
    }

    #[test]
    fn mirrored_source_mirrors_pattern(theta in direction(), y in source()) {
        let w = wp(2.0, 1.0);
        let a = g_farfield(&FarDirection::new(theta).unwrap(), &y, &w).unwrap();
        let mirrored = if theta < PI { PI - theta } else { 3.0 * PI - theta };
        let b = g_farfield(&FarDirection::new(mirrored).unwrap(), &y.mirrored(), &w).unwrap();
        prop_assert!((a - b).norm() <= 1e-13 * a.norm().max(1e-3), "{} {}", a, b);
    }
}

#[test]
fn pattern_is_continuous_on_fine_grids() {
    let w = wp(2.0, 1.0);
    let y = Point::new(0.3, 0.5);
    for base in [0.0, PI] {
        let n = 1000;
        let vals: Vec<C64> =
            (1..n).map(|i| g_farfield(&FarDirection::new(base + PI * i as f64 / n as f64).unwrap(), &y, &w).unwrap()).collect();
        let max_jump = vals.windows(2).map(|p| (p[1] - p[0]).norm()).fold(0.0, f64::max);
        let scale = vals.iter().map(|v| v.norm()).fold(0.0, f64::max);
        // square-root behaviour at the critical angles bounds single-cell jumps by O(sqrt(step))
        assert!(max_jump < 0.2 * scale, "base={base}: {max_jump} vs {scale}");
    }
}

#[test]
fn vertical_pattern_example() {
    let w = wp(2.0, 1.0);
    let h = 0.7;
    let v = g_farfield(&FarDirection::new(PI / 2.0).unwrap(), &Point::new(0.0, h), &w).unwrap();
    let r = refl_coeff(PI / 2.0, &w).unwrap();
    assert!((r - C64::new(1.0 / 3.0, 0.0)).norm() < 1e-15);
    let pre = C64::from_polar(1.0 / (16.0 * PI).sqrt(), PI / 4.0);
    let expect = pre * (C64::from_polar(1.0, -2.0 * h) + r * C64::from_polar(1.0, 2.0 * h));
    assert!(rel(v, expect) < 1e-14);
}

#[test]
fn green_approaches_pattern_radially() {
    let w = wp(2.0, 1.0);
    let q = QuadSpec::default();
    let y = Point::new(0.3, -0.5);
    for theta in [1.9, 4.0] {
        let d = FarDirection::new(theta).unwrap();
        let k = pattern_wavenumber(&d, &w);
        let pattern = g_farfield(&d, &y, &w).unwrap();
        let gaps: Vec<f64> = [100.0, 400.0, 1600.0]
            .iter()
            .map(|&r| {
                let g = green(&w, &Point::polar(r, theta), &y, &q).unwrap().value;
                (g * r.sqrt() * C64::from_polar(1.0, -k * r) - pattern).norm()
            })
            .collect();
        // away from critical angles the gap decays like 1 / r
        assert!(gaps[1] < 0.4 * gaps[0] && gaps[2] < 0.4 * gaps[1], "theta={theta}: {gaps:?}");
    }
}

#[test]
fn reference_field_is_continuous_across_interface() {
    let w = wp(2.0, 1.0);
    for theta_d in [1.2 * PI, 1.5 * PI, 1.9 * PI] {
        let inc = IncidentSpec::new(theta_d, &w).unwrap();
        for x1 in [-1.0, 0.4] {
            let f = |x2: f64| reference_field(&inc, &Point::new(x1, x2), &w).unwrap();
            let e = 1e-7;
            assert!((f(e) - f(-e)).norm() < 1e-6, "theta_d={theta_d}");
            let du = |s: f64| (f(s * 2.0 * e) - f(s * e)) / (s * e);
            assert!((du(1.0) - du(-1.0)).norm() < 1e-4, "theta_d={theta_d}");
        }
    }
    assert!(IncidentSpec::new(0.5, &w).is_err());
}
