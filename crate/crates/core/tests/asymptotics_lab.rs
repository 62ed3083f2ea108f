//! Residual sweeps, envelope checks and sharpness probes.

use std::f64::consts::PI;

use layered_green::asymptotics::*;
use layered_green::farfield::FarDirection;
use layered_green::{Point, QuadSpec, WaveProfile};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const THETA_C: f64 = PI / 3.0;

fn wp(kp: f64, km: f64) -> WaveProfile {
    WaveProfile::new(kp, km).unwrap()
}

fn dirs(thetas: &[f64]) -> Vec<FarDirection> {
    thetas.iter().map(|&t| FarDirection::new(t).unwrap()).collect()
}

fn slope(report: &EnvelopeReport, theta: f64, y: &Point) -> f64 {
    report.summary(theta, y).unwrap().fit.unwrap().slope
}

#[test]
fn slopes_move_from_critical_to_regular() {
    let y = Point::new(0.3, 0.5);
    let offsets = [0.0, 0.01, -0.01, 0.05, -0.05, 0.2, -0.2, 0.5, -0.5];
    let thetas: Vec<f64> = offsets.iter().map(|d| THETA_C + d).collect();
    let plan = SweepPlan::new(wp(2.0, 1.0), vec![y], dirs(&thetas), SweepPlan::default_radii(), Method::Auto).unwrap();
    let report = envelope_check(&plan).unwrap();
    assert_eq!(report.verdict(), Verdict::Pass);
    let s: Vec<f64> = thetas.iter().map(|&t| slope(&report, t, &y)).collect();
    assert!((-0.85..=-0.65).contains(&s[0]), "{s:?}");
    let near = (s[1] + s[2]) / 2.0;
    let far = (s[7] + s[8]) / 2.0;
    assert!(far < near - 0.3 && far < -1.3, "{s:?}");
    assert!(s[5] < -1.4 && s[7] < -1.4, "{s:?}");
    assert!(report.rows.iter().all(|r| !r.flag));
}

#[test]
fn regular_halves_decay_at_three_halves() {
    let y_up = Point::new(0.3, 0.5);
    // k+ < k-: no critical angle in the upper half
    let plan = SweepPlan::new(wp(1.0, 2.0), vec![y_up], dirs(&[0.3, 1.0, 1.9, 2.8]), SweepPlan::default_radii(), Method::Auto).unwrap();
    let report = envelope_check(&plan).unwrap();
    assert_eq!(report.verdict(), Verdict::Pass);
    assert!(report.summaries.iter().all(|s| s.fit.unwrap().slope <= -1.4), "{:?}", report.summaries);
    // k+ > k-: no critical angle in the lower half
    let plan = SweepPlan::new(wp(2.0, 1.0), vec![y_up], dirs(&[3.5, 4.2, 5.0, 6.0]), SweepPlan::default_radii(), Method::Auto).unwrap();
    let report = envelope_check(&plan).unwrap();
    assert_eq!(report.verdict(), Verdict::Pass);
    assert!(report.summaries.iter().all(|s| s.fit.unwrap().slope <= -1.4), "{:?}", report.summaries);
}

#[test]
fn sharpness_at_both_critical_angles() {
    let y = Point::new(0.3, 0.5);
    let report = sharpness_probe(&wp(2.0, 1.0), &y, &SweepPlan::default_radii(), Method::Auto, &QuadSpec::default()).unwrap();
    assert_eq!(report.series.len(), 2);
    assert!((report.series[0].theta - THETA_C).abs() < 1e-15);
    assert!((report.series[1].theta - (PI - THETA_C)).abs() < 1e-15);
    for s in &report.series {
        assert!(s.bounded_below && s.growing, "{s:?}");
        assert_eq!(s.verdict, Verdict::Pass);
    }
}

#[test]
fn sharpness_needs_distinct_wavenumbers() {
    let r = sharpness_probe(&wp(1.0, 1.0), &Point::new(0.3, 0.5), &SweepPlan::default_radii(), Method::Auto, &QuadSpec::default());
    assert!(r.is_err());
}

#[test]
fn residual_uniform_in_source_point() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut ys = Vec::new();
    while ys.len() < 5 {
        let y = Point::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        if y.r() < 1.0 && y.x2.abs() > 0.05 {
            ys.push(y);
        }
    }
    for theta in [THETA_C + 0.5, 4.2] {
        let plan = SweepPlan::new(wp(2.0, 1.0), ys.clone(), dirs(&[theta]), SweepPlan::default_radii(), Method::Auto).unwrap();
        let report = envelope_check(&plan).unwrap();
        let slopes: Vec<f64> = ys.iter().map(|y| slope(&report, theta, y)).collect();
        let spread = slopes.iter().copied().fold(f64::MIN, f64::max) - slopes.iter().copied().fold(f64::MAX, f64::min);
        assert!(spread < 0.1, "theta={theta}: {slopes:?}");
    }
}

#[test]
fn mirror_symmetry_of_slopes() {
    let y = Point::new(0.3, 0.5);
    let theta = THETA_C + 0.2;
    let radii = SweepPlan::default_radii();
    let a = envelope_check(&SweepPlan::new(wp(2.0, 1.0), vec![y], dirs(&[theta]), radii.clone(), Method::Auto).unwrap()).unwrap();
    let b = envelope_check(&SweepPlan::new(wp(2.0, 1.0), vec![y.mirrored()], dirs(&[PI - theta]), radii, Method::Auto).unwrap()).unwrap();
    let (sa, sb) = (slope(&a, theta, &y), slope(&b, PI - theta, &y.mirrored()));
    assert!((sa - sb).abs() < 1e-6, "{sa} {sb}");
}

#[test]
fn swapped_media_map_upper_table_to_lower() {
    let y = Point::new(0.3, 0.5);
    let thetas = [THETA_C, THETA_C + 0.05, THETA_C + 0.5, 2.6];
    let mirrored: Vec<f64> = thetas.iter().map(|t| 2.0 * PI - t).collect();
    let radii = geometric_radii(100.0, 1e4, 9);
    let up = envelope_check(&SweepPlan::new(wp(2.0, 1.0), vec![y], dirs(&thetas), radii.clone(), Method::Auto).unwrap()).unwrap();
    let down = envelope_check(&SweepPlan::new(wp(1.0, 2.0), vec![y.reflected()], dirs(&mirrored), radii, Method::Quadrature).unwrap()).unwrap();
    for (a, b) in up.rows.iter().zip(&down.rows) {
        assert!((a.abs_residual - b.abs_residual).abs() <= 1e-6 * a.abs_residual, "{a:?} {b:?}");
    }
}

#[test]
fn routes_agree_within_budget() {
    let q = QuadSpec::default();
    let w = wp(2.0, 1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..6 {
        let theta = rng.random_range(0.1..PI - 0.1);
        let r = rng.random_range(100.0..1000.0);
        let x = Point::polar(r, theta);
        let y = Point::new(rng.random_range(-0.5..0.5), rng.random_range(0.1..0.8));
        let a = residual(&w, &x, &y, Method::Saddle, &q).unwrap();
        let b = residual(&w, &x, &y, Method::Quadrature, &q).unwrap();
        assert!((a.value - b.value).norm() <= a.error + b.error + 1e-10 * a.field.norm(), "theta={theta} r={r}");
    }
}

#[test]
fn gradient_residual_tracks_value_residual() {
    let y = Point::new(0.3, 0.5);
    let thetas = [THETA_C, THETA_C + 0.5, 4.2];
    let value = SweepPlan::new(wp(2.0, 1.0), vec![y], dirs(&thetas), SweepPlan::default_radii(), Method::Auto).unwrap();
    let grad = value.clone().with_quantity(Quantity::Gradient);
    let a = envelope_check(&value).unwrap();
    let b = envelope_check(&grad).unwrap();
    for t in thetas {
        let (sa, sb) = (slope(&a, t, &y), slope(&b, t, &y));
        assert!((sa - sb).abs() <= 0.15, "theta={t}: {sa} {sb}");
    }
    assert_eq!(b.verdict(), Verdict::Pass);
}

#[test]
fn sweeps_are_deterministic() {
    let y = Point::new(0.3, 0.5);
    let plan = SweepPlan::new(wp(2.0, 1.0), vec![y, y.reflected()], dirs(&[0.7, 4.0]), geometric_radii(100.0, 1000.0, 6), Method::Auto).unwrap();
    let a = serde_json::to_string(&envelope_check(&plan).unwrap()).unwrap();
    let b = serde_json::to_string(&envelope_check(&plan).unwrap()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn sparse_sweeps_are_inconclusive() {
    let plan = SweepPlan::new(wp(2.0, 1.0), vec![Point::new(0.3, 0.5)], dirs(&[1.5]), geometric_radii(100.0, 1000.0, 6), Method::Auto).unwrap();
    assert_eq!(envelope_check(&plan).unwrap().verdict(), Verdict::Inconclusive);
}
