//! Far-field patterns G^inf and H^inf, Fresnel-type reflection and
//! transmission coefficients, and the plane-wave reference field.

use std::f64::consts::{FRAC_PI_4, PI};

use serde::Serialize;

use crate::branch::s_cut;
use crate::error::{GreenError, Result};
use crate::geometry::{Half, Pair, Point, WaveProfile, C64};

/// Angular distance from {0, pi} below which a direction counts as lateral.
pub const LATERAL_TOLERANCE: f64 = 1e-12;

/// Observation direction off the interface.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FarDirection {
    theta: f64,
}

impl FarDirection {
    pub fn new(theta: f64) -> Result<Self> {
        if !theta.is_finite() {
            return Err(GreenError::Domain(format!("non-finite direction {theta}")));
        }
        let t = theta.rem_euclid(2.0 * PI);
        let to_axis = t.min((t - PI).abs()).min(2.0 * PI - t);
        if to_axis < LATERAL_TOLERANCE {
            return Err(GreenError::LateralDirection(theta));
        }
        Ok(Self { theta: t })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn unit(&self) -> [f64; 2] {
        let (s, c) = self.theta.sin_cos();
        [c, s]
    }

    pub fn half(&self) -> Half {
        if self.theta < PI {
            Half::Upper
        } else {
            Half::Lower
        }
    }
}

/// Incident plane wave e^{i k+ x . d} from the upper half-plane.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct IncidentSpec {
    pub theta_d: f64,
    pub d: [f64; 2],
    pub d_r: [f64; 2],
    /// Transmitted direction, complex beyond the critical angle.
    pub d_t: [C64; 2],
}

impl IncidentSpec {
    pub fn new(theta_d: f64, wp: &WaveProfile) -> Result<Self> {
        if !(theta_d > PI && theta_d < 2.0 * PI) {
            return Err(GreenError::Domain(format!("incident angle {theta_d} outside (pi, 2 pi)")));
        }
        let (s, c) = theta_d.sin_cos();
        let n = wp.n();
        let sv = s_cut(C64::new(c, 0.0), n)?;
        Ok(Self {
            theta_d,
            d: [c, s],
            d_r: [c, -s],
            d_t: [C64::new(c / n, 0.0), -C64::i() * sv / n],
        })
    }

    /// True when the transmitted wave propagates (real d_t).
    pub fn transmitted_propagates(&self, wp: &WaveProfile) -> bool {
        self.d[0].abs() <= wp.n()
    }
}

/// Critical angle arccos(n) for k+ > k-, arccos(1/n) for k+ < k-.
pub fn critical_angle(wp: &WaveProfile) -> Result<f64> {
    wp.theta_c().ok_or(GreenError::NoCriticalAngle)
}

fn check_sin(theta: f64) -> Result<f64> {
    let s = theta.sin();
    if s.abs() < LATERAL_TOLERANCE {
        return Err(GreenError::LateralDirection(theta));
    }
    Ok(s)
}

/// R(theta) = (i sin + S(cos, n)) / (i sin - S(cos, n)).
pub fn refl_coeff(theta: f64, wp: &WaveProfile) -> Result<C64> {
    let s = check_sin(theta)?;
    let sv = s_cut(C64::new(theta.cos(), 0.0), wp.n())?;
    let is = C64::new(0.0, s);
    Ok((is + sv) / (is - sv))
}

/// T(theta) = R(theta) + 1.
pub fn trans_coeff(theta: f64, wp: &WaveProfile) -> Result<C64> {
    Ok(refl_coeff(theta, wp)? + 1.0)
}

/// R~(theta) = (i sin - S(cos, 1/n)) / (i sin + S(cos, 1/n)).
pub fn refl_tilde(theta: f64, wp: &WaveProfile) -> Result<C64> {
    let s = check_sin(theta)?;
    let sv = s_cut(C64::new(theta.cos(), 0.0), 1.0 / wp.n())?;
    let is = C64::new(0.0, s);
    Ok((is - sv) / (is + sv))
}

/// T~(theta) = R~(theta) + 1.
pub fn trans_tilde(theta: f64, wp: &WaveProfile) -> Result<C64> {
    Ok(refl_tilde(theta, wp)? + 1.0)
}

fn source_half(y: &Point) -> Result<Half> {
    match y.half() {
        Half::OnInterface => Err(GreenError::Interface(format!("source point ({}, {})", y.x1, y.x2))),
        h => Ok(h),
    }
}

/// One term of a pattern: amplitude times the gradient direction.
struct Term {
    amp: C64,
    grad: [C64; 2],
}

fn pattern_terms(dir: &FarDirection, y: &Point, wp: &WaveProfile) -> Result<(f64, Vec<Term>)> {
    let th = dir.theta();
    let (s, c) = th.sin_cos();
    let ex = |k: f64, a: f64, b: f64| (-C64::i() * k * (c * a + s * b)).exp();
    let re = |v: f64| C64::new(v, 0.0);
    let out = match (dir.half(), source_half(y)?) {
        (Half::Upper, Half::Upper) => {
            let k = wp.k_plus();
            let r = refl_coeff(th, wp)?;
            let direct = Term { amp: ex(k, y.x1, y.x2), grad: [re(c), re(s)] };
            let image = Term { amp: r * ex(k, y.x1, -y.x2), grad: [re(c), re(-s)] };
            (k, vec![direct, image])
        }
        (Half::Upper, _) => {
            let k = wp.k_plus();
            let sv = s_cut(re(c), wp.n())?;
            let amp = trans_coeff(th, wp)? * (-C64::i() * k * (y.x1 * c + C64::i() * y.x2 * sv)).exp();
            (k, vec![Term { amp, grad: [re(c), C64::i() * sv] }])
        }
        (_, Half::Upper) => {
            let k = wp.k_minus();
            let sv = s_cut(re(c), 1.0 / wp.n())?;
            let amp = trans_tilde(th, wp)? * (-C64::i() * k * (y.x1 * c - C64::i() * y.x2 * sv)).exp();
            (k, vec![Term { amp, grad: [re(c), -C64::i() * sv] }])
        }
        _ => {
            let k = wp.k_minus();
            let r = refl_tilde(th, wp)?;
            let direct = Term { amp: ex(k, y.x1, y.x2), grad: [re(c), re(s)] };
            let image = Term { amp: r * ex(k, y.x1, -y.x2), grad: [re(c), re(-s)] };
            (k, vec![direct, image])
        }
    };
    Ok(out)
}

/// Far-field pattern G^inf(x_hat, y).
pub fn g_farfield(dir: &FarDirection, y: &Point, wp: &WaveProfile) -> Result<C64> {
    let (k, terms) = pattern_terms(dir, y, wp)?;
    let pre = C64::from_polar(1.0 / (8.0 * PI * k).sqrt(), FRAC_PI_4);
    Ok(terms.iter().map(|t| t.amp).sum::<C64>() * pre)
}

/// Gradient pattern H^inf(x_hat, y) = grad_y G^inf(x_hat, y).
pub fn h_farfield(dir: &FarDirection, y: &Point, wp: &WaveProfile) -> Result<Pair> {
    let (k, terms) = pattern_terms(dir, y, wp)?;
    let pre = C64::from_polar((k / (8.0 * PI)).sqrt(), -FRAC_PI_4);
    let mut out = Pair::zero();
    for t in &terms {
        out = out + Pair(t.amp * t.grad[0], t.amp * t.grad[1]);
    }
    Ok(out.scale(pre))
}

/// Wavenumber of the half-plane a direction points into.
pub fn pattern_wavenumber(dir: &FarDirection, wp: &WaveProfile) -> f64 {
    wp.k_of(dir.half())
}

/// Reference field u0: incident plus reflected wave above, transmitted wave below.
pub fn reference_field(inc: &IncidentSpec, x: &Point, wp: &WaveProfile) -> Result<C64> {
    let k = wp.k_plus();
    let th = PI + inc.theta_d;
    match x.half() {
        Half::OnInterface => Err(GreenError::Interface(format!("field point ({}, {})", x.x1, x.x2))),
        Half::Upper => {
            let ui = (C64::i() * k * (x.x1 * inc.d[0] + x.x2 * inc.d[1])).exp();
            let ur = refl_coeff(th, wp)? * (C64::i() * k * (x.x1 * inc.d_r[0] + x.x2 * inc.d_r[1])).exp();
            Ok(ui + ur)
        }
        Half::Lower => {
            let phase = C64::i() * wp.k_minus() * (inc.d_t[0] * x.x1 + inc.d_t[1] * x.x2);
            Ok(trans_coeff(th, wp)? * phase.exp())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn wp() -> WaveProfile {
        WaveProfile::new(2.0, 1.0).unwrap()
    }

    fn close(a: C64, b: C64, tol: f64) -> bool {
        (a - b).norm() <= tol * b.norm().max(1e-300)
    }

    #[test]
    fn critical_angle_examples() {
        assert!((critical_angle(&wp()).unwrap() - PI / 3.0).abs() < 1e-15);
        assert!((critical_angle(&wp().swapped()).unwrap() - PI / 3.0).abs() < 1e-15);
        let eq = WaveProfile::new(1.0, 1.0).unwrap();
        assert_eq!(critical_angle(&eq), Err(GreenError::NoCriticalAngle));
    }

    #[test]
    fn coefficient_examples() {
        for w in [wp(), wp().swapped(), WaveProfile::new(3.0, 1.3).unwrap()] {
            let n = w.n();
            let r = refl_coeff(FRAC_PI_2, &w).unwrap();
            assert!(close(r, C64::new((1.0 - n) / (1.0 + n), 0.0), 1e-15));
            let rt = refl_tilde(1.5 * PI, &w).unwrap();
            assert!(close(rt, C64::new((n - 1.0) / (n + 1.0), 0.0), 1e-15));
            for i in 1..100 {
                let th = PI * i as f64 / 100.0;
                let d = trans_coeff(th, &w).unwrap() - refl_coeff(th, &w).unwrap();
                assert!((d - 1.0).norm() < 1e-15);
                let dual = refl_tilde(2.0 * PI - th, &w).unwrap();
                assert!(close(dual, refl_coeff(th, &w.swapped()).unwrap(), 1e-14));
                let dt = trans_tilde(PI + th, &w).unwrap() - refl_tilde(PI + th, &w).unwrap();
                assert!((dt - 1.0).norm() < 1e-15);
            }
        }
        let w = wp();
        let tc = critical_angle(&w).unwrap();
        assert!(close(refl_coeff(tc, &w).unwrap(), C64::new(1.0, 0.0), 1e-7));
        assert!(close(trans_coeff(tc, &w).unwrap(), C64::new(2.0, 0.0), 1e-7));
        assert!(refl_coeff(0.0, &w).is_err());
    }

    #[test]
    fn reflection_modulus() {
        let w = wp();
        let tc = critical_angle(&w).unwrap();
        for i in 1..1000 {
            let th = PI * i as f64 / 1000.0;
            let m = refl_coeff(th, &w).unwrap().norm();
            let band = th < tc || th > PI - tc;
            if band {
                assert!((m - 1.0).abs() < 1e-14, "theta={th}");
            } else {
                assert!(m <= 1.0 + 1e-14, "theta={th}");
            }
        }
        for i in 1..1000 {
            let th = PI * i as f64 / 1000.0;
            assert!(refl_coeff(th, &w.swapped()).unwrap().norm() <= 1.0 + 1e-14);
        }
    }

    #[test]
    fn lateral_directions_rejected() {
        for th in [0.0, PI, 2.0 * PI, -PI] {
            assert!(matches!(FarDirection::new(th), Err(GreenError::LateralDirection(_))));
        }
        assert_eq!(FarDirection::new(1.0).unwrap().half(), Half::Upper);
        assert_eq!(FarDirection::new(4.0).unwrap().half(), Half::Lower);
    }

    #[test]
    fn vertical_pattern_example() {
        let w = wp();
        let h = 0.7;
        let y = Point::new(0.0, h);
        let v = g_farfield(&FarDirection::new(FRAC_PI_2).unwrap(), &y, &w).unwrap();
        let k = 2.0;
        let r = refl_coeff(FRAC_PI_2, &w).unwrap();
        let expect = C64::from_polar(1.0 / (8.0 * PI * k).sqrt(), FRAC_PI_4)
            * ((-C64::i() * k * h).exp() + r * (C64::i() * k * h).exp());
        assert!(close(v, expect, 1e-15));
    }

    #[test]
    fn equal_wavenumbers_give_plane_wave() {
        let w = WaveProfile::new(1.5, 1.5).unwrap();
        let y = Point::new(0.4, 0.9);
        for th in [0.3, 1.9, 3.5, 5.0] {
            let dir = FarDirection::new(th).unwrap();
            let v = g_farfield(&dir, &y, &w).unwrap();
            let [c, s] = dir.unit();
            let e = (-C64::i() * 1.5 * (c * y.x1 + s * y.x2)).exp();
            let expect = C64::from_polar(1.0 / (8.0 * PI * 1.5).sqrt(), FRAC_PI_4) * e;
            assert!(close(v, expect, 1e-14), "theta={th}");
            let hv = h_farfield(&dir, &y, &w).unwrap();
            let hpre = C64::from_polar((1.5 / (8.0 * PI)).sqrt(), -FRAC_PI_4) * e;
            assert!((hv - Pair(hpre * c, hpre * s)).norm() < 1e-14);
        }
    }

    #[test]
    fn gradient_pattern_is_source_gradient() {
        let h = 1e-6;
        for w in [wp(), wp().swapped()] {
            for y in [Point::new(0.3, 0.5), Point::new(-0.4, -0.8)] {
                for i in 0..40 {
                    let th = 0.05 + i as f64 * (2.0 * PI - 0.1) / 39.0;
                    let Ok(dir) = FarDirection::new(th) else { continue };
                    let g = |d1: f64, d2: f64| g_farfield(&dir, &y.translated(d1, d2), &w).unwrap();
                    let fd = Pair((g(h, 0.0) - g(-h, 0.0)) / (2.0 * h), (g(0.0, h) - g(0.0, -h)) / (2.0 * h));
                    let an = h_farfield(&dir, &y, &w).unwrap();
                    assert!((an - fd).norm() < 1e-7 * an.norm().max(1e-3), "theta={th} y={y:?}");
                }
            }
        }
    }

    #[test]
    fn evanescent_branch_is_finite_and_damped() {
        let w = wp();
        let y = Point::new(0.2, 3.0);
        // lower direction beyond the critical angle of the swapped medium
        let dir = FarDirection::new(2.0 * PI - 0.2).unwrap();
        let v = g_farfield(&dir, &y, &w).unwrap();
        assert!(v.norm().is_finite());
        let far = g_farfield(&dir, &Point::new(0.2, 6.0), &w).unwrap();
        assert!(far.norm() < v.norm());
    }

    #[test]
    fn pattern_is_continuous_in_angle() {
        for w in [wp(), wp().swapped()] {
            let y = Point::new(0.3, 0.5);
            let scale = 1.0 / (8.0 * PI * w.k_min()).sqrt();
            for (a, b) in [(0.01, PI - 0.01), (PI + 0.01, 2.0 * PI - 0.01)] {
                let mut prev: Option<C64> = None;
                for i in 0..=1000 {
                    let th = a + (b - a) * i as f64 / 1000.0;
                    let v = g_farfield(&FarDirection::new(th).unwrap(), &y, &w).unwrap();
                    if let Some(p) = prev {
                        // square-root behaviour at the critical angles
                        assert!((v - p).norm() < 4.0 * scale * ((b - a) / 1000.0).sqrt(), "theta={th}");
                    }
                    prev = Some(v);
                }
            }
        }
    }

    #[test]
    fn reference_field_transmission_conditions() {
        for w in [wp(), wp().swapped()] {
            for td in [1.1 * PI, 1.3 * PI, 1.5 * PI, 1.85 * PI] {
                let inc = IncidentSpec::new(td, &w).unwrap();
                for x1 in [-1.0, 0.0, 2.5] {
                    let eps = 1e-7;
                    let up = reference_field(&inc, &Point::new(x1, eps), &w).unwrap();
                    let down = reference_field(&inc, &Point::new(x1, -eps), &w).unwrap();
                    assert!((up - down).norm() < 1e-6 * up.norm());
                    let h = 1e-5;
                    let f = |x2: f64| reference_field(&inc, &Point::new(x1, x2), &w).unwrap();
                    // quadratic through the three one-sided samples, differentiated at 0
                    let du = (-5.0 * f(h) + 8.0 * f(2.0 * h) - 3.0 * f(3.0 * h)) / (2.0 * h);
                    let dd = (5.0 * f(-h) - 8.0 * f(-2.0 * h) + 3.0 * f(-3.0 * h)) / (2.0 * h);
                    assert!((du - dd).norm() < 1e-5 * du.norm().max(1.0), "td={td} x1={x1}: {du} {dd}");
                }
            }
        }
    }

    #[test]
    fn reference_field_solves_helmholtz() {
        let w = wp();
        let h = 1e-3;
        for td in [1.2 * PI, 1.9 * PI] {
            let inc = IncidentSpec::new(td, &w).unwrap();
            for x in [Point::new(0.3, 0.8), Point::new(-0.5, -0.9)] {
                let k = w.k_of(x.half());
                let f = |a: f64, b: f64| reference_field(&inc, &x.translated(a, b), &w).unwrap();
                let lap = (f(h, 0.0) + f(-h, 0.0) + f(0.0, h) + f(0.0, -h) - f(0.0, 0.0) * 4.0) / (h * h);
                let res = lap + f(0.0, 0.0) * (k * k);
                assert!(res.norm() < 1e-5 * k.powi(4) * f(0.0, 0.0).norm().max(1.0), "td={td} x={x:?}");
            }
        }
        assert!(IncidentSpec::new(0.5, &w).is_err());
        assert!(reference_field(&IncidentSpec::new(4.0, &w).unwrap(), &Point::new(1.0, 0.0), &w).is_err());
    }
}
