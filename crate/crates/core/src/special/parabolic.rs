//! Parabolic cylinder functions D_nu(z) for real order and complex argument.
//!
//! Regimes: Hermite closed form for non-negative integer orders, the Kummer
//! reduction for |z| <= 3, the Laplace integral (with upward recurrence for
//! nu >= 0) for Re z >= 0, and the connection formula for Re z < 0.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{GreenError, Result};
use crate::geometry::C64;
use crate::quadrature::{integrate_intervals, QuadSpec};

use super::gamma::{gamma_fn, recip_gamma};

/// Largest |z| accepted by [`parabolic_d`].
pub const MAX_ARGUMENT: f64 = 30.0;
const KUMMER_RADIUS: f64 = 3.0;

/// Order of a parabolic cylinder function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CylinderOrder(f64);

impl CylinderOrder {
    pub fn new(beta: f64) -> Result<Self> {
        if beta.is_finite() {
            Ok(Self(beta))
        } else {
            Err(GreenError::Domain(format!("cylinder order must be finite, got {beta}")))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Kummer's M(a, b, w) and the sum of term moduli.
pub fn kummer(a: f64, b: f64, w: C64) -> (C64, f64) {
    let mut term = C64::new(1.0, 0.0);
    let mut sum = term;
    let mut abs_sum = 1.0;
    for k in 0..2000 {
        let kf = k as f64;
        term *= w * ((a + kf) / ((b + kf) * (kf + 1.0)));
        sum += term;
        abs_sum += term.norm();
        if term.norm() < 1e-17 * sum.norm().max(1e-300) && kf > w.norm() {
            break;
        }
        if term.re == 0.0 && term.im == 0.0 {
            break;
        }
    }
    (sum, abs_sum)
}

fn hermite(n: usize, z: C64) -> C64 {
    let mut h0 = C64::new(1.0, 0.0);
    if n == 0 {
        return (-z * z / 4.0).exp();
    }
    let mut h1 = z;
    for k in 1..n {
        let h2 = z * h1 - h0 * k as f64;
        h0 = h1;
        h1 = h2;
    }
    h1 * (-z * z / 4.0).exp()
}

fn kummer_form(nu: f64, z: C64) -> C64 {
    let w = z * z / 2.0;
    let (m1, _) = kummer(-nu / 2.0, 0.5, w);
    let (m2, _) = kummer((1.0 - nu) / 2.0, 1.5, w);
    let c1 = PI.sqrt() * recip_gamma((1.0 - nu) / 2.0);
    let c2 = (2.0 * PI).sqrt() * recip_gamma(-nu / 2.0);
    (m1 * c1 - z * m2 * c2) * 2f64.powf(nu / 2.0) * (-z * z / 4.0).exp()
}

/// D_nu(z) for nu < 0 and Re z >= 0 from the Laplace integral
/// e^{-z^2/4} / Gamma(-nu) int_0^inf t^{-nu-1} e^{-z t - t^2/2} dt.
fn laplace_negative(nu: f64, z: C64) -> Result<C64> {
    let spec = QuadSpec { rel_tol: 1e-13, abs_tol: 1e-300, ..QuadSpec::default() };
    let t_max: f64 = 12.0;
    let value = if nu > -1.0 {
        // t = u^p with p = -1/nu removes the endpoint singularity
        let p = -1.0 / nu;
        let f = |u: f64| {
            let t = u.powf(p);
            Ok((-z * t - 0.5 * t * t).exp() * p)
        };
        let u_max = t_max.powf(1.0 / p);
        integrate_intervals(f, &[(0.0, u_max, 8)], &spec)?.value
    } else {
        // t = u^2
        let f = |u: f64| {
            let t = u * u;
            Ok((-z * t - 0.5 * t * t).exp() * (2.0 * u.powf(-2.0 * nu - 1.0)))
        };
        integrate_intervals(f, &[(0.0, t_max.sqrt(), 8)], &spec)?.value
    };
    Ok(value * (-z * z / 4.0).exp() / gamma_fn(-nu)?)
}

fn right_half(nu: f64, z: C64) -> Result<C64> {
    if nu <= -0.5 {
        return laplace_negative(nu, z);
    }
    // D_{mu+1} = z D_mu - mu D_{mu-1}, starting from orders at most -1/2
    let steps = (nu + 0.5).ceil() as usize;
    let mu0 = nu - steps as f64;
    let mut d_prev = laplace_negative(mu0 - 1.0, z)?;
    let mut d = laplace_negative(mu0, z)?;
    let mut mu = mu0;
    for _ in 0..steps {
        let next = z * d - d_prev * mu;
        d_prev = d;
        d = next;
        mu += 1.0;
    }
    Ok(d)
}

fn is_nonneg_integer(nu: f64) -> bool {
    nu >= 0.0 && nu == nu.floor() && nu < 1e6
}

fn eval(nu: f64, z: C64) -> Result<C64> {
    if is_nonneg_integer(nu) {
        return Ok(hermite(nu as usize, z));
    }
    if z.norm() <= KUMMER_RADIUS {
        return Ok(kummer_form(nu, z));
    }
    if z.re >= 0.0 {
        return right_half(nu, z);
    }
    // connection to arguments with nonnegative real part
    let c = (2.0 * PI).sqrt() * recip_gamma(-nu);
    if z.im <= 0.0 {
        let a = C64::from_polar(1.0, -PI * nu) * right_half(nu, -z)?;
        let b = C64::from_polar(c, -FRAC_PI_2 * (nu + 1.0)) * right_half(-nu - 1.0, C64::i() * z)?;
        Ok(a + b)
    } else {
        let a = C64::from_polar(1.0, PI * nu) * right_half(nu, -z)?;
        let b = C64::from_polar(c, FRAC_PI_2 * (nu + 1.0)) * right_half(-nu - 1.0, -C64::i() * z)?;
        Ok(a + b)
    }
}

/// Parabolic cylinder function D_beta(z) for |z| <= 30.
pub fn parabolic_d(beta: CylinderOrder, z: C64) -> Result<C64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(GreenError::Domain(format!("non-finite argument {z}")));
    }
    if z.norm() > MAX_ARGUMENT {
        return Err(GreenError::Accuracy(format!(
            "|z| = {} exceeds the validated range {MAX_ARGUMENT} of D_nu",
            z.norm()
        )));
    }
    eval(beta.value(), z)
}
