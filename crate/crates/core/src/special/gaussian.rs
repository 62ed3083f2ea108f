//! Gaussian-weighted branch integrals
//! F2(rho, b, beta) = int_R (s - b)^beta e^{i rho s^2} ds and the loop integral
//! F3 around the horizontal cut {Im s = Im b, Re s <= Re b}, in closed form
//! and by direct quadrature.

use std::f64::consts::{FRAC_PI_4, PI};

use crate::branch::principal_power;
use crate::error::{GreenError, Result};
use crate::geometry::C64;
use crate::quadrature::{integrate_intervals, QuadSpec};

use super::gamma::recip_gamma;
use super::parabolic::{parabolic_d, CylinderOrder};

/// Offset of the oracle loop from the cut.
pub const LOOP_OFFSET: f64 = 1e-6;
const ORACLE_TOLERANCE: f64 = 1e-10;

fn check(rho: C64, b: C64, beta: f64) -> Result<()> {
    if !(beta.is_finite() && beta > -1.0) {
        return Err(GreenError::Domain(format!("exponent must exceed -1, got {beta}")));
    }
    if !(rho.im > 0.0 && rho.re.is_finite() && rho.im.is_finite()) {
        return Err(GreenError::Domain(format!("Im rho must be positive, got {rho}")));
    }
    if b.im == 0.0 || !b.re.is_finite() || !b.im.is_finite() {
        return Err(GreenError::Domain(format!("Im b must be nonzero, got {b}")));
    }
    Ok(())
}

fn common_factor(rho: C64, b: C64, beta: f64) -> Result<C64> {
    let half_inv = principal_power(1.0 / (2.0 * rho), 0.5 * (beta + 1.0))?;
    Ok((C64::i() * rho * b * b / 2.0).exp() * half_inv)
}

/// Closed form of F2 through D_beta.
pub fn f2_closed(rho: C64, b: C64, beta: f64) -> Result<C64> {
    check(rho, b, beta)?;
    let root = (2.0 * rho).sqrt();
    let (phase, rot) = if b.im < 0.0 {
        (FRAC_PI_4 * (3.0 * beta + 1.0), FRAC_PI_4)
    } else {
        (FRAC_PI_4 * (1.0 - beta), -3.0 * FRAC_PI_4)
    };
    let d = parabolic_d(CylinderOrder::new(beta)?, root * b * C64::from_polar(1.0, rot))?;
    Ok(common_factor(rho, b, beta)? * (2.0 * PI).sqrt() * C64::from_polar(1.0, phase) * d)
}

/// Closed form of F3 through D_{-beta-1}; vanishes for non-negative integer beta.
pub fn f3_closed(rho: C64, b: C64, beta: f64) -> Result<C64> {
    check(rho, b, beta)?;
    let rg = recip_gamma(-beta);
    if rg == 0.0 {
        return Ok(C64::new(0.0, 0.0));
    }
    let root = (2.0 * rho).sqrt();
    let d = parabolic_d(CylinderOrder::new(-beta - 1.0)?, root * b * C64::from_polar(1.0, 3.0 * FRAC_PI_4))?;
    let sign = b.im.signum();
    Ok(common_factor(rho, b, beta)? * C64::from_polar(2.0 * PI * rg * sign, FRAC_PI_4 * (beta + 3.0)) * d)
}

fn oracle_spec() -> QuadSpec {
    QuadSpec { rel_tol: 1e-13, abs_tol: 1e-16, ..QuadSpec::default() }
}

fn checked(value: C64, error: f64) -> Result<C64> {
    let tol = ORACLE_TOLERANCE * value.norm().max(1e-300);
    if error > tol {
        Err(GreenError::Convergence { estimate: error, tolerance: tol })
    } else {
        Ok(value)
    }
}

/// F2 by adaptive quadrature on the real line.
pub fn f2_oracle(rho: C64, b: C64, beta: f64) -> Result<C64> {
    check(rho, b, beta)?;
    let reach = (110.0 / rho.im).sqrt() + b.norm() + 1.0;
    let g = |s: f64| Ok(principal_power(C64::new(s, 0.0) - b, beta)? * (C64::i() * rho * s * s).exp());
    let mid = b.re.clamp(-reach / 2.0, reach / 2.0);
    let r = integrate_intervals(g, &[(-reach, mid, 16), (mid, reach, 16)], &oracle_spec())?;
    checked(r.value, r.error)
}

fn loop_integral(rho: C64, b: C64, beta: f64, delta: f64) -> Result<C64> {
    let g = |s: C64| -> Result<C64> { Ok(principal_power(s - b, beta)? * (C64::i() * rho * s * s).exp()) };
    // Im(rho (b - t)^2) = a t^2 - 2 c t + e; stop where it exceeds ~100
    let a = rho.im;
    let c = (rho * b).im;
    let e = (rho * b * b).im;
    let vertex = c / a;
    let floor = e - c * c / a;
    let reach = vertex.max(0.0) + ((110.0 - floor).max(0.0) / a).sqrt() + 1.0;
    let rays = |t: f64| {
        let lower = g(b - t - C64::new(0.0, delta))?;
        let upper = g(b - t + C64::new(0.0, delta))?;
        Ok(lower - upper)
    };
    let near = 10.0 * delta;
    let r1 = integrate_intervals(rays, &[(0.0, near, 4), (near, 1e-2, 8), (1e-2, reach, 32)], &oracle_spec())?;
    let arc = |phi: f64| {
        let e = C64::from_polar(delta, phi);
        Ok(g(b + e)? * C64::i() * e)
    };
    let r2 = integrate_intervals(arc, &[(-PI / 2.0, PI / 2.0, 2)], &oracle_spec())?;
    checked(r1.value + r2.value, r1.error + r2.error)
}

/// F3 by quadrature over a keyhole loop at offset 1e-6 from the cut, with
/// Richardson extrapolation in the offset.
///
/// The loop runs counterclockwise about b when Im b > 0 and clockwise when
/// Im b < 0.
pub fn f3_oracle(rho: C64, b: C64, beta: f64) -> Result<C64> {
    check(rho, b, beta)?;
    let l1 = loop_integral(rho, b, beta, LOOP_OFFSET)?;
    let l2 = loop_integral(rho, b, beta, LOOP_OFFSET / 2.0)?;
    Ok((l2 * 2.0 - l1) * b.im.signum())
}
