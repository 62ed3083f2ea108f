//! Sheet-selected square roots and powers.
//!
//! `s1` and `s2` are square roots with vertical cuts (upward for `s1`, downward
//! for `s2`); `s_cut(z, a) = s1(z - a) s2(z + a)` is the physical-sheet root of
//! z^2 - a^2 used by the spectral integrals, and `s_tilde(z, a) = s2(z - a) s2(z + a)`
//! is its continuation across the upward cut at `a`.
//!
//! Arguments whose angle lies within [`CUT_TOLERANCE`] of a cut are rejected
//! instead of being assigned to either side; `s_limit` gives the one-sided
//! values on the cut above `a`.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{GreenError, Result};
use crate::geometry::C64;

/// Angular distance to a cut below which an argument is rejected.
pub const CUT_TOLERANCE: f64 = 1e-13;

/// Side from which the cut above `a` is approached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BranchSide {
    FromRight,
    FromLeft,
}

/// Principal argument in (-pi, pi], treating a negative zero imaginary part as +0.
#[inline]
fn arg(z: C64) -> f64 {
    let im = if z.im == 0.0 { 0.0 } else { z.im };
    im.atan2(z.re)
}

#[inline]
fn normalized(z: C64) -> C64 {
    C64::new(z.re, if z.im == 0.0 { 0.0 } else { z.im })
}

fn check_finite(z: C64) -> Result<()> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(GreenError::Domain(format!("non-finite argument {z}")))
    }
}

/// z^beta = |z|^beta e^{i beta arg z} with arg z in (-pi, pi); 0^beta = 0 for beta > 0.
pub fn principal_power(z: C64, beta: f64) -> Result<C64> {
    check_finite(z)?;
    if z.re == 0.0 && z.im == 0.0 {
        return if beta > 0.0 {
            Ok(C64::new(0.0, 0.0))
        } else {
            Err(GreenError::Domain(format!("0^{beta} with nonpositive exponent")))
        };
    }
    let phi = arg(z);
    if PI - phi.abs() < CUT_TOLERANCE {
        return Err(GreenError::Domain(format!("{z} lies on the cut of z^beta")));
    }
    Ok(C64::from_polar(z.norm().powf(beta), beta * phi))
}

/// Square root with angle in (-3pi/2, pi/2); cut along the upper imaginary axis.
pub fn s1(z: C64) -> Result<C64> {
    check_finite(z)?;
    if z.re == 0.0 && z.im == 0.0 {
        return Ok(z);
    }
    let phi = arg(z);
    if (phi - FRAC_PI_2).abs() < CUT_TOLERANCE {
        return Err(GreenError::Domain(format!("{z} lies on the cut of s1")));
    }
    // angle phi - 2 pi above the cut, i.e. the other root
    let w = normalized(z).sqrt();
    Ok(if phi > FRAC_PI_2 { -w } else { w })
}

/// Square root with angle in (-pi/2, 3pi/2); cut along the lower imaginary axis.
pub fn s2(z: C64) -> Result<C64> {
    check_finite(z)?;
    if z.re == 0.0 && z.im == 0.0 {
        return Ok(z);
    }
    let phi = arg(z);
    if (phi + FRAC_PI_2).abs() < CUT_TOLERANCE {
        return Err(GreenError::Domain(format!("{z} lies on the cut of s2")));
    }
    let w = normalized(z).sqrt();
    Ok(if phi < -FRAC_PI_2 { -w } else { w })
}

fn check_a(a: f64) -> Result<()> {
    if a.is_finite() && a > 0.0 {
        Ok(())
    } else {
        Err(GreenError::Domain(format!("branch point parameter must be positive, got {a}")))
    }
}

/// Physical-sheet root s1(z - a) s2(z + a).
pub fn s_cut(z: C64, a: f64) -> Result<C64> {
    check_a(a)?;
    Ok(s1(z - a)? * s2(z + a)?)
}

/// Continued root s2(z - a) s2(z + a).
pub fn s_tilde(z: C64, a: f64) -> Result<C64> {
    check_a(a)?;
    Ok(s2(z - a)? * s2(z + a)?)
}

/// One-sided limit of `s_cut` on the half-line Re z = a, Im z >= 0.
///
/// From the right the limit equals `s_tilde(z, a)`, from the left its negative.
pub fn s_limit(z: C64, a: f64, side: BranchSide) -> Result<C64> {
    check_a(a)?;
    check_finite(z)?;
    if (z.re - a).abs() > CUT_TOLERANCE * a.max(z.norm()) || z.im < 0.0 {
        return Err(GreenError::Domain(format!(
            "{z} is not on the half-line Re z = {a}, Im z >= 0"
        )));
    }
    let v = s_tilde(C64::new(a, z.im), a)?;
    Ok(match side {
        BranchSide::FromRight => v,
        BranchSide::FromLeft => -v,
    })
}
