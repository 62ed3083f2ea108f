//! Bessel functions J0, J1, Y0, Y1 and Hankel functions of the first kind
//! for positive real arguments.
//!
//! Three regimes: ascending series below 4, Miller backward recurrence with
//! the Neumann series for Y between 4 and 25, and the Hankel asymptotic
//! expansion beyond.

use std::f64::consts::{FRAC_PI_4, PI};

use crate::error::{GreenError, Result};
use crate::geometry::C64;

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const SERIES_LIMIT: f64 = 4.0;
const ASYMPTOTIC_LIMIT: f64 = 25.0;

/// (J0, J1, Y0, Y1) at x.
#[derive(Debug, Clone, Copy)]
pub struct BesselSet {
    pub j0: f64,
    pub j1: f64,
    pub y0: f64,
    pub y1: f64,
}

fn series(x: f64) -> BesselSet {
    let q = 0.25 * x * x;
    let lg = (0.5 * x).ln() + EULER_GAMMA;
    // t0_k = (-q)^k / (k!)^2, t1_k = (-q)^k / (k! (k+1)!)
    let mut t0 = 1.0;
    let mut t1 = 1.0;
    let mut j0 = 1.0;
    let mut j1s = 1.0;
    let mut y0s = 0.0;
    let mut y1s = 1.0; // (H_0 + H_1) t1_0 with H_0 = 0, H_1 = 1
    let mut h = 0.0;
    for k in 1..60 {
        let kf = k as f64;
        t0 *= -q / (kf * kf);
        t1 *= -q / (kf * (kf + 1.0));
        h += 1.0 / kf;
        j0 += t0;
        j1s += t1;
        y0s += h * t0;
        y1s += (2.0 * h + 1.0 / (kf + 1.0)) * t1;
        if t0.abs() < 1e-18 * j0.abs().max(1e-3) && t1.abs() < 1e-18 {
            break;
        }
    }
    let j1 = 0.5 * x * j1s;
    let y0 = (2.0 / PI) * (lg * j0 - y0s);
    let y1 = (2.0 / PI) * (0.5 * x).ln() * j1 - 2.0 / (PI * x) - (x / (2.0 * PI)) * (y1s - 2.0 * EULER_GAMMA * j1s);
    BesselSet { j0, j1, y0, y1 }
}

fn miller(x: f64) -> BesselSet {
    let mut n = (x + 60.0).ceil() as usize;
    n += n % 2;
    // j[k] ~ J_k(x) up to a common factor
    let mut j = vec![0.0; n + 2];
    j[n] = 1e-30;
    for k in (1..=n).rev() {
        j[k - 1] = 2.0 * k as f64 / x * j[k] - j[k + 1];
        if j[k - 1].abs() > 1e250 {
            for v in j.iter_mut().skip(k - 1) {
                *v *= 1e-250;
            }
        }
    }
    let mut norm = j[0];
    for k in (2..=n).step_by(2) {
        norm += 2.0 * j[k];
    }
    let scale = 1.0 / norm;
    let jj = |k: usize| j[k] * scale;
    let j0 = jj(0);
    let j1 = jj(1);
    let lg = (0.5 * x).ln() + EULER_GAMMA;
    let mut s = 0.0;
    let mut ds = 0.0;
    for k in 1..=(n / 2 - 1) {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let kf = k as f64;
        s += sign * jj(2 * k) / kf;
        ds += sign * 0.5 * (jj(2 * k - 1) - jj(2 * k + 1)) / kf;
    }
    let y0 = (2.0 / PI) * lg * j0 - (4.0 / PI) * s;
    let dy0 = (2.0 / PI) * (j0 / x - lg * j1) - (4.0 / PI) * ds;
    BesselSet { j0, j1, y0, y1: -dy0 }
}

/// e^{-i pi/4} sum_k i^k a_k(nu) / x^k for nu = 0 or 1.
fn hankel_asymptotic(x: f64, order: u32) -> C64 {
    let mu = 4.0 * (order * order) as f64;
    let mut term = C64::new(1.0, 0.0);
    let mut sum = term;
    let mut prev_abs = f64::INFINITY;
    for k in 1..200 {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        term *= C64::new(0.0, (mu - odd * odd) / (8.0 * kf * x));
        let a = term.norm();
        if a > prev_abs {
            break;
        }
        sum += term;
        prev_abs = a;
        if a < 1e-17 {
            break;
        }
    }
    let phase = match order {
        0 => C64::from_polar(1.0, -FRAC_PI_4),
        _ => C64::from_polar(1.0, -3.0 * FRAC_PI_4),
    };
    sum * phase * (2.0 / (PI * x)).sqrt()
}

fn check_arg(x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(GreenError::Domain(format!("Bessel argument must be positive and finite, got {x}")))
    }
}

/// J0, J1, Y0, Y1 at x > 0.
pub fn bessel_set(x: f64) -> Result<BesselSet> {
    check_arg(x)?;
    if x < SERIES_LIMIT {
        Ok(series(x))
    } else if x < ASYMPTOTIC_LIMIT {
        Ok(miller(x))
    } else {
        let e = C64::from_polar(1.0, x);
        let h0 = e * hankel_asymptotic(x, 0);
        let h1 = e * hankel_asymptotic(x, 1);
        Ok(BesselSet { j0: h0.re, y0: h0.im, j1: h1.re, y1: h1.im })
    }
}

/// (H0(x), H1(x)) of the first kind.
pub fn hankel_pair(x: f64) -> Result<(C64, C64)> {
    check_arg(x)?;
    if x >= ASYMPTOTIC_LIMIT {
        let e = C64::from_polar(1.0, x);
        return Ok((e * hankel_asymptotic(x, 0), e * hankel_asymptotic(x, 1)));
    }
    let b = bessel_set(x)?;
    Ok((C64::new(b.j0, b.y0), C64::new(b.j1, b.y1)))
}

/// H0^(1)(x) for x > 0.
pub fn hankel_h0(x: f64) -> Result<C64> {
    Ok(hankel_pair(x)?.0)
}

/// H1^(1)(x) for x > 0.
pub fn hankel_h1(x: f64) -> Result<C64> {
    Ok(hankel_pair(x)?.1)
}
