//! Real Gamma function (Lanczos, g = 7) with reflection for x < 1/2.

use std::f64::consts::PI;

use crate::error::{GreenError, Result};

#[allow(clippy::excessive_precision)]
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// sin(pi x) with exact zeros at the integers.
pub fn sin_pi(x: f64) -> f64 {
    let r = x.rem_euclid(2.0);
    // fold r in [0, 2) onto [-1/2, 1/2]
    let y = if r <= 0.5 {
        r
    } else if r <= 1.5 {
        1.0 - r
    } else {
        r - 2.0
    };
    (PI * y).sin()
}

fn is_pole(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

fn lanczos(x: f64) -> f64 {
    // valid for x >= 1/2
    let x = x - 1.0;
    let mut a = LANCZOS[0];
    let t = x + 7.5;
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * a
}

/// Gamma function for real arguments.
pub fn gamma_fn(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(GreenError::Domain(format!("Gamma of non-finite argument {x}")));
    }
    if is_pole(x) {
        return Err(GreenError::Pole(x));
    }
    if x < 0.5 {
        Ok(PI / (sin_pi(x) * lanczos(1.0 - x)))
    } else if x > 171.7 {
        Err(GreenError::Domain(format!("Gamma({x}) overflows")))
    } else {
        Ok(lanczos(x))
    }
}

/// 1 / Gamma(x), zero at the poles.
pub fn recip_gamma(x: f64) -> f64 {
    if is_pole(x) {
        0.0
    } else if x < 0.5 {
        sin_pi(x) * lanczos(1.0 - x) / PI
    } else {
        1.0 / lanczos(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn half_integer_values() {
        let sp = PI.sqrt();
        assert!(rel(gamma_fn(0.5).unwrap(), sp) < 1e-14);
        assert!(rel(gamma_fn(-0.5).unwrap(), -2.0 * sp) < 1e-14);
        assert!(rel(gamma_fn(-1.5).unwrap(), 4.0 * sp / 3.0) < 1e-14);
        assert!(rel(gamma_fn(1.5).unwrap(), sp / 2.0) < 1e-14);
    }

    #[test]
    fn factorials() {
        let mut f = 1.0;
        for n in 1..30 {
            assert!(rel(gamma_fn(n as f64).unwrap(), f) < 1e-13, "n = {n}");
            f *= n as f64;
        }
    }

    #[test]
    fn poles_are_rejected() {
        for x in [0.0, -1.0, -7.0] {
            assert_eq!(gamma_fn(x), Err(GreenError::Pole(x)));
            assert_eq!(recip_gamma(x), 0.0);
        }
    }

    #[test]
    fn recurrence_on_grid() {
        let mut x: f64 = -10.0 + 1e-3;
        while x < 10.0 {
            if (x - x.round()).abs() > 1e-6 {
                let lhs = gamma_fn(x + 1.0).unwrap();
                let rhs = x * gamma_fn(x).unwrap();
                assert!(rel(lhs, rhs) < 1e-13, "x = {x}");
            }
            x += 0.0173;
        }
    }

    #[test]
    fn sin_pi_is_exact_at_integers() {
        for n in -5..5 {
            assert_eq!(sin_pi(n as f64), 0.0);
        }
        assert!((sin_pi(0.5) - 1.0).abs() < 1e-16);
        assert!((sin_pi(-0.5) + 1.0).abs() < 1e-16);
        assert!((sin_pi(2.25) - (PI * 0.25).sin()).abs() < 1e-16);
    }
}
