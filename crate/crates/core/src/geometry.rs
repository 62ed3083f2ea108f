//! Wave profiles and planar points.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{GreenError, Result};

/// Double precision complex value used throughout.
pub type C64 = Complex64;

/// Which wavenumber is larger.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WaveOrdering {
    PlusGreater,
    PlusLess,
    Equal,
}

/// Wavenumbers of the upper (`k_plus`) and lower (`k_minus`) half-planes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaveProfile {
    k_plus: f64,
    k_minus: f64,
}

impl WaveProfile {
    pub fn new(k_plus: f64, k_minus: f64) -> Result<Self> {
        if !(k_plus.is_finite() && k_plus > 0.0 && k_minus.is_finite() && k_minus > 0.0) {
            return Err(GreenError::Domain(format!(
                "wavenumbers must be positive and finite, got k+ = {k_plus}, k- = {k_minus}"
            )));
        }
        Ok(Self { k_plus, k_minus })
    }

    pub fn k_plus(&self) -> f64 {
        self.k_plus
    }

    pub fn k_minus(&self) -> f64 {
        self.k_minus
    }

    /// Ratio k- / k+.
    pub fn n(&self) -> f64 {
        self.k_minus / self.k_plus
    }

    pub fn ordering(&self) -> WaveOrdering {
        if self.k_plus > self.k_minus {
            WaveOrdering::PlusGreater
        } else if self.k_plus < self.k_minus {
            WaveOrdering::PlusLess
        } else {
            WaveOrdering::Equal
        }
    }

    /// Critical angle in (0, pi/2), `None` for equal wavenumbers.
    pub fn theta_c(&self) -> Option<f64> {
        match self.ordering() {
            WaveOrdering::PlusGreater => Some(self.n().acos()),
            WaveOrdering::PlusLess => Some((1.0 / self.n()).acos()),
            WaveOrdering::Equal => None,
        }
    }

    /// Profile with the two media exchanged.
    pub fn swapped(&self) -> Self {
        Self { k_plus: self.k_minus, k_minus: self.k_plus }
    }

    /// Wavenumber of the half-plane containing `p`.
    pub fn k_of(&self, half: Half) -> f64 {
        match half {
            Half::Lower => self.k_minus,
            _ => self.k_plus,
        }
    }

    pub fn k_max(&self) -> f64 {
        self.k_plus.max(self.k_minus)
    }

    pub fn k_min(&self) -> f64 {
        self.k_plus.min(self.k_minus)
    }
}

/// Half-plane tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Half {
    Upper,
    Lower,
    OnInterface,
}

/// A planar point with cached polar form. Serves as field point and source point.
#[derive(Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x1: f64,
    pub x2: f64,
    r: f64,
    theta: f64,
}

pub type FieldPoint = Point;
pub type SourcePoint = Point;

impl Point {
    pub fn new(x1: f64, x2: f64) -> Self {
        let r = x1.hypot(x2);
        let mut theta = x2.atan2(x1);
        if theta < 0.0 {
            theta += 2.0 * PI;
        }
        if theta >= 2.0 * PI {
            theta = 0.0;
        }
        Self { x1, x2, r, theta }
    }

    pub fn polar(r: f64, theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        let mut p = Self::new(r * c, r * s);
        p.r = r.abs();
        p.theta = theta.rem_euclid(2.0 * PI);
        p
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    /// Polar angle in [0, 2 pi).
    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn half(&self) -> Half {
        if self.x2 > 0.0 {
            Half::Upper
        } else if self.x2 < 0.0 {
            Half::Lower
        } else {
            Half::OnInterface
        }
    }

    /// Reflection across the interface, (x1, -x2).
    pub fn reflected(&self) -> Self {
        Self::new(self.x1, -self.x2)
    }

    /// Mirror across the vertical axis, (-x1, x2).
    pub fn mirrored(&self) -> Self {
        Self::new(-self.x1, self.x2)
    }

    pub fn dist(&self, other: &Point) -> f64 {
        (self.x1 - other.x1).hypot(self.x2 - other.x2)
    }

    pub fn translated(&self, d1: f64, d2: f64) -> Self {
        Self::new(self.x1 + d1, self.x2 + d2)
    }

    pub(crate) fn require_off_interface(&self, what: &str) -> Result<()> {
        if !(self.x1.is_finite() && self.x2.is_finite()) {
            return Err(GreenError::Domain(format!("{what} has non-finite coordinates")));
        }
        if self.x2 == 0.0 {
            return Err(GreenError::Interface(format!("{what} = ({}, {})", self.x1, self.x2)));
        }
        Ok(())
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x1, self.x2)
    }
}

/// Pair of complex numbers, used for gradients.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Pair(pub C64, pub C64);

impl Pair {
    pub fn zero() -> Self {
        Pair(C64::new(0.0, 0.0), C64::new(0.0, 0.0))
    }

    pub fn norm(&self) -> f64 {
        self.0.norm().hypot(self.1.norm())
    }

    pub fn scale(&self, c: C64) -> Self {
        Pair(self.0 * c, self.1 * c)
    }

    /// Euclidean dot product with a real vector.
    pub fn dot_real(&self, v: [f64; 2]) -> C64 {
        self.0 * v[0] + self.1 * v[1]
    }

    pub fn to_array(self) -> [C64; 2] {
        [self.0, self.1]
    }
}

impl Add for Pair {
    type Output = Pair;
    fn add(self, o: Pair) -> Pair {
        Pair(self.0 + o.0, self.1 + o.1)
    }
}

impl Sub for Pair {
    type Output = Pair;
    fn sub(self, o: Pair) -> Pair {
        Pair(self.0 - o.0, self.1 - o.1)
    }
}

impl Neg for Pair {
    type Output = Pair;
    fn neg(self) -> Pair {
        Pair(-self.0, -self.1)
    }
}

impl Mul<f64> for Pair {
    type Output = Pair;
    fn mul(self, a: f64) -> Pair {
        Pair(self.0 * a, self.1 * a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profile_derived_quantities() {
        let wp = WaveProfile::new(2.0, 1.0).unwrap();
        assert_eq!(wp.ordering(), WaveOrdering::PlusGreater);
        assert!((wp.theta_c().unwrap() - PI / 3.0).abs() < 1e-15);
        let sw = wp.swapped();
        assert_eq!(sw.ordering(), WaveOrdering::PlusLess);
        assert!((sw.theta_c().unwrap() - PI / 3.0).abs() < 1e-15);
        assert!(WaveProfile::new(1.0, 1.0).unwrap().theta_c().is_none());
        assert!(WaveProfile::new(0.0, 1.0).is_err());
        assert!(WaveProfile::new(1.0, f64::NAN).is_err());
    }

    #[test]
    fn polar_cache_matches_cartesian() {
        for &(a, b) in &[(1.0, 2.0), (-3.0, 0.5), (0.2, -4.0), (-1.0, -1.0)] {
            let p = Point::new(a, b);
            let q = Point::polar(p.r(), p.theta());
            assert!((q.x1 - a).abs() <= 1e-15 * p.r());
            assert!((q.x2 - b).abs() <= 1e-15 * p.r());
            assert!(p.theta() >= 0.0 && p.theta() < 2.0 * PI);
        }
        assert_eq!(Point::new(1.0, 0.0).half(), Half::OnInterface);
        assert_eq!(Point::new(1.0, -1e-300).half(), Half::Lower);
    }
}
