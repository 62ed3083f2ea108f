//! Spectral (Sommerfeld) evaluation of the layered Green function and its
//! source gradient for all four half-plane placements.
//!
//! The integrands are even in the horizontal wavenumber apart from the factor
//! e^{i xi (x1 - y1)}, so the real line is folded onto [0, inf) and split at the
//! two branch points. Each piece uses a substitution that absorbs the square
//! root behaviour at its ends:
//!
//! * [0, k_lo]: xi = k_lo sin(phi)
//! * [k_lo, k_hi]: xi = k_lo + (k_hi - k_lo)(1 - cos(phi))/2
//! * tail: xi = k_hi cosh(t), or xi = k_hi + tau^2 for small decay heights
//!
//! Distances to the branch points are carried through the substitution so
//! the vertical wavenumbers never suffer cancellation.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;

use crate::error::{GreenError, Result};
use crate::geometry::{Half, Pair, Point, WaveProfile, C64};
use crate::quadrature::{integrate_intervals, QuadSpec, QuadValue};
use crate::special::hankel_pair;

/// Distance below which field and source points are treated as coincident.
pub const COINCIDENCE_RADIUS: f64 = 1e-14;
const INITIAL_PANEL_CAP: usize = 20_000;

/// A quadrature result with its error estimate.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Evaluated<T> {
    pub value: T,
    pub error: f64,
    /// Set when the decay height |x2| + |y2| is below 1e-3 / k+.
    pub near_interface: bool,
}

impl<T> Evaluated<T> {
    fn exact(value: T) -> Self {
        Self { value, error: 0.0, near_interface: false }
    }
}

/// Half-plane placement of (field, source).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Placement {
    UpperUpper,
    UpperLower,
    LowerUpper,
    LowerLower,
}

impl Placement {
    pub fn of(x: &Point, y: &Point) -> Result<Self> {
        x.require_off_interface("field point")?;
        y.require_off_interface("source point")?;
        Ok(match (x.half(), y.half()) {
            (Half::Upper, Half::Upper) => Placement::UpperUpper,
            (Half::Upper, _) => Placement::UpperLower,
            (_, Half::Upper) => Placement::LowerUpper,
            _ => Placement::LowerLower,
        })
    }
}

/// Phi_k(x, y) = (i/4) H0(k |x - y|).
pub fn free_green(k: f64, x: &Point, y: &Point) -> Result<C64> {
    let r = x.dist(y);
    if r < COINCIDENCE_RADIUS {
        return Err(GreenError::Coincident(r));
    }
    Ok(C64::new(0.0, 0.25) * hankel_pair(k * r)?.0)
}

/// Gradient of Phi_k(x, y) with respect to the source point y.
pub fn free_green_grad_y(k: f64, x: &Point, y: &Point) -> Result<Pair> {
    let r = x.dist(y);
    if r < COINCIDENCE_RADIUS {
        return Err(GreenError::Coincident(r));
    }
    let c = C64::new(0.0, 0.25 * k) * hankel_pair(k * r)?.1 / r;
    Ok(Pair(c * (x.x1 - y.x1), c * (x.x2 - y.x2)))
}

/// Vertical wavenumber S(xi, k) on the physical sheet, from d = xi - k.
#[inline]
fn vertical(xi: f64, k: f64, d: f64) -> C64 {
    let p = d * (xi + k);
    if d >= 0.0 {
        C64::new(p.sqrt(), 0.0)
    } else {
        C64::new(0.0, -(-p).sqrt())
    }
}

/// A quadrature node on [0, inf) with its distances to both branch points.
#[derive(Clone, Copy)]
struct Node {
    xi: f64,
    d_lo: f64,
    d_hi: f64,
    jac: f64,
}

#[derive(Clone, Copy)]
enum Tail {
    Cosh { t_end: f64 },
    Square { tau_end: f64 },
}

/// Piecewise map from the virtual coordinate u to the wavenumber axis.
struct SpectralPath {
    k_lo: f64,
    k_hi: f64,
    tail: Tail,
    xi_end: f64,
    /// Segment index for each unit interval of u.
    segments: Vec<u8>,
}

impl SpectralPath {
    fn new(k_lo: f64, k_hi: f64, height: f64, q: &QuadSpec) -> Self {
        let decay_length = -q.truncation_decay.ln();
        let reach = decay_length / height;
        let xi_end = (k_hi * k_hi + reach * reach).sqrt();
        let tail = if height < 0.1 / k_hi {
            Tail::Square { tau_end: (xi_end - k_hi).sqrt() }
        } else {
            Tail::Cosh { t_end: (xi_end / k_hi).acosh() }
        };
        let mut segments = vec![0u8];
        if k_hi > k_lo {
            segments.push(1);
        }
        segments.push(2);
        Self { k_lo, k_hi, tail, xi_end, segments }
    }

    fn span(&self, seg: u8) -> f64 {
        match seg {
            0 => self.k_lo,
            1 => self.k_hi - self.k_lo,
            _ => self.xi_end - self.k_hi,
        }
    }

    fn node(&self, u: f64) -> Node {
        let idx = (u.floor().max(0.0) as usize).min(self.segments.len() - 1);
        let v = u - idx as f64;
        let (k_lo, k_hi) = (self.k_lo, self.k_hi);
        let gap = k_hi - k_lo;
        match self.segments[idx] {
            0 => {
                let phi = v * FRAC_PI_2;
                let (s, c) = phi.sin_cos();
                let w = (0.5 * (FRAC_PI_2 - phi)).sin();
                let d_lo = -2.0 * k_lo * w * w;
                Node { xi: k_lo * s, d_lo, d_hi: d_lo - gap, jac: k_lo * c * FRAC_PI_2 }
            }
            1 => {
                let phi = v * PI;
                let (sh, ch) = (0.5 * phi).sin_cos();
                let d_lo = gap * sh * sh;
                Node { xi: k_lo + d_lo, d_lo, d_hi: -gap * ch * ch, jac: 0.5 * gap * phi.sin() * PI }
            }
            _ => match self.tail {
                Tail::Cosh { t_end } => {
                    let t = v * t_end;
                    let sh = (0.5 * t).sinh();
                    let d_hi = 2.0 * k_hi * sh * sh;
                    Node { xi: k_hi + d_hi, d_lo: d_hi + gap, d_hi, jac: k_hi * t.sinh() * t_end }
                }
                Tail::Square { tau_end } => {
                    let tau = v * tau_end;
                    let d_hi = tau * tau;
                    Node { xi: k_hi + d_hi, d_lo: d_hi + gap, d_hi, jac: 2.0 * tau * tau_end }
                }
            },
        }
    }

    fn intervals(&self, big_x: f64, height: f64) -> Vec<(f64, f64, usize)> {
        let mut out = Vec::new();
        for (i, &seg) in self.segments.iter().enumerate() {
            let phase = big_x.abs() * self.span(seg) + height * self.k_hi;
            let n = ((0.5 * phase).ceil() as usize + 2).min(INITIAL_PANEL_CAP);
            out.push((i as f64, i as f64 + 1.0, n));
        }
        out
    }
}

/// Spectral kernel of one placement.
struct Kernel {
    placement: Placement,
    k_plus: f64,
    k_minus: f64,
    plus_is_lo: bool,
    x2: f64,
    y2: f64,
}

impl Kernel {
    fn new(wp: &WaveProfile, placement: Placement, x2: f64, y2: f64) -> Self {
        Self {
            placement,
            k_plus: wp.k_plus(),
            k_minus: wp.k_minus(),
            plus_is_lo: wp.k_plus() <= wp.k_minus(),
            x2,
            y2,
        }
    }

    fn height(&self) -> f64 {
        self.x2.abs() + self.y2.abs()
    }

    /// (amplitude g(xi), factor applied by d/dy2).
    #[inline]
    fn eval(&self, n: &Node) -> (C64, C64) {
        let (d_plus, d_minus) = if self.plus_is_lo { (n.d_lo, n.d_hi) } else { (n.d_hi, n.d_lo) };
        let sp = vertical(n.xi, self.k_plus, d_plus);
        let sm = vertical(n.xi, self.k_minus, d_minus);
        let sum = sp + sm;
        match self.placement {
            Placement::UpperUpper => {
                let g = (sp - sm) / (sum * sp) * (-sp * (self.x2 + self.y2)).exp() / (4.0 * PI);
                (g, -sp)
            }
            Placement::UpperLower => {
                let g = (-sp * self.x2 + sm * self.y2).exp() / sum / (2.0 * PI);
                (g, sm)
            }
            Placement::LowerUpper => {
                let g = (-sp * self.y2 + sm * self.x2).exp() / sum / (2.0 * PI);
                (g, -sp)
            }
            Placement::LowerLower => {
                let g = (sm - sp) / (sum * sm) * (sm * (self.x2 + self.y2)).exp() / (4.0 * PI);
                (g, sm)
            }
        }
    }
}

fn spectral<T, F>(wp: &WaveProfile, placement: Placement, x: &Point, y: &Point, q: &QuadSpec, mut weight: F) -> Result<Evaluated<T>>
where
    T: QuadValue,
    F: FnMut(&Node, C64, C64, f64) -> T,
{
    q.validate()?;
    let kernel = Kernel::new(wp, placement, x.x2, y.x2);
    let height = kernel.height();
    let big_x = x.x1 - y.x1;
    let path = SpectralPath::new(wp.k_min(), wp.k_max(), height, q);
    let intervals = path.intervals(big_x, height);
    let halved = QuadSpec { abs_tol: 0.5 * q.abs_tol, ..*q };
    let r = integrate_intervals(
        |u| {
            let node = path.node(u);
            let (g, f2) = kernel.eval(&node);
            Ok(weight(&node, g, f2, big_x) * node.jac)
        },
        &intervals,
        &halved,
    )?;
    Ok(Evaluated {
        value: r.value * 2.0,
        error: 2.0 * r.error,
        near_interface: height < 1e-3 / wp.k_plus(),
    })
}

fn spectral_value(wp: &WaveProfile, placement: Placement, x: &Point, y: &Point, q: &QuadSpec) -> Result<Evaluated<C64>> {
    if matches!(placement, Placement::UpperUpper | Placement::LowerLower) && wp.k_plus() == wp.k_minus() {
        return Ok(Evaluated::exact(C64::new(0.0, 0.0)));
    }
    spectral(wp, placement, x, y, q, |n, g, _f2, big_x| g * (n.xi * big_x).cos())
}

fn spectral_grad(wp: &WaveProfile, placement: Placement, x: &Point, y: &Point, q: &QuadSpec) -> Result<Evaluated<Pair>> {
    if matches!(placement, Placement::UpperUpper | Placement::LowerLower) && wp.k_plus() == wp.k_minus() {
        return Ok(Evaluated::exact(Pair::zero()));
    }
    spectral(wp, placement, x, y, q, |n, g, f2, big_x| {
        let (s, c) = (n.xi * big_x).sin_cos();
        Pair(g * (n.xi * s), g * f2 * c)
    })
}

fn require(placement: Placement, expected: Placement) -> Result<()> {
    if placement == expected {
        Ok(())
    } else {
        Err(GreenError::Domain(format!("expected placement {expected:?}, got {placement:?}")))
    }
}

/// Reflected part of G for field and source in the upper half-plane.
pub fn green_reflected(wp: &WaveProfile, x: &Point, y: &Point, q: &QuadSpec) -> Result<Evaluated<C64>> {
    let p = Placement::of(x, y)?;
    require(p, Placement::UpperUpper)?;
    spectral_value(wp, p, x, y, q)
}

/// G for field in the upper and source in the lower half-plane.
pub fn green_transmitted(wp: &WaveProfile, x: &Point, y: &Point, q: &QuadSpec) -> Result<Evaluated<C64>> {
    let p = Placement::of(x, y)?;
    require(p, Placement::UpperLower)?;
    spectral_value(wp, p, x, y, q)
}

/// Reflected part of G for field and source in the lower half-plane.
pub fn green_lower_reflected(wp: &WaveProfile, x: &Point, y: &Point, q: &QuadSpec) -> Result<Evaluated<C64>> {
    let p = Placement::of(x, y)?;
    require(p, Placement::LowerLower)?;
    spectral_value(wp, p, x, y, q)
}

/// G for field in the lower and source in the upper half-plane.
pub fn green_transmitted_swap(wp: &WaveProfile, x: &Point, y: &Point, q: &QuadSpec) -> Result<Evaluated<C64>> {
    let p = Placement::of(x, y)?;
    require(p, Placement::LowerUpper)?;
    spectral_value(wp, p, x, y, q)
}

/// The layered Green function G(x, y).
pub fn green(wp: &WaveProfile, x: &Point, y: &Point, q: &QuadSpec) -> Result<Evaluated<C64>> {
    let p = Placement::of(x, y)?;
    let free = match p {
        Placement::UpperUpper => Some(free_green(wp.k_plus(), x, y)?),
        Placement::LowerLower => Some(free_green(wp.k_minus(), x, y)?),
        _ => None,
    };
    let mut e = spectral_value(wp, p, x, y, q)?;
    if let Some(f) = free {
        e.value += f;
    }
    Ok(e)
}

/// Gradient of G(x, y) with respect to the source point y.
pub fn grad_y_green(wp: &WaveProfile, x: &Point, y: &Point, q: &QuadSpec) -> Result<Evaluated<Pair>> {
    let p = Placement::of(x, y)?;
    let free = match p {
        Placement::UpperUpper => Some(free_green_grad_y(wp.k_plus(), x, y)?),
        Placement::LowerLower => Some(free_green_grad_y(wp.k_minus(), x, y)?),
        _ => None,
    };
    let mut e = spectral_grad(wp, p, x, y, q)?;
    if let Some(f) = free {
        e.value = e.value + f;
    }
    Ok(e)
}

/// Gradient of G(x, y) with respect to the field point x, via G(x, y) = G(y, x).
pub fn grad_x_green(wp: &WaveProfile, x: &Point, y: &Point, q: &QuadSpec) -> Result<Evaluated<Pair>> {
    grad_y_green(wp, y, x, q)
}
