//! Steepest-descent evaluation of the reflected part G_R for field and
//! source in the upper half-plane, k+ > k-, and 0 < theta_x <= pi/2.
//!
//! The descent path is parametrised by real s through
//! zeta(s) = 2 arcsin(Q(s)) + theta_x, which turns the phase into
//! e^{i k+ |x|} e^{-|x| s^2}. Above the critical angle the integral runs
//! along the real s-line; below it the root changes sheet past the branch
//! point and a loop around the cut is added.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use serde::Serialize;

use crate::error::{GreenError, Result};
use crate::geometry::{Half, Pair, Point, WaveOrdering, WaveProfile, C64};
use crate::quadrature::{tanh_sinh, QuadSpec, QuadValue};
use crate::special::{f2_closed, f3_closed};

/// Smallest admissible polar angle of the field point (and distance from pi).
pub const ANGULAR_MARGIN: f64 = 0.05;

/// Geometry of the descent path for one observation angle.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SaddleFrame {
    pub theta_x: f64,
    pub wp: WaveProfile,
    pub s_b: C64,
    pub s_b_star: C64,
    pub sigma1: f64,
    pub sigma2: f64,
    theta_c: f64,
}

impl SaddleFrame {
    pub fn new(wp: &WaveProfile, theta_x: f64) -> Result<Self> {
        if wp.ordering() != WaveOrdering::PlusGreater {
            return Err(GreenError::Hypothesis("steepest descent needs k+ > k-".into()));
        }
        if !(theta_x > 0.0 && theta_x <= FRAC_PI_2) {
            return Err(GreenError::Hypothesis(format!("theta_x = {theta_x} outside (0, pi/2]")));
        }
        let theta_c = wp.theta_c().ok_or(GreenError::NoCriticalAngle)?;
        let k = wp.k_plus();
        let root = (2.0 * k).sqrt() * C64::from_polar(1.0, FRAC_PI_4);
        let s_b = root * (0.5 * (theta_c - theta_x)).sin();
        let s_b_star = root * (0.5 * (PI - theta_c - theta_x)).sin();
        let sk = k.sqrt();
        let sigma = sk * (0.5 * (theta_c + theta_x)).sin().min((0.5 * (theta_c - theta_x)).cos());
        let sigma1 = sigma.min(sk * (0.5 * (PI - theta_c - theta_x)).sin());
        let sigma2 = sk * (0.5 * (theta_c - theta_x)).sin().abs();
        Ok(Self { theta_x, wp: *wp, s_b, s_b_star, sigma1, sigma2, theta_c })
    }

    pub fn theta_c(&self) -> f64 {
        self.theta_c
    }

    /// True below the critical angle, where the branch-cut loop contributes.
    pub fn below_critical(&self) -> bool {
        self.theta_x < self.theta_c
    }

    fn k(&self) -> f64 {
        self.wp.k_plus()
    }
}

fn check_strip(s: C64, k: f64) -> Result<()> {
    let limit = k.sqrt();
    if !(s.re.is_finite() && s.im.is_finite()) || s.im.abs() >= limit {
        return Err(GreenError::Strip { im: s.im.abs(), limit });
    }
    Ok(())
}

fn p_raw(s: C64, k: f64) -> C64 {
    (1.0 + C64::i() * s * s / (2.0 * k)).sqrt()
}

fn q_raw(s: C64, k: f64) -> C64 {
    s * C64::from_polar(1.0 / (2.0 * k).sqrt(), -FRAC_PI_4)
}

/// P(s) = sqrt(1 - s^2 / (2 i k+)) on the strip |Im s| < sqrt(k+).
pub fn p_of_s(s: C64, wp: &WaveProfile) -> Result<C64> {
    check_strip(s, wp.k_plus())?;
    Ok(p_raw(s, wp.k_plus()))
}

/// Q(s) = s e^{-i pi/4} / sqrt(2 k+) on the strip |Im s| < sqrt(k+).
pub fn q_of_s(s: C64, wp: &WaveProfile) -> Result<C64> {
    check_strip(s, wp.k_plus())?;
    Ok(q_raw(s, wp.k_plus()))
}

/// zeta(s) = 2 arcsin(Q(s)) + theta_x.
pub fn zeta_map(s: C64, theta_x: f64, wp: &WaveProfile) -> Result<C64> {
    Ok(2.0 * q_of_s(s, wp)?.asin() + theta_x)
}

/// zeta'(s) = sqrt(2/k+) e^{-i pi/4} / P(s).
pub fn zeta_prime(s: C64, wp: &WaveProfile) -> Result<C64> {
    let k = wp.k_plus();
    Ok(C64::from_polar((2.0 / k).sqrt(), -FRAC_PI_4) / p_of_s(s, wp)?)
}

/// H_theta(s) = sqrt(F1) sqrt(F2) / sqrt(F3) with principal roots.
pub fn h_factor(theta: f64, s: C64, frame: &SaddleFrame) -> Result<C64> {
    check_strip(s, frame.k())?;
    Ok(h_raw(theta, s, frame))
}

fn h_raw(theta: f64, s: C64, frame: &SaddleFrame) -> C64 {
    let k = frame.k();
    let p = p_raw(s, k);
    let q = q_raw(s, k);
    let (sm, cm) = (0.5 * (theta - frame.theta_x)).sin_cos();
    let (sp, cp) = (0.5 * (theta + frame.theta_x)).sin_cos();
    let f1 = 1.0 + p * cm + q * sm;
    let f2 = p * sp + q * cp;
    let f3 = cm + p;
    f1.sqrt() * f2.sqrt() / f3.sqrt()
}

/// sqrt(2/k+) e^{-i pi/4} H_{theta_c}(s) H_{pi - theta_c}(s) sqrt(s - s_b*), the
/// factor of S(cos zeta(s), n) that stays analytic across s_b.
fn root_cofactor(s: C64, frame: &SaddleFrame) -> C64 {
    C64::from_polar((2.0 / frame.k()).sqrt(), -FRAC_PI_4)
        * h_raw(frame.theta_c, s, frame)
        * h_raw(PI - frame.theta_c, s, frame)
        * (s - frame.s_b_star).sqrt()
}

/// Factored root sqrt(2/k+) e^{-i pi/4} H_{theta_c} H_{pi - theta_c} sqrt(s - s_b) sqrt(s - s_b*).
///
/// Equals S(cos zeta(s), n) on the real line above the critical angle and
/// -S tilde(cos zeta(s), n) below it.
pub fn factored_root(s: C64, frame: &SaddleFrame) -> Result<C64> {
    check_strip(s, frame.k())?;
    Ok(root_cofactor(s, frame) * (s - frame.s_b).sqrt())
}

/// Quantities along the descent path at s.
struct PathPoint {
    cos_z: C64,
    sin_z: C64,
    /// F(s) zeta'(s)
    carrier: C64,
}

fn path_point(s: C64, frame: &SaddleFrame, y: &Point) -> PathPoint {
    let k = frame.k();
    let p = p_raw(s, k);
    let q = q_raw(s, k);
    let c = 2.0 * p * p - 1.0;
    let sn = 2.0 * p * q;
    let (st, ct) = frame.theta_x.sin_cos();
    let cos_z = c * ct - sn * st;
    let sin_z = sn * ct + c * st;
    let f = (-C64::i() * k * (cos_z * y.x1 - sin_z * y.x2)).exp();
    let dz = C64::from_polar((2.0 / k).sqrt(), -FRAC_PI_4) / p;
    PathPoint { cos_z, sin_z, carrier: f * dz }
}

/// Integrand values: the scalar density, optionally mapped to the source gradient.
trait SaddleOutput: QuadValue {
    fn from_density(density: C64, pp: &PathPoint, k: f64) -> Self;
    fn scale_c(self, c: C64) -> Self;
}

impl SaddleOutput for C64 {
    fn from_density(density: C64, _pp: &PathPoint, _k: f64) -> Self {
        density
    }
    fn scale_c(self, c: C64) -> Self {
        self * c
    }
}

impl SaddleOutput for Pair {
    fn from_density(density: C64, pp: &PathPoint, k: f64) -> Self {
        // grad_y F = -i k (cos zeta, -sin zeta) F
        let c = -C64::i() * k * density;
        Pair(c * pp.cos_z, -c * pp.sin_z)
    }
    fn scale_c(self, c: C64) -> Self {
        self.scale(c)
    }
}

struct Setup {
    frame: SaddleFrame,
    y: Point,
    r: f64,
    reach: f64,
    pre: C64,
    /// 1 above the critical angle (S), -1 below it (S tilde).
    sheet: f64,
    n2m1: f64,
}

impl Setup {
    fn new(wp: &WaveProfile, x: &Point, y: &Point, q: &QuadSpec) -> Result<Self> {
        q.validate()?;
        if x.half() != Half::Upper || y.half() != Half::Upper {
            return Err(GreenError::Hypothesis("field and source must lie in the upper half-plane".into()));
        }
        let theta = x.theta();
        if !(ANGULAR_MARGIN..=FRAC_PI_2).contains(&theta) {
            return Err(GreenError::Hypothesis(format!(
                "theta_x = {theta} outside [{ANGULAR_MARGIN}, pi/2]; map with extend_by_symmetry first"
            )));
        }
        let frame = SaddleFrame::new(wp, theta)?;
        let r = x.r();
        let ry = y.r();
        let below = frame.below_critical();
        let bound = if below { ry / frame.theta_c.cos() } else { ry };
        if r <= bound {
            return Err(GreenError::Hypothesis(format!("|x| = {r} must exceed {bound}")));
        }
        let decay = -q.truncation_decay.ln() + 10.0;
        let reach = (decay / (r - ry)).sqrt();
        let k = wp.k_plus();
        let pre = C64::i() * C64::from_polar(1.0, k * r) / (4.0 * PI);
        let n = wp.n();
        Ok(Self { frame, y: *y, r, reach, pre, sheet: if below { -1.0 } else { 1.0 }, n2m1: n * n - 1.0 })
    }

    fn k(&self) -> f64 {
        self.frame.k()
    }

    /// g(s) of the branch part: the density of sqrt(s - s_b) e^{-|x| s^2}.
    fn branch_density(&self, s: C64, pp: &PathPoint) -> C64 {
        root_cofactor(s, &self.frame) * pp.carrier * (2.0 * C64::i() * pp.sin_z) / self.n2m1
    }

    fn smooth_density(&self, pp: &PathPoint) -> C64 {
        let cos2 = 2.0 * pp.cos_z * pp.cos_z - 1.0;
        let n2 = self.n2m1 + 1.0;
        (cos2 - n2) / self.n2m1 * pp.carrier
    }

    fn gauss(&self, s: C64) -> C64 {
        (-self.r * s * s).exp()
    }

    /// Density of G1 + G2 (or G1 + G3) at real s, with sqrt(s - s_b) supplied.
    fn line<T: SaddleOutput>(&self, s: f64, root: C64) -> T {
        let sc = C64::new(s, 0.0);
        let pp = path_point(sc, &self.frame, &self.y);
        let d = (self.smooth_density(&pp) + self.branch_density(sc, &pp) * root * self.sheet) * self.gauss(sc);
        T::from_density(d, &pp, self.k())
    }

    /// Density of the loop term at complex s (without the -2 prefactor ratio).
    fn loop_density<T: SaddleOutput>(&self, s: C64, root: C64) -> T {
        let pp = path_point(s, &self.frame, &self.y);
        let d = -self.branch_density(s, &pp) * root * self.gauss(s);
        T::from_density(d, &pp, self.k())
    }
}

fn saddle_generic<T: SaddleOutput>(wp: &WaveProfile, x: &Point, y: &Point, q: &QuadSpec) -> Result<SaddleValue<T>> {
    let st = Setup::new(wp, x, y, q)?;
    let s_b = st.frame.s_b;
    let reach = st.reach;
    let spec = QuadSpec { abs_tol: q.abs_tol / st.pre.norm(), ..*q };
    let mut error = 0.0;
    let mut evaluations = 0;

    let line = if s_b.re == 0.0 && s_b.im == 0.0 {
        // at the critical angle the root is sqrt(s) on s > 0 and i sqrt(-s) on s < 0
        let r = tanh_sinh(
            |s, _| {
                let root = C64::new(s.sqrt(), 0.0);
                Ok(st.line::<T>(s, root) + st.line::<T>(-s, C64::i() * root))
            },
            0.0,
            reach,
            &spec,
        )?;
        error += r.error;
        evaluations += r.evaluations;
        r.value
    } else {
        let c = s_b.re.clamp(-0.5 * reach, 0.5 * reach);
        let mut sum = T::zero();
        for (a, b) in [(-reach, c), (c, reach)] {
            let r = tanh_sinh(|s, _| Ok(st.line::<T>(s, (C64::new(s, 0.0) - s_b).sqrt())), a, b, &spec)?;
            error += r.error;
            evaluations += r.evaluations;
            sum = sum + r.value;
        }
        sum
    };

    let mut loop_part = T::zero();
    if st.frame.below_critical() {
        // descent path of the loop: s^2 = s_b^2 + w^2, ds = w dw / s,
        // sqrt(s - s_b) = w / sqrt(s + s_b)
        let sb2 = s_b * s_b;
        let hyp = tanh_sinh(
            |w, _| {
                let s = (sb2 + w * w).sqrt();
                let root = w / (s + s_b).sqrt();
                Ok(st.loop_density::<T>(s, root).scale_c(w / s))
            },
            0.0,
            reach,
            &spec,
        )?;
        error += 2.0 * hyp.error;
        evaluations += hyp.evaluations;
        loop_part = hyp.value * -2.0;
    }
    let value = (line + loop_part).scale_c(st.pre);
    Ok(SaddleValue { value, error: error * st.pre.norm(), evaluations, below_critical: st.frame.below_critical() })
}

/// Saddle-path result.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SaddleValue<T> {
    pub value: T,
    pub error: f64,
    pub evaluations: usize,
    pub below_critical: bool,
}

/// G_R(x, y) by steepest descent.
pub fn g_r_saddle(wp: &WaveProfile, x: &Point, y: &Point, q: &QuadSpec) -> Result<SaddleValue<C64>> {
    saddle_generic::<C64>(wp, x, y, q)
}

/// grad_y G_R(x, y) by steepest descent.
pub fn grad_y_g_r_saddle(wp: &WaveProfile, x: &Point, y: &Point, q: &QuadSpec) -> Result<SaddleValue<Pair>> {
    saddle_generic::<Pair>(wp, x, y, q)
}

/// G_R with the branch-point terms taken from the closed forms of the
/// Gaussian branch integrals F2 and F3. Only the smooth remainder is
/// integrated numerically. Used to cross-check [`g_r_saddle`] away from the
/// critical angle itself.
pub fn g_r_branch_oracle(wp: &WaveProfile, x: &Point, y: &Point, q: &QuadSpec) -> Result<C64> {
    let st = Setup::new(wp, x, y, q)?;
    let s_b = st.frame.s_b;
    if s_b.im == 0.0 {
        return Err(GreenError::Hypothesis("closed-form branch terms need theta_x != theta_c".into()));
    }
    let spec = QuadSpec { abs_tol: q.abs_tol / st.pre.norm(), ..*q };
    let reach = st.reach;
    let rho = C64::new(0.0, st.r);
    let g = |s: C64| st.branch_density(s, &path_point(s, &st.frame, &st.y));
    let g0 = g(C64::new(0.0, 0.0));
    let gb = g(s_b);
    let slope = (gb - g0) / s_b;
    let linear = |s: C64| gb + slope * (s - s_b);
    let c = s_b.re.clamp(-0.5 * reach, 0.5 * reach);

    let mut line = C64::new(0.0, 0.0);
    for (a, b) in [(-reach, c), (c, reach)] {
        line += tanh_sinh(
            |s, _| {
                let sc = C64::new(s, 0.0);
                let pp = path_point(sc, &st.frame, &st.y);
                let rest = st.branch_density(sc, &pp) - linear(sc);
                Ok((st.smooth_density(&pp) + rest * (sc - s_b).sqrt() * st.sheet) * st.gauss(sc))
            },
            a,
            b,
            &spec,
        )?
        .value;
    }
    let closed = gb * f2_closed(rho, s_b, 0.5)? + slope * f2_closed(rho, s_b, 1.5)?;
    line += closed * st.sheet;

    let mut loop_part = C64::new(0.0, 0.0);
    if st.frame.below_critical() {
        // f = -g on the loop; int over [s_b, s_b + inf) of (s - s_b)^beta e^{-|x| s^2}
        // equals e^{-i beta pi} F3(i |x|, -s_b, beta) / 2
        let f3_half = C64::from_polar(0.5, -0.5 * PI) * f3_closed(rho, -s_b, 0.5)?;
        let f3_three = C64::from_polar(0.5, -1.5 * PI) * f3_closed(rho, -s_b, 1.5)?;
        let closed = -(gb * f3_half + slope * f3_three);
        let seg = tanh_sinh(
            |t, _| {
                let s = s_b * (1.0 - t);
                Ok(-(g(s) - linear(s)) * (-s_b * t).sqrt() * st.gauss(s) * -s_b)
            },
            0.0,
            1.0,
            &spec,
        )?
        .value;
        let ray = tanh_sinh(
            |s, _| {
                let sc = C64::new(s, 0.0);
                Ok(-(g(sc) - linear(sc)) * (sc - s_b).sqrt() * st.gauss(sc))
            },
            0.0,
            reach,
            &spec,
        )?
        .value;
        loop_part = (closed + seg + ray) * -2.0;
    }
    Ok((line + loop_part) * st.pre)
}

/// Branch density g at s_b, which the leading branch term multiplies.
pub fn branch_density_at_sb(wp: &WaveProfile, x: &Point, y: &Point) -> Result<C64> {
    let st = Setup::new(wp, x, y, &QuadSpec::default())?;
    let s_b = st.frame.s_b;
    Ok(st.branch_density(s_b, &path_point(s_b, &st.frame, &st.y)))
}

/// Reflections that carry any placement into the wedge handled by the
/// steepest-descent evaluator: x in the upper half-plane with theta_x <= pi/2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct SymmetryMap {
    /// (x1, x2) -> (x1, -x2) with k+ and k- exchanged; G_R <-> G_R~, G_T <-> G_T~.
    pub swap: bool,
    /// (x1, x2) -> (-x1, x2).
    pub mirror: bool,
}

impl SymmetryMap {
    /// Apply the map; applying it twice gives back the input.
    pub fn apply(&self, wp: &WaveProfile, x: &Point, y: &Point) -> (WaveProfile, Point, Point) {
        let (mut wp, mut x, mut y) = (*wp, *x, *y);
        if self.swap {
            wp = wp.swapped();
            x = x.reflected();
            y = y.reflected();
        }
        if self.mirror {
            x = x.mirrored();
            y = y.mirrored();
        }
        (wp, x, y)
    }

    /// Carry a source gradient computed in the mapped frame back to the original one.
    pub fn pull_back(&self, g: Pair) -> Pair {
        let Pair(mut a, mut b) = g;
        if self.mirror {
            a = -a;
        }
        if self.swap {
            b = -b;
        }
        Pair(a, b)
    }
}

/// Canonical representative of a placement.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Canonical {
    pub wp: WaveProfile,
    pub x: Point,
    pub y: Point,
    pub map: SymmetryMap,
}

/// Reduce (wp, x, y) to x in the upper half-plane with theta_x in (0, pi/2].
pub fn extend_by_symmetry(wp: &WaveProfile, x: &Point, y: &Point) -> Canonical {
    let swap = x.x2 < 0.0;
    let x1 = if swap { x.reflected() } else { *x };
    let map = SymmetryMap { swap, mirror: x1.x1 < 0.0 };
    let (wp, x, y) = map.apply(wp, x, y);
    Canonical { wp, x, y, map }
}
