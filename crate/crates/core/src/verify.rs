//! Measurements behind the self-check suites: each returns the worst observed
//! deviation so callers can compare against their own tolerances.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::asymptotics::{evaluate_green, Method};
use crate::branch::{s_cut, s_limit, s_tilde, BranchSide};
use crate::error::{GreenError, Result};
use crate::farfield::{g_farfield, h_farfield, FarDirection};
use crate::geometry::{Half, Point, WaveProfile, C64};
use crate::quadrature::QuadSpec;
use crate::saddle::{factored_root, h_factor, zeta_map, SaddleFrame};
use crate::scattering::{farfield_from_boundary, manufacture_trace, represent_many};
use crate::sommerfeld::{free_green, grad_y_green, green};
use crate::special::{f2_closed, f2_oracle, f3_closed, f3_oracle};

/// Self-check suites.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Collapse,
    Branch,
    F2f3,
    Factorization,
    Pde,
    Crossmethod,
    Farfield,
    Representation,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Collapse,
        Suite::Branch,
        Suite::F2f3,
        Suite::Factorization,
        Suite::Pde,
        Suite::Crossmethod,
        Suite::Farfield,
        Suite::Representation,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Collapse => "collapse",
            Suite::Branch => "branch",
            Suite::F2f3 => "f2f3",
            Suite::Factorization => "factorization",
            Suite::Pde => "pde",
            Suite::Crossmethod => "crossmethod",
            Suite::Farfield => "farfield",
            Suite::Representation => "representation",
        }
    }
}

impl FromStr for Suite {
    type Err = GreenError;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| GreenError::Config(format!("unknown suite {s:?}")))
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Outcome of one property check.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub suite: Suite,
    pub name: String,
    pub measured: f64,
    /// Lower end of the accepted range, if any.
    pub lower: Option<f64>,
    /// Upper end of the accepted range.
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    /// Passes when `measured <= tolerance`.
    pub fn at_most(suite: Suite, name: &str, measured: f64, tolerance: f64) -> Self {
        Self { suite, name: name.into(), measured, lower: None, tolerance, passed: measured <= tolerance }
    }

    /// Passes when `measured` lies in `[lo, hi]`.
    pub fn within(suite: Suite, name: &str, measured: f64, lo: f64, hi: f64) -> Self {
        Self { suite, name: name.into(), measured, lower: Some(lo), tolerance: hi, passed: (lo..=hi).contains(&measured) }
    }
}

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm()
}

fn random_off_interface(rng: &mut ChaCha8Rng, extent: f64) -> Point {
    let a = rng.random_range(-extent..extent);
    let b = rng.random_range(0.05..extent);
    Point::new(a, if rng.random_bool(0.5) { b } else { -b })
}

/// Random pairs off the interface, at least 0.05 apart, covering all placements.
pub fn random_pairs(n: usize, seed: u64) -> Vec<(Point, Point)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let x = random_off_interface(&mut rng, 3.0);
        let y = random_off_interface(&mut rng, 3.0);
        if x.dist(&y) > 0.05 {
            out.push((x, y));
        }
    }
    out
}

/// max |green - (i/4) H0(k|x - y|)| / |G| over random pairs with k+ = k- = k.
pub fn collapse_error(k: f64, n: usize, seed: u64, q: &QuadSpec) -> Result<f64> {
    let wp = WaveProfile::new(k, k)?;
    let errs = random_pairs(n, seed)
        .par_iter()
        .map(|(x, y)| Ok(rel(green(&wp, x, y, q)?.value, free_green(k, x, y)?)))
        .collect::<Result<Vec<f64>>>()?;
    Ok(errs.into_iter().fold(0.0, f64::max))
}

/// max |s^2 - (z^2 - a^2)| / |z^2 - a^2| for both sheets on a random grid.
pub fn branch_square_error(n: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..n {
        let z = C64::new(rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0));
        let a = rng.random_range(0.1..3.0);
        let reference = (z - a) * (z + a);
        for v in [s_cut(z, a), s_tilde(z, a)].into_iter().flatten() {
            worst = worst.max(rel(v * v, reference));
        }
    }
    worst
}

/// max deviation of extrapolated one-sided probes of s_cut (h = 1e-8) from the
/// limit values S tilde and -S tilde on the cut above a.
pub fn branch_limit_error() -> Result<f64> {
    let h = 1e-8;
    let mut worst: f64 = 0.0;
    for a in [0.5, 1.0, 2.0] {
        for t in [0.1, 0.7, 1.5, 4.0] {
            let z = C64::new(a, t);
            for (side, sgn) in [(BranchSide::FromRight, 1.0), (BranchSide::FromLeft, -1.0)] {
                let f1 = s_cut(z + sgn * h, a)?;
                let f2 = s_cut(z + sgn * h / 2.0, a)?;
                worst = worst.max(rel(f2 * 2.0 - f1, s_limit(z, a, side)?));
            }
        }
    }
    Ok(worst)
}

/// Worst deviation of the factored root from S / -S tilde of cos zeta(s),
/// over `n_theta` observation angles on real-line and strip grids, together
/// with the saddle-point identity.
pub fn factorization_error(wp: &WaveProfile, n_theta: usize) -> Result<f64> {
    let tc = wp.theta_c().ok_or(GreenError::NoCriticalAngle)?;
    let n = wp.n();
    let mut worst: f64 = 0.0;
    for i in 0..n_theta {
        let theta = 0.05 + (FRAC_PI_2 - 0.05) * (i as f64 + 0.5) / n_theta as f64;
        if (theta - tc).abs() < 1e-3 {
            continue;
        }
        let f = SaddleFrame::new(wp, theta)?;
        let above = !f.below_critical();
        let strip = if above { 0.0 } else { f.s_b.im.abs() };
        for i in 0..=80 {
            for j in [-0.9, -0.5, 0.0, 0.5, 0.9] {
                if above && j != 0.0 {
                    continue;
                }
                let s = C64::new(-4.0 + 0.1 * i as f64, j * strip);
                let cz = zeta_map(s, theta, wp)?.cos();
                let lhs = factored_root(s, &f)?;
                let rhs = if above { s_cut(cz, n)? } else { -s_tilde(cz, n)? };
                worst = worst.max((lhs - rhs).norm() / (1.0 + rhs.norm()));
            }
        }
        if above {
            // at the saddle: e^{-i pi/4} sqrt(-s_b) sqrt(-s_b*) H_{tc}(0) H_{pi-tc}(0) = -i sqrt(n^2 - cos^2)
            let z = C64::new(0.0, 0.0);
            let lhs = C64::from_polar(1.0, -PI / 4.0)
                * (-f.s_b).sqrt()
                * (-f.s_b_star).sqrt()
                * h_factor(tc, z, &f)?
                * h_factor(PI - tc, z, &f)?;
            let rhs = -C64::i() * C64::new(n * n - theta.cos().powi(2), 0.0).sqrt();
            worst = worst.max((lhs - rhs).norm() / (1.0 + rhs.norm()));
        }
    }
    Ok(worst)
}

/// Parameter grid of the F2 / F3 comparison.
pub fn f2f3_grid() -> Vec<(C64, C64, f64)> {
    let rhos = [C64::new(0.0, 1.0), C64::new(1.0, 2.0), C64::new(-1.0, 2.0)];
    let bs = [
        C64::new(0.0, 0.1),
        C64::new(0.0, -0.1),
        C64::new(0.0, 0.7),
        C64::new(0.0, -0.7),
        C64::new(0.3, 0.4),
        C64::new(0.3, -0.4),
        C64::new(-0.3, 0.4),
        C64::new(-0.3, -0.4),
    ];
    let mut out = Vec::new();
    for rho in rhos {
        for b in bs {
            for beta in [0.5, 1.5] {
                out.push((rho, b, beta));
            }
        }
    }
    out
}

/// Worst relative deviation of (f2_closed, f3_closed) from their oracles.
pub fn f2f3_error() -> Result<(f64, f64)> {
    let errs = f2f3_grid()
        .par_iter()
        .map(|&(rho, b, beta)| {
            let e2 = rel(f2_closed(rho, b, beta)?, f2_oracle(rho, b, beta)?);
            let e3 = rel(f3_closed(rho, b, beta)?, f3_oracle(rho, b, beta)?);
            Ok((e2, e3))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(errs.into_iter().fold((0.0, 0.0), |(a, b), (c, d)| (a.max(c), b.max(d))))
}

fn tight() -> QuadSpec {
    QuadSpec { rel_tol: 1e-14, abs_tol: 1e-17, ..QuadSpec::default() }
}

fn helmholtz_residual(wp: &WaveProfile, x: &Point, y: &Point, h: f64) -> Result<f64> {
    let q = tight();
    let g = |d1: f64, d2: f64| green(wp, &x.translated(d1, d2), y, &q).map(|e| e.value);
    let k = wp.k_of(x.half());
    let c = g(0.0, 0.0)?;
    let lap = (g(h, 0.0)? + g(-h, 0.0)? + g(0.0, h)? + g(0.0, -h)? - c * 4.0) / (h * h);
    Ok((lap + c * (k * k)).norm() / c.norm())
}

/// Fitted order of the five-point Helmholtz residual over h in {1e-2, 5e-3, 2.5e-3},
/// one value per (field, source) case.
pub fn helmholtz_orders(wp: &WaveProfile) -> Result<Vec<f64>> {
    let hs = [1e-2, 5e-3, 2.5e-3];
    let cases = [
        (Point::new(1.2, 0.9), Point::new(0.3, 0.5)),
        (Point::new(1.2, 0.9), Point::new(0.3, -0.5)),
        (Point::new(-0.8, -1.1), Point::new(0.3, 0.5)),
        (Point::new(-0.8, -1.1), Point::new(0.1, -0.4)),
    ];
    cases
        .iter()
        .map(|(x, y)| {
            let res = hs.iter().map(|&h| helmholtz_residual(wp, x, y, h)).collect::<Result<Vec<_>>>()?;
            let lx: Vec<f64> = hs.iter().map(|h| h.ln()).collect();
            let ly: Vec<f64> = res.iter().map(|r| r.ln()).collect();
            let mx = lx.iter().sum::<f64>() / lx.len() as f64;
            let my = ly.iter().sum::<f64>() / ly.len() as f64;
            let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
            let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
            Ok(sxy / sxx)
        })
        .collect()
}

/// Worst relative jump of G and of dG/dy2 across y2 = 0, from one-sided
/// quadratic extrapolation of probes at |y2| = 1e-3, 2e-3, 3e-3.
pub fn transmission_error(wp: &WaveProfile, q: &QuadSpec) -> Result<f64> {
    let fields = [Point::new(1.5, 0.8), Point::new(-2.0, -0.6), Point::new(0.7, 2.5), Point::new(3.0, -0.05)];
    let d = 1e-3;
    let mut worst: f64 = 0.0;
    for x in &fields {
        let probe = |t: f64| -> Result<(C64, C64)> {
            let y = Point::new(0.4, t);
            Ok((green(wp, x, &y, q)?.value, grad_y_green(wp, x, &y, q)?.value.1))
        };
        let side = |sgn: f64| -> Result<(C64, C64)> {
            let (a, b, c) = (probe(sgn * d)?, probe(2.0 * sgn * d)?, probe(3.0 * sgn * d)?);
            Ok((a.0 * 3.0 - b.0 * 3.0 + c.0, a.1 * 3.0 - b.1 * 3.0 + c.1))
        };
        let (up, down) = (side(1.0)?, side(-1.0)?);
        worst = worst.max(rel(down.0, up.0)).max(rel(down.1, up.1));
    }
    Ok(worst)
}

/// max |G(x, y) - G(y, x)| / |G| over random pairs.
pub fn reciprocity_error(wp: &WaveProfile, n: usize, seed: u64, q: &QuadSpec) -> Result<f64> {
    let errs = random_pairs(n, seed)
        .par_iter()
        .map(|(x, y)| Ok(rel(green(wp, x, y, q)?.value, green(wp, y, x, q)?.value)))
        .collect::<Result<Vec<f64>>>()?;
    Ok(errs.into_iter().fold(0.0, f64::max))
}

/// Observation angles of the cross-method comparison: `n` angles in the upper
/// half including theta_c, theta_c +- 0.3 and their mirrors.
pub fn cross_method_angles(wp: &WaveProfile, n: usize) -> Result<Vec<f64>> {
    let tc = wp.theta_c().ok_or(GreenError::NoCriticalAngle)?;
    let mut angles = vec![tc, tc - 0.3, tc + 0.3, PI - tc, PI - tc + 0.3, PI - tc - 0.3];
    let fill = n.saturating_sub(angles.len());
    for i in 0..fill {
        angles.push(0.15 + (PI - 0.3) * (i as f64 + 0.5) / fill as f64);
    }
    Ok(angles)
}

/// Worst relative saddle-vs-quadrature deviation of G for k+ > k- over random
/// radii in [r_lo, r_hi], the given angles and `n_sources` random sources in
/// the upper half of the unit disc.
pub fn cross_method_error(wp: &WaveProfile, angles: &[f64], n_sources: usize, r_range: (f64, f64), seed: u64, q: &QuadSpec) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ys = Vec::new();
    while ys.len() < n_sources {
        let y = Point::new(rng.random_range(-1.0..1.0), rng.random_range(0.05..1.0));
        if y.r() < 1.0 {
            ys.push(y);
        }
    }
    let mut tasks = Vec::new();
    for &t in angles {
        for y in &ys {
            tasks.push((Point::polar(rng.random_range(r_range.0..r_range.1), t), *y));
        }
    }
    let errs = tasks
        .par_iter()
        .map(|(x, y)| {
            let (a, _, _) = evaluate_green(wp, x, y, Method::Saddle, q)?;
            let (b, _, _) = evaluate_green(wp, x, y, Method::Quadrature, q)?;
            Ok(rel(a, b))
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(errs.into_iter().fold(0.0, f64::max))
}

/// Worst |H^inf - grad_y G^inf (central differences, h = 1e-6)| / |H^inf|.
pub fn pattern_gradient_error(wp: &WaveProfile) -> Result<f64> {
    let h = 1e-6;
    let mut worst: f64 = 0.0;
    for theta in [0.3, 1.0, 1.4, 2.0, 2.9, 3.5, 4.3, 5.0, 6.0] {
        let d = FarDirection::new(theta)?;
        for y in [Point::new(0.3, 0.5), Point::new(-0.4, -0.7)] {
            let g = |d1: f64, d2: f64| g_farfield(&d, &y.translated(d1, d2), wp);
            let fd1 = (g(h, 0.0)? - g(-h, 0.0)?) / (2.0 * h);
            let fd2 = (g(0.0, h)? - g(0.0, -h)?) / (2.0 * h);
            let hf = h_farfield(&d, &y, wp)?;
            let diff = ((hf.0 - fd1).norm().powi(2) + (hf.1 - fd2).norm().powi(2)).sqrt();
            worst = worst.max(diff / hf.norm());
        }
    }
    Ok(worst)
}

fn random_in_half(rng: &mut ChaCha8Rng, half: Half, r_lo: f64, r_hi: f64) -> Point {
    let p = Point::polar(rng.random_range(r_lo..r_hi), rng.random_range(0.1..PI - 0.1));
    if half == Half::Upper {
        p
    } else {
        p.reflected()
    }
}

/// Worst relative residuals (representation, far field) of the manufactured
/// field G(., z0) over all source/evaluation half combinations; each
/// combination contributes `per_combo` evaluation points and directions.
pub fn representation_errors(wp: &WaveProfile, per_combo: usize, n_per_arc: usize, seed: u64, q: &QuadSpec) -> Result<(f64, f64)> {
    let radius = 2.0;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut rep, mut far): (f64, f64) = (0.0, 0.0);
    for z_half in [Half::Upper, Half::Lower] {
        let z0 = random_in_half(&mut rng, z_half, 0.1, 1.5);
        let trace = manufacture_trace(wp, &z0, radius, n_per_arc, q)?;
        for x_half in [Half::Upper, Half::Lower] {
            let xs: Vec<Point> = (0..per_combo).map(|_| random_in_half(&mut rng, x_half, 2.5, 8.0)).collect();
            for (x, v) in xs.iter().zip(represent_many(&trace, &xs, wp, q)?) {
                rep = rep.max(rel(v, green(wp, x, &z0, q)?.value));
            }
            for _ in 0..per_combo {
                let t = rng.random_range(0.05..PI - 0.05);
                let d = FarDirection::new(if x_half == Half::Upper { t } else { t + PI })?;
                far = far.max(rel(farfield_from_boundary(&trace, &d, wp)?, g_farfield(&d, &z0, wp)?));
            }
        }
    }
    Ok((rep, far))
}

/// Run one suite with the default tolerances.
pub fn run_suite(suite: Suite, seed: u64, q: &QuadSpec) -> Result<Vec<Check>> {
    let kp = WaveProfile::new(2.0, 1.0)?;
    let km = WaveProfile::new(1.0, 2.0)?;
    let s = suite;
    Ok(match suite {
        Suite::Collapse => vec![Check::at_most(s, "equal wavenumbers reduce to (i/4) H0", collapse_error(2.0, 100, seed, q)?, 1e-8)],
        Suite::Branch => vec![
            Check::at_most(s, "square identity of both sheets", branch_square_error(10_000, seed), 1e-14),
            Check::at_most(s, "one-sided limits on the cut", branch_limit_error()?, 1e-12),
        ],
        Suite::F2f3 => {
            let (e2, e3) = f2f3_error()?;
            vec![Check::at_most(s, "F2 closed form vs quadrature", e2, 1e-8), Check::at_most(s, "F3 closed form vs keyhole quadrature", e3, 1e-8)]
        }
        Suite::Factorization => vec![Check::at_most(s, "factored root on 20 observation angles", factorization_error(&kp, 20)?, 1e-10)],
        Suite::Pde => {
            let mut v = Vec::new();
            for wp in [kp, km] {
                let tag = format!("k+={} k-={}", wp.k_plus(), wp.k_minus());
                for (i, o) in helmholtz_orders(&wp)?.into_iter().enumerate() {
                    v.push(Check::within(s, &format!("Helmholtz residual order, case {i}, {tag}"), o, 1.7, 2.3));
                }
                v.push(Check::at_most(s, &format!("transmission jumps, {tag}"), transmission_error(&wp, q)?, 1e-4));
                v.push(Check::at_most(s, &format!("reciprocity on 50 pairs, {tag}"), reciprocity_error(&wp, 50, seed, q)?, 1e-9));
            }
            v
        }
        Suite::Crossmethod => {
            let angles = cross_method_angles(&kp, 12)?;
            vec![Check::at_most(s, "saddle vs quadrature, |x| in [20, 100]", cross_method_error(&kp, &angles, 5, (20.0, 100.0), seed, q)?, 1e-6)]
        }
        Suite::Farfield => vec![
            Check::at_most(s, "H^inf vs differentiated G^inf, k+ > k-", pattern_gradient_error(&kp)?, 1e-7),
            Check::at_most(s, "H^inf vs differentiated G^inf, k+ < k-", pattern_gradient_error(&km)?, 1e-7),
        ],
        Suite::Representation => {
            let mut v = Vec::new();
            for wp in [kp, km] {
                let tag = format!("k+={} k-={}", wp.k_plus(), wp.k_minus());
                let (rep, far) = representation_errors(&wp, 5, 48, seed, q)?;
                v.push(Check::at_most(s, &format!("exterior representation, {tag}"), rep, 1e-6));
                v.push(Check::at_most(s, &format!("far-field formula, {tag}"), far, 1e-6));
            }
            v
        }
    })
}
