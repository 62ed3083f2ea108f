//! Far-field residuals G_Res = G - e^{ik|x|}|x|^{-1/2} G^inf, radial sweeps,
//! log-log rate fits and envelope checks.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{GreenError, Result};
use crate::farfield::{g_farfield, h_farfield, pattern_wavenumber, FarDirection};
use crate::geometry::{Half, Pair, Point, WaveOrdering, WaveProfile, C64};
use crate::quadrature::QuadSpec;
use crate::saddle::{extend_by_symmetry, g_r_saddle, grad_y_g_r_saddle, Canonical};
use crate::sommerfeld::{free_green, free_green_grad_y, green, grad_y_green};

/// Fraction of the predicted envelope the evaluation error may reach before a
/// residual is flagged.
pub const BUDGET_FRACTION: f64 = 0.1;
/// Minimum number of unflagged radii for a sweep verdict.
pub const MIN_CLEAR_POINTS: usize = 8;
/// Minimum number of points in a rate fit.
pub const MIN_FIT_POINTS: usize = 5;

/// Evaluation route for G.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Spectral quadrature on the real line.
    Quadrature,
    /// Steepest descent through the saddle.
    Saddle,
    /// Saddle where its hypotheses hold, quadrature otherwise.
    Auto,
}

impl FromStr for Method {
    type Err = GreenError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quad" | "quadrature" => Ok(Method::Quadrature),
            "saddle" => Ok(Method::Saddle),
            "auto" => Ok(Method::Auto),
            other => Err(GreenError::Config(format!("unknown method {other:?} (quad, saddle, auto)"))),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Quadrature => "quad",
            Method::Saddle => "saddle",
            Method::Auto => "auto",
        })
    }
}

/// Residual quantity of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Quantity {
    /// G_Res.
    Value,
    /// H_Res = grad_y G - e^{ik|x|}|x|^{-1/2} H^inf.
    Gradient,
}

/// A field value, its far-field subtraction and the error budget.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Residual<T> {
    pub value: T,
    pub field: T,
    pub error: f64,
    /// Predicted envelope of |G_Res| with unit constant.
    pub envelope: f64,
    /// Set when `error > BUDGET_FRACTION * envelope`.
    pub flagged: bool,
    /// Route actually used (never `Auto`).
    pub method: Method,
}

/// Observation angles where the far-field pattern has a square-root kink.
pub fn critical_angles(wp: &WaveProfile) -> Vec<f64> {
    match (wp.ordering(), wp.theta_c()) {
        (WaveOrdering::PlusGreater, Some(tc)) => vec![tc, PI - tc],
        (WaveOrdering::PlusLess, Some(tc)) => vec![PI + tc, 2.0 * PI - tc],
        _ => Vec::new(),
    }
}

/// Distance from `theta` to the nearest critical angle.
pub fn critical_offset(wp: &WaveProfile, theta: f64) -> Option<f64> {
    let t = theta.rem_euclid(2.0 * PI);
    critical_angles(wp).into_iter().map(|c| (t - c).abs()).reduce(f64::min)
}

/// Whether `theta` is within 1/(2 sqrt(k r_max)) of a critical angle, k the
/// larger wavenumber.
pub fn is_near_critical(wp: &WaveProfile, theta: f64, r_max: f64) -> bool {
    critical_offset(wp, theta).is_some_and(|d| d <= 0.5 / (wp.k_max() * r_max).sqrt())
}

/// min(r^{-3/4}, |dtheta_c|^{-3/2} r^{-3/2}), or r^{-3/2} without a critical angle.
pub fn predicted_envelope(wp: &WaveProfile, theta: f64, r: f64) -> f64 {
    let smooth = r.powf(-1.5);
    match critical_offset(wp, theta) {
        Some(d) if d > 0.0 => r.powf(-0.75).min(d.powf(-1.5) * smooth),
        Some(_) => r.powf(-0.75),
        None => smooth,
    }
}

fn saddle_canonical(wp: &WaveProfile, x: &Point, y: &Point) -> Result<Canonical> {
    let c = extend_by_symmetry(wp, x, y);
    if c.x.half() != Half::Upper || c.y.half() != Half::Upper {
        return Err(GreenError::Hypothesis("saddle route needs field and source in the same half-plane".into()));
    }
    if c.wp.k_plus() <= c.wp.k_minus() {
        return Err(GreenError::Hypothesis("saddle route needs the observation medium to be the denser one".into()));
    }
    Ok(c)
}

fn saddle_value(wp: &WaveProfile, x: &Point, y: &Point, q: &QuadSpec) -> Result<(C64, f64)> {
    let c = saddle_canonical(wp, x, y)?;
    let g = g_r_saddle(&c.wp, &c.x, &c.y, q)?;
    Ok((g.value + free_green(c.wp.k_plus(), &c.x, &c.y)?, g.error))
}

fn saddle_grad(wp: &WaveProfile, x: &Point, y: &Point, q: &QuadSpec) -> Result<(Pair, f64)> {
    let c = saddle_canonical(wp, x, y)?;
    let g = grad_y_g_r_saddle(&c.wp, &c.x, &c.y, q)?;
    let total = g.value + free_green_grad_y(c.wp.k_plus(), &c.x, &c.y)?;
    Ok((c.map.pull_back(total), g.error))
}

fn dispatch<T>(
    method: Method,
    saddle: impl Fn() -> Result<(T, f64)>,
    quad: impl Fn() -> Result<(T, f64)>,
) -> Result<(T, f64, Method)> {
    match method {
        Method::Quadrature => quad().map(|(v, e)| (v, e, Method::Quadrature)),
        Method::Saddle => saddle().map(|(v, e)| (v, e, Method::Saddle)),
        Method::Auto => match saddle() {
            Ok((v, e)) => Ok((v, e, Method::Saddle)),
            Err(GreenError::Hypothesis(_)) => quad().map(|(v, e)| (v, e, Method::Quadrature)),
            Err(e) => Err(e),
        },
    }
}

/// G(x, y) by the requested route, with its error estimate and the route used.
pub fn evaluate_green(wp: &WaveProfile, x: &Point, y: &Point, method: Method, q: &QuadSpec) -> Result<(C64, f64, Method)> {
    dispatch(
        method,
        || saddle_value(wp, x, y, q),
        || green(wp, x, y, q).map(|e| (e.value, e.error)),
    )
}

/// grad_y G(x, y) by the requested route.
pub fn evaluate_grad(wp: &WaveProfile, x: &Point, y: &Point, method: Method, q: &QuadSpec) -> Result<(Pair, f64, Method)> {
    dispatch(
        method,
        || saddle_grad(wp, x, y, q),
        || grad_y_green(wp, x, y, q).map(|e| (e.value, e.error)),
    )
}

fn outgoing(wp: &WaveProfile, x: &Point) -> Result<(FarDirection, C64)> {
    let dir = FarDirection::new(x.theta())?;
    let k = pattern_wavenumber(&dir, wp);
    let r = x.r();
    Ok((dir, C64::from_polar(1.0 / r.sqrt(), k * r)))
}

/// G_Res(x, y).
pub fn residual(wp: &WaveProfile, x: &Point, y: &Point, method: Method, q: &QuadSpec) -> Result<Residual<C64>> {
    let (dir, wave) = outgoing(wp, x)?;
    let pattern = g_farfield(&dir, y, wp)?;
    let (field, error, used) = evaluate_green(wp, x, y, method, q)?;
    let envelope = predicted_envelope(wp, x.theta(), x.r());
    Ok(Residual {
        value: field - wave * pattern,
        field,
        error,
        envelope,
        flagged: error > BUDGET_FRACTION * envelope,
        method: used,
    })
}

/// H_Res(x, y).
pub fn h_residual(wp: &WaveProfile, x: &Point, y: &Point, method: Method, q: &QuadSpec) -> Result<Residual<Pair>> {
    let (dir, wave) = outgoing(wp, x)?;
    let pattern = h_farfield(&dir, y, wp)?;
    let (field, error, used) = evaluate_grad(wp, x, y, method, q)?;
    let k = pattern_wavenumber(&dir, wp);
    // the gradient carries an extra factor of order k
    let envelope = k * predicted_envelope(wp, x.theta(), x.r());
    Ok(Residual {
        value: field - pattern.scale(wave),
        field,
        error,
        envelope,
        flagged: error > BUDGET_FRACTION * envelope,
        method: used,
    })
}

/// Least-squares line through (log r, log m).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateFit {
    pub slope: f64,
    pub intercept: f64,
    /// Largest log-domain deviation from the fitted line.
    pub max_abs_residual: f64,
    pub npoints: usize,
}

/// Fit log m = intercept + slope log r.
pub fn fit_rate(radii: &[f64], magnitudes: &[f64]) -> Result<RateFit> {
    if radii.len() != magnitudes.len() {
        return Err(GreenError::Domain(format!("{} radii for {} magnitudes", radii.len(), magnitudes.len())));
    }
    if radii.len() < MIN_FIT_POINTS {
        return Err(GreenError::Domain(format!("rate fit needs at least {MIN_FIT_POINTS} points, got {}", radii.len())));
    }
    if let Some(m) = magnitudes.iter().find(|m| !(m.is_finite() && **m > 0.0)) {
        return Err(GreenError::Domain(format!("nonpositive magnitude {m} in rate fit")));
    }
    if radii.iter().any(|r| !(r.is_finite() && *r > 0.0)) || radii.windows(2).any(|w| w[1] <= w[0]) {
        return Err(GreenError::Domain("radii must be positive and strictly increasing".into()));
    }
    let xs: Vec<f64> = radii.iter().map(|r| r.ln()).collect();
    let ys: Vec<f64> = magnitudes.iter().map(|m| m.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let max_abs_residual = xs.iter().zip(&ys).map(|(x, y)| (y - intercept - slope * x).abs()).fold(0.0, f64::max);
    Ok(RateFit { slope, intercept, max_abs_residual, npoints: xs.len() })
}

/// `n` log-spaced radii from `r_min` to `r_max` inclusive.
pub fn geometric_radii(r_min: f64, r_max: f64, n: usize) -> Vec<f64> {
    let (a, b) = (r_min.ln(), r_max.ln());
    (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1).max(1) as f64).exp()).collect()
}

/// Radial sweep over directions and source points.
#[derive(Debug, Clone, Serialize)]
pub struct SweepPlan {
    wp: WaveProfile,
    y_set: Vec<Point>,
    thetas: Vec<FarDirection>,
    radii: Vec<f64>,
    method: Method,
    quantity: Quantity,
    quad: QuadSpec,
}

impl SweepPlan {
    /// Default radii: 25 log-spaced values from 1e2 to 1e4.
    pub fn default_radii() -> Vec<f64> {
        geometric_radii(1e2, 1e4, 25)
    }

    pub fn new(
        wp: WaveProfile,
        y_set: Vec<Point>,
        thetas: Vec<FarDirection>,
        radii: Vec<f64>,
        method: Method,
    ) -> Result<Self> {
        if y_set.is_empty() || thetas.is_empty() {
            return Err(GreenError::Config("sweep needs at least one source point and one direction".into()));
        }
        for y in &y_set {
            y.require_off_interface("source point")?;
        }
        if radii.len() < 2 || radii.iter().any(|r| !(r.is_finite() && *r > 0.0)) || radii.windows(2).any(|w| w[1] <= w[0]) {
            return Err(GreenError::Config("radii must be positive and strictly increasing".into()));
        }
        let r0 = y_set.iter().map(Point::r).fold(0.0, f64::max);
        let mut bound = 2.0 * r0;
        if let Some(tc) = wp.theta_c() {
            bound = bound.max(r0 / tc.cos());
        }
        if radii[0] <= bound {
            return Err(GreenError::Hypothesis(format!("r_min = {} must exceed {bound}", radii[0])));
        }
        Ok(Self { wp, y_set, thetas, radii, method, quantity: Quantity::Value, quad: QuadSpec::default() })
    }

    pub fn with_quantity(mut self, quantity: Quantity) -> Self {
        self.quantity = quantity;
        self
    }

    pub fn with_quad(mut self, quad: QuadSpec) -> Result<Self> {
        quad.validate()?;
        self.quad = quad;
        Ok(self)
    }

    pub fn wp(&self) -> &WaveProfile {
        &self.wp
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn r0(&self) -> f64 {
        self.y_set.iter().map(Point::r).fold(0.0, f64::max)
    }
}

/// One evaluated sweep point. For gradient sweeps `re`/`im` hold the radial
/// component x_hat . H_Res and `abs_residual` the Euclidean norm.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SweepRow {
    pub theta: f64,
    pub y1: f64,
    pub y2: f64,
    pub r: f64,
    pub re: f64,
    pub im: f64,
    pub abs_residual: f64,
    pub flag: bool,
}

/// Outcome of an envelope or sharpness test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Inconclusive => "INCONCLUSIVE",
        })
    }
}

/// Per (direction, source) summary of a sweep.
#[derive(Debug, Clone, Serialize)]
pub struct SweepSummary {
    pub theta: f64,
    pub y: [f64; 2],
    pub critical_offset: Option<f64>,
    pub near_critical: bool,
    pub clear_points: usize,
    pub fit: Option<RateFit>,
    /// Smallest C with |G_Res| <= C * envelope over all clear radii.
    pub constant: f64,
    /// The same over clear radii in the last decade.
    pub constant_last_decade: f64,
    pub verdict: Verdict,
}

/// Rows and summaries of an envelope check.
#[derive(Debug, Clone, Serialize)]
pub struct EnvelopeReport {
    pub k_plus: f64,
    pub k_minus: f64,
    pub quantity: Quantity,
    pub method: Method,
    pub rows: Vec<SweepRow>,
    pub summaries: Vec<SweepSummary>,
}

impl EnvelopeReport {
    /// Overall verdict: FAIL if any sweep fails, INCONCLUSIVE if any is, else PASS.
    pub fn verdict(&self) -> Verdict {
        let vs = self.summaries.iter().map(|s| s.verdict);
        if vs.clone().any(|v| v == Verdict::Fail) {
            Verdict::Fail
        } else if vs.into_iter().any(|v| v == Verdict::Inconclusive) {
            Verdict::Inconclusive
        } else {
            Verdict::Pass
        }
    }

    pub fn summary(&self, theta: f64, y: &Point) -> Option<&SweepSummary> {
        self.summaries.iter().find(|s| s.theta == theta && s.y == [y.x1, y.x2])
    }
}

fn sweep_row(plan: &SweepPlan, theta: f64, y: &Point, r: f64) -> Result<SweepRow> {
    let x = Point::polar(r, theta);
    let (re, im, abs, flag) = match plan.quantity {
        Quantity::Value => {
            let res = residual(&plan.wp, &x, y, plan.method, &plan.quad)?;
            (res.value.re, res.value.im, res.value.norm(), res.flagged)
        }
        Quantity::Gradient => {
            let res = h_residual(&plan.wp, &x, y, plan.method, &plan.quad)?;
            let (s, c) = theta.sin_cos();
            let radial = res.value.dot_real([c, s]);
            (radial.re, radial.im, res.value.norm(), res.flagged)
        }
    };
    Ok(SweepRow { theta, y1: y.x1, y2: y.x2, r, re, im, abs_residual: abs, flag })
}

/// Evaluate every (direction, source, radius) of a plan in parallel, in plan order.
pub fn run_sweep(plan: &SweepPlan) -> Result<Vec<SweepRow>> {
    let tasks: Vec<(f64, Point, f64)> = plan
        .thetas
        .iter()
        .flat_map(|d| plan.y_set.iter().flat_map(move |y| plan.radii.iter().map(move |&r| (d.theta(), *y, r))))
        .collect();
    tasks.par_iter().map(|(t, y, r)| sweep_row(plan, *t, y, *r)).collect()
}

fn summarize(plan: &SweepPlan, theta: f64, y: &Point, rows: &[SweepRow]) -> SweepSummary {
    let wp = &plan.wp;
    let r_max = plan.radii[plan.radii.len() - 1];
    let scale = match plan.quantity {
        Quantity::Value => 1.0,
        Quantity::Gradient => wp.k_of(FarDirection::new(theta).map(|d| d.half()).unwrap_or(Half::Upper)),
    };
    let clear: Vec<&SweepRow> = rows.iter().filter(|r| !r.flag && r.abs_residual > 0.0).collect();
    let ratio = |row: &SweepRow| row.abs_residual / (scale * predicted_envelope(wp, theta, row.r));
    let constant = clear.iter().map(|r| ratio(r)).fold(0.0, f64::max);
    let last: Vec<&&SweepRow> = clear.iter().filter(|r| r.r >= r_max / 10.0 * (1.0 - 1e-12)).collect();
    let constant_last_decade = last.iter().map(|r| ratio(r)).fold(0.0, f64::max);
    let radii: Vec<f64> = clear.iter().map(|r| r.r).collect();
    let mags: Vec<f64> = clear.iter().map(|r| r.abs_residual).collect();
    let fit = fit_rate(&radii, &mags).ok();
    let verdict = if clear.len() < MIN_CLEAR_POINTS || last.is_empty() {
        Verdict::Inconclusive
    } else if constant.is_finite() && constant > 0.0 && constant <= 2.0 * constant_last_decade {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    SweepSummary {
        theta,
        y: [y.x1, y.x2],
        critical_offset: critical_offset(wp, theta),
        near_critical: is_near_critical(wp, theta, r_max),
        clear_points: clear.len(),
        fit,
        constant,
        constant_last_decade,
        verdict,
    }
}

/// Sweep the plan and test |Res| <= C min(r^{-3/4}, |dtheta_c|^{-3/2} r^{-3/2}).
pub fn envelope_check(plan: &SweepPlan) -> Result<EnvelopeReport> {
    let rows = run_sweep(plan)?;
    let n = plan.radii.len();
    let mut summaries = Vec::new();
    let mut chunks = rows.chunks(n);
    for d in &plan.thetas {
        for y in &plan.y_set {
            let chunk = chunks.next().expect("one chunk per sweep");
            summaries.push(summarize(plan, d.theta(), y, chunk));
        }
    }
    Ok(EnvelopeReport {
        k_plus: plan.wp.k_plus(),
        k_minus: plan.wp.k_minus(),
        quantity: plan.quantity,
        method: plan.method,
        rows,
        summaries,
    })
}

/// Scaled residual sequences at one critical angle.
#[derive(Debug, Clone, Serialize)]
pub struct SharpnessSeries {
    pub theta: f64,
    pub radii: Vec<f64>,
    /// |G_Res| r^{3/4}.
    pub scaled_34: Vec<f64>,
    /// |G_Res| r^{3/2}.
    pub scaled_32: Vec<f64>,
    /// Any radius with a budget flag.
    pub flagged: bool,
    /// Last three values of `scaled_34` at least half their median.
    pub bounded_below: bool,
    /// `scaled_32` strictly increasing over the last decade.
    pub growing: bool,
    pub verdict: Verdict,
}

/// Sharpness probe at every critical angle.
#[derive(Debug, Clone, Serialize)]
pub struct SharpnessReport {
    pub k_plus: f64,
    pub k_minus: f64,
    pub y: [f64; 2],
    pub series: Vec<SharpnessSeries>,
}

impl SharpnessReport {
    pub fn verdict(&self) -> Verdict {
        if self.series.iter().any(|s| s.verdict == Verdict::Fail) {
            Verdict::Fail
        } else if self.series.iter().any(|s| s.verdict == Verdict::Inconclusive) {
            Verdict::Inconclusive
        } else {
            Verdict::Pass
        }
    }
}

fn median(v: &[f64]) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    let m = s.len() / 2;
    if s.len() % 2 == 1 {
        s[m]
    } else {
        0.5 * (s[m - 1] + s[m])
    }
}

/// Probe non-vanishing of |G_Res| r^{3/4} at the critical angles over `radii`.
pub fn sharpness_probe(wp: &WaveProfile, y: &Point, radii: &[f64], method: Method, q: &QuadSpec) -> Result<SharpnessReport> {
    let angles = critical_angles(wp);
    if angles.is_empty() {
        return Err(GreenError::NoCriticalAngle);
    }
    let dirs = angles.iter().map(|&t| FarDirection::new(t)).collect::<Result<Vec<_>>>()?;
    let plan = SweepPlan::new(*wp, vec![*y], dirs, radii.to_vec(), method)?.with_quad(*q)?;
    let rows = run_sweep(&plan)?;
    let r_max = radii[radii.len() - 1];
    let series = angles
        .iter()
        .zip(rows.chunks(radii.len()))
        .map(|(&theta, chunk)| {
            let scaled_34: Vec<f64> = chunk.iter().map(|r| r.abs_residual * r.r.powf(0.75)).collect();
            let scaled_32: Vec<f64> = chunk.iter().map(|r| r.abs_residual * r.r.powf(1.5)).collect();
            let flagged = chunk.iter().any(|r| r.flag);
            let med = median(&scaled_34);
            let bounded_below = scaled_34.len() >= 3 && scaled_34[scaled_34.len() - 3..].iter().all(|&v| v >= 0.5 * med);
            let tail: Vec<f64> = chunk
                .iter()
                .zip(&scaled_32)
                .filter(|(r, _)| r.r >= r_max / 10.0 * (1.0 - 1e-12))
                .map(|(_, v)| *v)
                .collect();
            let growing = tail.len() >= 2 && tail.windows(2).all(|w| w[1] > w[0]);
            let verdict = if flagged || chunk.len() < MIN_CLEAR_POINTS {
                Verdict::Inconclusive
            } else if bounded_below && growing {
                Verdict::Pass
            } else {
                Verdict::Fail
            };
            SharpnessSeries { theta, radii: radii.to_vec(), scaled_34, scaled_32, flagged, bounded_below, growing, verdict }
        })
        .collect();
    Ok(SharpnessReport { k_plus: wp.k_plus(), k_minus: wp.k_minus(), y: [y.x1, y.x2], series })
}
