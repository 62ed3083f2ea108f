//! Exterior representation and far-field formulas on a circle, checked
//! against manufactured radiating fields u = G(., z0).

use std::f64::consts::PI;
use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::asymptotics::critical_angles;
use crate::error::{GreenError, Result};
use crate::farfield::{g_farfield, h_farfield, FarDirection};
use crate::geometry::{Half, Point, WaveOrdering, WaveProfile, C64};
use crate::quadrature::{gauss_legendre, QuadSpec};
use crate::sommerfeld::{grad_x_green, grad_y_green, green};

/// A quadrature node on the circle.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TraceNode {
    /// Polar angle of the node.
    pub angle: f64,
    pub point: Point,
    /// Unit outward normal.
    pub normal: [f64; 2],
    /// Arc-length weight.
    pub weight: f64,
}

/// Cauchy data of a radiating field on the circle |y| = R, split into the
/// upper arc (0, pi) and the lower arc (pi, 2 pi).
#[derive(Debug, Clone, Serialize)]
pub struct CircleTrace {
    radius: f64,
    nodes: Vec<TraceNode>,
    u: Vec<C64>,
    du_dn: Vec<C64>,
    split_points: [Point; 2],
}

impl CircleTrace {
    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn nodes(&self) -> &[TraceNode] {
        &self.nodes
    }

    pub fn u(&self) -> &[C64] {
        &self.u
    }

    pub fn du_dn(&self) -> &[C64] {
        &self.du_dn
    }

    pub fn split_points(&self) -> &[Point; 2] {
        &self.split_points
    }

    pub fn n_per_arc(&self) -> usize {
        self.nodes.len() / 2
    }

    /// CSV dump with columns theta_node, re_u, im_u, re_dudn, im_dudn.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| GreenError::Io(e.to_string());
        w.write_record(["theta_node", "re_u", "im_u", "re_dudn", "im_dudn"]).map_err(io)?;
        for ((n, u), d) in self.nodes.iter().zip(&self.u).zip(&self.du_dn) {
            w.serialize((n.angle, u.re, u.im, d.re, d.im)).map_err(io)?;
        }
        w.flush().map_err(|e| GreenError::Io(e.to_string()))
    }
}

/// Gauss-Legendre nodes on both arcs of the circle of radius `radius`.
pub fn circle_nodes(radius: f64, n_per_arc: usize) -> Vec<TraceNode> {
    let (x, w) = gauss_legendre(n_per_arc);
    let mut nodes = Vec::with_capacity(2 * n_per_arc);
    for arc in 0..2 {
        let a = arc as f64 * PI;
        for (xi, wi) in x.iter().zip(&w) {
            let angle = a + 0.5 * PI * (xi + 1.0);
            let (s, c) = angle.sin_cos();
            nodes.push(TraceNode {
                angle,
                point: Point::new(radius * c, radius * s),
                normal: [c, s],
                weight: 0.5 * PI * wi * radius,
            });
        }
    }
    nodes
}

/// Trace of the manufactured field G(., z0) and its normal derivative on |y| = R.
pub fn manufacture_trace(wp: &WaveProfile, z0: &Point, radius: f64, n_per_arc: usize, q: &QuadSpec) -> Result<CircleTrace> {
    z0.require_off_interface("source point")?;
    if !(radius.is_finite() && radius > z0.r()) {
        return Err(GreenError::Domain(format!("radius {radius} must exceed |z0| = {}", z0.r())));
    }
    if n_per_arc < 2 {
        return Err(GreenError::Domain("at least two nodes per arc".into()));
    }
    let nodes = circle_nodes(radius, n_per_arc);
    let data: Vec<(C64, C64)> = nodes
        .par_iter()
        .map(|n| {
            let u = green(wp, &n.point, z0, q)?.value;
            let du = grad_x_green(wp, &n.point, z0, q)?.value.dot_real(n.normal);
            Ok((u, du))
        })
        .collect::<Result<_>>()?;
    let (u, du_dn) = data.into_iter().unzip();
    Ok(CircleTrace {
        radius,
        nodes,
        u,
        du_dn,
        split_points: [Point::new(radius, 0.0), Point::new(-radius, 0.0)],
    })
}

/// Exterior value int [dG(x, y)/dnu(y) u(y) - du/dnu(y) G(x, y)] ds(y).
pub fn represent_exterior(trace: &CircleTrace, x: &Point, wp: &WaveProfile, q: &QuadSpec) -> Result<C64> {
    x.require_off_interface("field point")?;
    if x.r() <= trace.radius {
        return Err(GreenError::Domain(format!("|x| = {} must exceed R = {}", x.r(), trace.radius)));
    }
    let terms: Vec<C64> = trace
        .nodes
        .par_iter()
        .zip(trace.u.par_iter().zip(trace.du_dn.par_iter()))
        .map(|(n, (u, du))| {
            let g = green(wp, x, &n.point, q)?.value;
            let dg = grad_y_green(wp, x, &n.point, q)?.value.dot_real(n.normal);
            Ok((dg * u - du * g) * n.weight)
        })
        .collect::<Result<_>>()?;
    Ok(terms.into_iter().sum())
}

/// Evaluate the representation at many exterior points, in order.
pub fn represent_many(trace: &CircleTrace, xs: &[Point], wp: &WaveProfile, q: &QuadSpec) -> Result<Vec<C64>> {
    xs.par_iter().map(|x| represent_exterior(trace, x, wp, q)).collect()
}

/// Far-field pattern int [dG^inf(x_hat, y)/dnu(y) u(y) - du/dnu(y) G^inf(x_hat, y)] ds(y).
pub fn farfield_from_boundary(trace: &CircleTrace, dir: &FarDirection, wp: &WaveProfile) -> Result<C64> {
    let mut sum = C64::new(0.0, 0.0);
    for ((n, u), du) in trace.nodes.iter().zip(&trace.u).zip(&trace.du_dn) {
        let g = g_farfield(dir, &n.point, wp)?;
        let dg = h_farfield(dir, &n.point, wp)?.dot_real(n.normal);
        sum += (dg * u - du * g) * n.weight;
    }
    Ok(sum)
}

/// Angular regularity of u^inf on one half of the circle of directions.
#[derive(Debug, Clone, Serialize)]
pub struct HalfRegularity {
    pub half: Half,
    /// Whether the pattern is expected to be C^1 on this half.
    pub expected_c1: bool,
    /// max |d u^inf / d theta| over the grid.
    pub max_derivative: f64,
    /// Trapezoid integral of |d u^inf / d theta|.
    pub derivative_integral: f64,
    /// Critical angles inside this half.
    pub critical_angles: Vec<f64>,
    /// Grid angles where |d u^inf / d theta| has a local maximum above
    /// `SPIKE_FACTOR` times its median.
    pub spikes: Vec<f64>,
}

/// Threshold of a derivative spike relative to the median.
pub const SPIKE_FACTOR: f64 = 5.0;

/// Regularity report of the far-field pattern on both halves.
#[derive(Debug, Clone, Serialize)]
pub struct RegularityReport {
    pub cells_per_half: usize,
    pub upper: HalfRegularity,
    pub lower: HalfRegularity,
}

fn scan_half(trace: &CircleTrace, wp: &WaveProfile, half: Half, cells: usize) -> Result<HalfRegularity> {
    let a = if half == Half::Upper { 0.0 } else { PI };
    let h = PI / cells as f64;
    // samples at cell edges strictly inside the half, derivatives at cell midpoints
    let thetas: Vec<f64> = (1..cells).map(|j| a + j as f64 * h).collect();
    let values: Vec<C64> = thetas
        .par_iter()
        .map(|&t| farfield_from_boundary(trace, &FarDirection::new(t)?, wp))
        .collect::<Result<_>>()?;
    let deriv: Vec<f64> = values.windows(2).map(|w| (w[1] - w[0]).norm() / h).collect();
    let mids: Vec<f64> = thetas.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
    let max_derivative = deriv.iter().copied().fold(0.0, f64::max);
    let derivative_integral = deriv.iter().sum::<f64>() * h;
    let mut sorted = deriv.clone();
    sorted.sort_by(f64::total_cmp);
    let median = sorted.get(sorted.len() / 2).copied().unwrap_or(0.0);
    let spikes = (1..deriv.len().saturating_sub(1))
        .filter(|&i| deriv[i] >= deriv[i - 1] && deriv[i] >= deriv[i + 1] && deriv[i] > SPIKE_FACTOR * median)
        .map(|i| mids[i])
        .collect();
    let crit: Vec<f64> = critical_angles(wp).into_iter().filter(|&c| c > a && c < a + PI).collect();
    let expected_c1 = crit.is_empty();
    Ok(HalfRegularity { half, expected_c1, max_derivative, derivative_integral, critical_angles: crit, spikes })
}

/// Sample u^inf on `cells_per_half` cells of each half and report derivative
/// bounds, integrability proxies and singularity locations.
pub fn pattern_regularity_scan(trace: &CircleTrace, wp: &WaveProfile, cells_per_half: usize) -> Result<RegularityReport> {
    if cells_per_half < 8 {
        return Err(GreenError::Domain("regularity scan needs at least 8 cells per half".into()));
    }
    Ok(RegularityReport {
        cells_per_half,
        upper: scan_half(trace, wp, Half::Upper, cells_per_half)?,
        lower: scan_half(trace, wp, Half::Lower, cells_per_half)?,
    })
}

/// Half of the direction circle on which u^inf is C^1, if only one is.
pub fn smooth_half(wp: &WaveProfile) -> Option<Half> {
    match wp.ordering() {
        WaveOrdering::PlusGreater => Some(Half::Lower),
        WaveOrdering::PlusLess => Some(Half::Upper),
        WaveOrdering::Equal => None,
    }
}
