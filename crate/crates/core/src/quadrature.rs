//! Adaptive Gauss-Kronrod, tanh-sinh and Gauss-Legendre rules for real and
//! complex integrands.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::FRAC_PI_2;
use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{GreenError, Result};
use crate::geometry::{C64, Pair};

/// Quadrature budget shared by the spectral and saddle integrators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Spectral tails are cut where the exponential decay factor drops below this.
    pub truncation_decay: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadSpec {
    fn default() -> Self {
        Self { rel_tol: 1e-10, abs_tol: 1e-13, truncation_decay: 1e-18, max_subdivisions: 200_000 }
    }
}

impl QuadSpec {
    pub fn validate(&self) -> Result<()> {
        let ok = self.rel_tol.is_finite()
            && self.rel_tol > 0.0
            && self.abs_tol.is_finite()
            && self.abs_tol > 0.0
            && self.truncation_decay > 0.0
            && self.truncation_decay < 1.0
            && self.max_subdivisions > 0;
        if ok {
            Ok(())
        } else {
            Err(GreenError::Config(format!("invalid quadrature budget {self:?}")))
        }
    }

    pub(crate) fn tolerance(&self, magnitude: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * magnitude)
    }
}

/// Values that can be integrated: a vector space over the reals with a norm.
pub trait QuadValue: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl QuadValue for C64 {
    fn zero() -> Self {
        C64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

impl QuadValue for Pair {
    fn zero() -> Self {
        Pair::zero()
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

/// Integral value with an error estimate.
#[derive(Debug, Clone, Copy)]
pub struct Integral<T> {
    pub value: T,
    pub error: f64,
    pub evaluations: usize,
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// One 21-point Kronrod panel: (value, error estimate).
fn gk21<T: QuadValue, F: FnMut(f64) -> Result<T>>(f: &mut F, a: f64, b: f64) -> Result<(T, f64)> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut fv = [T::zero(); 21];
    fv[10] = f(c)?;
    for j in 0..10 {
        let dx = h * XGK[j];
        fv[j] = f(c - dx)?;
        fv[20 - j] = f(c + dx)?;
    }
    let mut kron = fv[10] * WGK[10];
    let mut gauss = T::zero();
    for j in 0..10 {
        let pair = fv[j] + fv[20 - j];
        kron = kron + pair * WGK[j];
        if j % 2 == 1 {
            gauss = gauss + pair * WG[j / 2];
        }
    }
    let mean = kron * 0.5;
    let mut resasc = WGK[10] * (fv[10] - mean).magnitude();
    for j in 0..10 {
        resasc += WGK[j] * ((fv[j] - mean).magnitude() + (fv[20 - j] - mean).magnitude());
    }
    resasc *= h.abs();
    let diff = ((kron - gauss) * h).magnitude();
    let mut err = diff;
    if resasc > 0.0 && diff > 0.0 {
        err = resasc * (200.0 * diff / resasc).powf(1.5).min(1.0);
    }
    if !err.is_finite() {
        return Err(GreenError::Convergence { estimate: f64::INFINITY, tolerance: 0.0 });
    }
    Ok((kron * h, err.max(f64::EPSILON * (kron * h).magnitude())))
}

struct Panel<T> {
    a: f64,
    b: f64,
    value: T,
    error: f64,
}

struct Key(f64, usize);

impl PartialEq for Key {
    fn eq(&self, o: &Self) -> bool {
        self.0 == o.0
    }
}
impl Eq for Key {}
impl PartialOrd for Key {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Key {
    fn cmp(&self, o: &Self) -> Ordering {
        self.0.total_cmp(&o.0)
    }
}

/// Globally adaptive 21-point Gauss-Kronrod over a union of intervals.
///
/// Each `(a, b, panels)` entry is first cut into `panels` equal pieces; the piece
/// with the largest error estimate is then bisected until the summed estimate
/// meets `spec`.
pub fn integrate_intervals<T, F>(mut f: F, intervals: &[(f64, f64, usize)], spec: &QuadSpec) -> Result<Integral<T>>
where
    T: QuadValue,
    F: FnMut(f64) -> Result<T>,
{
    let mut panels: Vec<Panel<T>> = Vec::new();
    let mut heap = BinaryHeap::new();
    let mut total = T::zero();
    let mut total_err = 0.0;
    let mut frozen_err = 0.0;
    let mut mass = 0.0;
    let mut evaluations = 0;
    for &(a, b, n) in intervals {
        let n = n.max(1);
        let w = (b - a) / n as f64;
        for i in 0..n {
            let lo = a + w * i as f64;
            let hi = if i + 1 == n { b } else { lo + w };
            let (v, e) = gk21(&mut f, lo, hi)?;
            evaluations += 21;
            total = total + v;
            total_err += e;
            mass += v.magnitude();
            heap.push(Key(e, panels.len()));
            panels.push(Panel { a: lo, b: hi, value: v, error: e });
        }
    }
    loop {
        // below a few ulps of the summed panel moduli nothing more can be gained
        let tol = spec.tolerance(total.magnitude()).max(4.0 * f64::EPSILON * mass);
        if total_err <= tol {
            break;
        }
        if panels.len() >= spec.max_subdivisions {
            return Err(GreenError::Convergence { estimate: total_err, tolerance: tol });
        }
        let Some(Key(_, idx)) = heap.pop() else {
            // only roundoff-width panels remain
            if frozen_err >= 0.5 * total_err {
                break;
            }
            return Err(GreenError::Convergence { estimate: total_err, tolerance: tol });
        };
        let (a, b, old_v, old_e) = {
            let p = &panels[idx];
            (p.a, p.b, p.value, p.error)
        };
        let m = 0.5 * (a + b);
        if !(m > a.min(b) && m < a.max(b)) || (b - a).abs() <= 1e-15 * (a.abs() + b.abs()) {
            // panel at roundoff width: keep its contribution and stop refining it
            frozen_err += old_e;
            continue;
        }
        let (v1, e1) = gk21(&mut f, a, m)?;
        let (v2, e2) = gk21(&mut f, m, b)?;
        evaluations += 42;
        total = total - old_v + v1 + v2;
        total_err += e1 + e2 - old_e;
        mass += v1.magnitude() + v2.magnitude() - old_v.magnitude();
        panels[idx] = Panel { a, b: m, value: v1, error: e1 };
        heap.push(Key(e1, idx));
        heap.push(Key(e2, panels.len()));
        panels.push(Panel { a: m, b, value: v2, error: e2 });
    }
    let mut value = T::zero();
    let mut error = 0.0;
    for p in &panels {
        value = value + p.value;
        error += p.error;
    }
    Ok(Integral { value, error, evaluations })
}

/// Adaptive Gauss-Kronrod on a single interval.
pub fn integrate<T, F>(f: F, a: f64, b: f64, spec: &QuadSpec) -> Result<Integral<T>>
where
    T: QuadValue,
    F: FnMut(f64) -> Result<T>,
{
    integrate_intervals(f, &[(a, b, 1)], spec)
}

/// Tanh-sinh quadrature on [a, b] with level doubling; suited to endpoint
/// algebraic singularities.
///
/// The integrand receives the abscissa together with its distance to the
/// nearer endpoint, computed without cancellation.
pub fn tanh_sinh<T, F>(mut f: F, a: f64, b: f64, spec: &QuadSpec) -> Result<Integral<T>>
where
    T: QuadValue,
    F: FnMut(f64, f64) -> Result<T>,
{
    let half = 0.5 * (b - a);
    let c = 0.5 * (a + b);
    let mut evaluations = 1;
    let mut sum = f(c, half.abs())? * FRAC_PI_2;
    let mut h = 1.0;
    let mut add_nodes = |t0: f64, step: f64, sum: &mut T, evaluations: &mut usize| -> Result<()> {
        let mut t = t0;
        loop {
            let u = FRAC_PI_2 * t.sinh();
            let q = (-2.0 * u).exp();
            let d = half.abs() * 2.0 * q / (1.0 + q);
            let w = FRAC_PI_2 * t.cosh() * 4.0 * q / ((1.0 + q) * (1.0 + q));
            if d == 0.0 || w < 1e-300 || t > 6.5 {
                break;
            }
            let dir = half.signum();
            let xl = a + dir * d;
            let xr = b - dir * d;
            let fl = f(xl, d)?;
            let fr = f(xr, d)?;
            *evaluations += 2;
            let term = (fl + fr) * w;
            *sum = *sum + term;
            if term.magnitude() <= 1e-18 * sum.magnitude() && t > 3.0 {
                break;
            }
            t += step;
        }
        Ok(())
    };
    add_nodes(1.0, 1.0, &mut sum, &mut evaluations)?;
    let mut prev = sum * (h * half);
    let mut err = f64::INFINITY;
    for level in 1..=10 {
        h *= 0.5;
        add_nodes(h, 2.0 * h, &mut sum, &mut evaluations)?;
        let cur = sum * (h * half);
        err = (cur - prev).magnitude();
        if err <= spec.tolerance(cur.magnitude()) && level >= 3 {
            return Ok(Integral { value: cur, error: err, evaluations });
        }
        prev = cur;
    }
    Err(GreenError::Convergence { estimate: err, tolerance: spec.tolerance(prev.magnitude()) })
}

/// Gauss-Legendre nodes and weights on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> QuadSpec {
        QuadSpec { rel_tol: 1e-12, abs_tol: 1e-15, ..QuadSpec::default() }
    }

    #[test]
    fn gk_polynomial_and_oscillatory() {
        let r = integrate(|x: f64| Ok(x.powi(5) - 3.0 * x * x), -1.0, 2.0, &spec()).unwrap();
        let exact = (64.0 - 1.0) / 6.0 - (8.0 + 1.0);
        assert!((r.value - exact).abs() < 1e-13);
        let r = integrate(|x: f64| Ok(C64::new(0.0, 40.0 * x).exp()), 0.0, 3.0, &spec()).unwrap();
        let exact = (C64::new(0.0, 120.0).exp() - 1.0) / C64::new(0.0, 40.0);
        assert!((r.value - exact).norm() < 1e-12);
    }

    #[test]
    fn gk_endpoint_singularity() {
        let r = integrate(|x: f64| Ok(1.0 / x.sqrt()), 0.0, 1.0, &spec()).unwrap();
        assert!((r.value - 2.0).abs() < 1e-11, "{}", r.value);
    }

    #[test]
    fn gk_reversed_interval_and_pairs() {
        let r = integrate(|x: f64| Ok(Pair(C64::new(x, 0.0), C64::new(0.0, 1.0))), 1.0, 0.0, &spec()).unwrap();
        assert!((r.value.0 - C64::new(-0.5, 0.0)).norm() < 1e-14);
        assert!((r.value.1 - C64::new(0.0, -1.0)).norm() < 1e-14);
    }

    #[test]
    fn gk_budget_exhaustion_reports_convergence_error() {
        let tight = QuadSpec { max_subdivisions: 4, ..spec() };
        let r = integrate(|x: f64| Ok((1000.0 * x).sin()), 0.0, 10.0, &tight);
        assert!(matches!(r, Err(GreenError::Convergence { .. })));
    }

    #[test]
    fn tanh_sinh_singular_endpoints() {
        let r = tanh_sinh(|x: f64, _d: f64| Ok(1.0 / x.sqrt()), 0.0, 1.0, &spec()).unwrap();
        assert!((r.value - 2.0).abs() < 1e-12, "{}", r.value);
        // the distance argument resolves the right endpoint without cancellation
        let r = tanh_sinh(|_x: f64, d: f64| Ok(1.0 / (d * (1.0 - d)).sqrt()), 0.0, 1.0, &spec()).unwrap();
        assert!((r.value - std::f64::consts::PI).abs() < 1e-12, "{}", r.value);
        let r = tanh_sinh(|x: f64, _d: f64| Ok(x.ln()), 0.0, 1.0, &spec()).unwrap();
        assert!((r.value + 1.0).abs() < 1e-12);
    }

    #[test]
    fn gauss_legendre_exactness() {
        for &n in &[1usize, 2, 5, 16, 64, 128] {
            let (x, w) = gauss_legendre(n);
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-13);
            let deg = 2 * n - 2;
            let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32)).sum();
            assert!((s - 2.0 / (deg as f64 + 1.0)).abs() < 1e-13, "n={n}");
        }
    }
}
