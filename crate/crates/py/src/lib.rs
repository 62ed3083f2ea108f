//! Python bindings for the layered Green function.

use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use layered_green::asymptotics::{self, Method};
use layered_green::farfield::{self, FarDirection};
use layered_green::sommerfeld;
use layered_green::verify::{run_suite, Suite};
use layered_green::{GreenError, Point, QuadSpec, WaveProfile};

fn to_py(e: GreenError) -> PyErr {
    match e {
        GreenError::Convergence { .. } | GreenError::Accuracy(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn profile(k_plus: f64, k_minus: f64) -> PyResult<WaveProfile> {
    WaveProfile::new(k_plus, k_minus).map_err(to_py)
}

fn point(p: (f64, f64)) -> Point {
    Point::new(p.0, p.1)
}

fn method(m: &str) -> PyResult<Method> {
    m.parse().map_err(to_py)
}

/// G(x, y) for wavenumbers (k_plus, k_minus); method is "quad", "saddle" or "auto".
#[pyfunction]
#[pyo3(signature = (k_plus, k_minus, x, y, method = "quad"))]
fn green(k_plus: f64, k_minus: f64, x: (f64, f64), y: (f64, f64), method: &str) -> PyResult<Complex64> {
    let wp = profile(k_plus, k_minus)?;
    let m = self::method(method)?;
    asymptotics::evaluate_green(&wp, &point(x), &point(y), m, &QuadSpec::default()).map(|v| v.0).map_err(to_py)
}

/// Source gradient (dG/dy1, dG/dy2).
#[pyfunction]
#[pyo3(signature = (k_plus, k_minus, x, y, method = "quad"))]
fn grad_y(k_plus: f64, k_minus: f64, x: (f64, f64), y: (f64, f64), method: &str) -> PyResult<(Complex64, Complex64)> {
    let wp = profile(k_plus, k_minus)?;
    let m = self::method(method)?;
    let (g, _, _) = asymptotics::evaluate_grad(&wp, &point(x), &point(y), m, &QuadSpec::default()).map_err(to_py)?;
    Ok((g.0, g.1))
}

/// Free-space kernel (i/4) H0(k |x - y|).
#[pyfunction]
fn free_green(k: f64, x: (f64, f64), y: (f64, f64)) -> PyResult<Complex64> {
    sommerfeld::free_green(k, &point(x), &point(y)).map_err(to_py)
}

/// Far-field pattern G^inf(theta, y).
#[pyfunction]
fn g_farfield(k_plus: f64, k_minus: f64, theta: f64, y: (f64, f64)) -> PyResult<Complex64> {
    let wp = profile(k_plus, k_minus)?;
    let d = FarDirection::new(theta).map_err(to_py)?;
    farfield::g_farfield(&d, &point(y), &wp).map_err(to_py)
}

/// Gradient pattern H^inf(theta, y).
#[pyfunction]
fn h_farfield(k_plus: f64, k_minus: f64, theta: f64, y: (f64, f64)) -> PyResult<(Complex64, Complex64)> {
    let wp = profile(k_plus, k_minus)?;
    let d = FarDirection::new(theta).map_err(to_py)?;
    farfield::h_farfield(&d, &point(y), &wp).map(|h| (h.0, h.1)).map_err(to_py)
}

/// Critical observation angles in [0, 2 pi).
#[pyfunction]
fn critical_angles(k_plus: f64, k_minus: f64) -> PyResult<Vec<f64>> {
    Ok(asymptotics::critical_angles(&profile(k_plus, k_minus)?))
}

/// (R, T, R tilde, T tilde) at angle theta in (0, pi).
#[pyfunction]
fn coefficients(k_plus: f64, k_minus: f64, theta: f64) -> PyResult<(Complex64, Complex64, Complex64, Complex64)> {
    let wp = profile(k_plus, k_minus)?;
    let f = |r: layered_green::Result<Complex64>| r.map_err(to_py);
    Ok((
        f(farfield::refl_coeff(theta, &wp))?,
        f(farfield::trans_coeff(theta, &wp))?,
        f(farfield::refl_tilde(theta, &wp))?,
        f(farfield::trans_tilde(theta, &wp))?,
    ))
}

/// Residual G - e^{ikr} r^{-1/2} G^inf as (value, envelope, flagged).
#[pyfunction]
#[pyo3(signature = (k_plus, k_minus, x, y, method = "auto"))]
fn residual(k_plus: f64, k_minus: f64, x: (f64, f64), y: (f64, f64), method: &str) -> PyResult<(Complex64, f64, bool)> {
    let wp = profile(k_plus, k_minus)?;
    let m = self::method(method)?;
    let r = asymptotics::residual(&wp, &point(x), &point(y), m, &QuadSpec::default()).map_err(to_py)?;
    Ok((r.value, r.envelope, r.flagged))
}

/// Run one verification suite; returns (name, measured, tolerance, passed) per check.
#[pyfunction]
#[pyo3(signature = (suite, seed = 2024))]
fn verify(suite: &str, seed: u64) -> PyResult<Vec<(String, f64, f64, bool)>> {
    let s: Suite = suite.parse().map_err(to_py)?;
    let checks = run_suite(s, seed, &QuadSpec::default()).map_err(to_py)?;
    Ok(checks.into_iter().map(|c| (c.name, c.measured, c.tolerance, c.passed)).collect())
}

#[pymodule]
fn layered_green_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(green, m)?)?;
    m.add_function(wrap_pyfunction!(grad_y, m)?)?;
    m.add_function(wrap_pyfunction!(free_green, m)?)?;
    m.add_function(wrap_pyfunction!(g_farfield, m)?)?;
    m.add_function(wrap_pyfunction!(h_farfield, m)?)?;
    m.add_function(wrap_pyfunction!(critical_angles, m)?)?;
    m.add_function(wrap_pyfunction!(coefficients, m)?)?;
    m.add_function(wrap_pyfunction!(residual, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
