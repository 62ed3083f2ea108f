//! Batch front-end: evaluation, coefficient tables, rate sweeps, verification
//! suites and manufactured-trace demos with CSV or JSON output.
//!
//! Exit codes: 0 success, 2 domain or configuration error, 3 convergence or
//! accuracy failure, 4 failed sweep or failed verification check.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::asymptotics::{
    critical_angles, envelope_check, evaluate_grad, evaluate_green, geometric_radii, sharpness_probe, EnvelopeReport, Method,
    Quantity, SharpnessReport, SweepPlan, Verdict,
};
use crate::error::{GreenError, Result};
use crate::farfield::{g_farfield, refl_coeff, refl_tilde, trans_coeff, trans_tilde, FarDirection};
use crate::geometry::{Point, WaveProfile};
use crate::quadrature::QuadSpec;
use crate::scattering::{farfield_from_boundary, manufacture_trace, represent_many};
use crate::sommerfeld::green;
use crate::verify::{run_suite, Check, Suite};

/// Exit code of a failed sweep or verification check.
pub const EXIT_FAILED_CHECK: i32 = 4;

/// Version of the CSV and JSON layouts.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = GreenError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(GreenError::Config(format!("unknown format {s:?}"))),
        }
    }
}

/// Resolved run configuration: defaults, then the config file, then flags.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub k_plus: f64,
    pub k_minus: f64,
    pub quad: QuadSpec,
    pub output: Option<PathBuf>,
    pub format: Format,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self { k_plus: 2.0, k_minus: 1.0, quad: QuadSpec::default(), output: None, format: Format::Csv, seed: 2024 }
    }
}

fn parse_num<T: FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse().map_err(|_| GreenError::Config(format!("bad value {v:?} for {key}")))
}

impl RunConfig {
    /// Apply newline-separated `key=value` pairs; blank lines and `#` comments are skipped.
    pub fn apply_kv(&mut self, text: &str) -> Result<()> {
        for (no, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| GreenError::Config(format!("line {}: expected key=value", no + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "k_plus" => self.k_plus = parse_num(key, value)?,
                "k_minus" => self.k_minus = parse_num(key, value)?,
                "rel_tol" => self.quad.rel_tol = parse_num(key, value)?,
                "abs_tol" => self.quad.abs_tol = parse_num(key, value)?,
                "truncation_decay" => self.quad.truncation_decay = parse_num(key, value)?,
                "max_subdivisions" => self.quad.max_subdivisions = parse_num(key, value)?,
                "output" => self.output = Some(PathBuf::from(value)),
                "format" => self.format = value.parse()?,
                "seed" => self.seed = parse_num(key, value)?,
                _ => return Err(GreenError::Config(format!("line {}: unknown key {key:?}", no + 1))),
            }
        }
        Ok(())
    }

    fn resolve(g: &GlobalArgs) -> Result<Self> {
        let mut cfg = Self::default();
        if let Some(path) = &g.config {
            let text = fs::read_to_string(path).map_err(|e| GreenError::Config(format!("{}: {e}", path.display())))?;
            cfg.apply_kv(&text)?;
        }
        cfg.k_plus = g.kp.unwrap_or(cfg.k_plus);
        cfg.k_minus = g.km.unwrap_or(cfg.k_minus);
        cfg.quad.rel_tol = g.rel_tol.unwrap_or(cfg.quad.rel_tol);
        cfg.quad.abs_tol = g.abs_tol.unwrap_or(cfg.quad.abs_tol);
        cfg.quad.truncation_decay = g.truncation_decay.unwrap_or(cfg.quad.truncation_decay);
        cfg.quad.max_subdivisions = g.max_subdivisions.unwrap_or(cfg.quad.max_subdivisions);
        if let Some(o) = &g.output {
            cfg.output = Some(o.clone());
        }
        cfg.format = g.format.unwrap_or(cfg.format);
        cfg.seed = g.seed.unwrap_or(cfg.seed);
        cfg.quad.validate()?;
        Ok(cfg)
    }

    pub fn profile(&self) -> Result<WaveProfile> {
        WaveProfile::new(self.k_plus, self.k_minus)
    }

    /// Metadata comment line heading every CSV.
    pub fn meta_line(&self, command: &str) -> String {
        format!(
            "# layered-green {} schema={SCHEMA_VERSION} command={command} k_plus={} k_minus={} rel_tol={:e} abs_tol={:e} truncation_decay={:e} max_subdivisions={} seed={}\n",
            env!("CARGO_PKG_VERSION"),
            self.k_plus,
            self.k_minus,
            self.quad.rel_tol,
            self.quad.abs_tol,
            self.quad.truncation_decay,
            self.quad.max_subdivisions,
            self.seed
        )
    }
}

fn parse_point(s: &str) -> std::result::Result<Point, String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected \"x1,x2\", got {s:?}"))?;
    let a: f64 = a.trim().parse().map_err(|_| format!("bad coordinate {a:?}"))?;
    let b: f64 = b.trim().parse().map_err(|_| format!("bad coordinate {b:?}"))?;
    Ok(Point::new(a, b))
}

#[derive(Debug, Parser)]
#[command(name = "layered-green", version, about = "Green function of the two-layered Helmholtz problem", allow_negative_numbers = true)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Flat key=value configuration file
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Wavenumber in the upper half-plane
    #[arg(long, global = true)]
    pub kp: Option<f64>,
    /// Wavenumber in the lower half-plane
    #[arg(long, global = true)]
    pub km: Option<f64>,
    /// Relative quadrature tolerance
    #[arg(long, global = true)]
    pub rel_tol: Option<f64>,
    /// Absolute quadrature tolerance
    #[arg(long, global = true)]
    pub abs_tol: Option<f64>,
    /// Cut spectral tails where the decay factor drops below this
    #[arg(long, global = true)]
    pub truncation_decay: Option<f64>,
    /// Panel budget of the adaptive quadrature
    #[arg(long, global = true)]
    pub max_subdivisions: Option<usize>,
    /// Write to this file instead of stdout
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Output format
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Seed for randomized test points
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate G and its source gradient at one point pair
    Eval(EvalArgs),
    /// Residual decay sweeps against the asymptotic envelopes
    Rate(RateArgs),
    /// Run the invariant suites (TAP output)
    Verify(VerifyArgs),
    /// Reflection and transmission coefficient tables
    Coeffs(CoeffsArgs),
    /// Manufactured-trace representation and far-field demo
    Scatter(ScatterArgs),
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Field point "x1,x2"
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    pub x: Point,
    /// Source point "y1,y2"
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    pub y: Point,
    /// quad, saddle or auto
    #[arg(long, default_value = "quad")]
    pub method: Method,
}

#[derive(Debug, Args)]
pub struct RateArgs {
    /// Observation angles (comma separated); overrides --offsets
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub thetas: Vec<f64>,
    /// Offsets from every critical angle (comma separated)
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "0,0.05,-0.05,0.5,-0.5")]
    pub offsets: Vec<f64>,
    /// Smallest radius of the geometric grid
    #[arg(long, default_value_t = 100.0)]
    pub r_min: f64,
    /// Largest radius of the geometric grid
    #[arg(long, default_value_t = 1e4)]
    pub r_max: f64,
    /// Number of radii
    #[arg(long, default_value_t = 25)]
    pub n_radii: usize,
    /// Source point "y1,y2"; repeatable
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true, default_value = "0.3,0.5")]
    pub y: Vec<Point>,
    /// quad, saddle or auto
    #[arg(long, default_value = "auto")]
    pub method: Method,
    /// Residual of G (value) or of its source gradient
    #[arg(long, value_enum, default_value = "value")]
    pub quantity: QuantityArg,
    /// Run the sharpness probe at the critical angles instead
    #[arg(long)]
    pub sharpness: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum QuantityArg {
    Value,
    Gradient,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Restrict to these suites; repeatable
    #[arg(long, value_parser = |s: &str| s.parse::<Suite>().map_err(|e| e.to_string()))]
    pub suite: Vec<Suite>,
    /// Continue after the first failing check
    #[arg(long)]
    pub keep_going: bool,
}

#[derive(Debug, Args)]
pub struct CoeffsArgs {
    /// Number of interior angles in (0, pi)
    #[arg(long, default_value_t = 179)]
    pub n_angles: usize,
}

#[derive(Debug, Args)]
pub struct ScatterArgs {
    /// Source of the manufactured field "z1,z2"
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true, default_value = "0.2,-0.4")]
    pub z0: Point,
    /// Radius of the trace circle
    #[arg(long, default_value_t = 2.0)]
    pub radius: f64,
    /// Gauss-Legendre nodes per half arc
    #[arg(long, default_value_t = 32)]
    pub n_per_arc: usize,
    /// Number of comparison directions
    #[arg(long, default_value_t = 24)]
    pub n_dirs: usize,
    /// Radius of the near-field comparison points, default 3 * radius
    #[arg(long)]
    pub eval_radius: Option<f64>,
    /// Also write the boundary trace CSV here
    #[arg(long)]
    pub trace: Option<PathBuf>,
}

/// Parse arguments, run the command and return the process exit code.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn run(cli: Cli) -> Result<i32> {
    let cfg = RunConfig::resolve(&cli.global)?;
    let (body, code) = match &cli.command {
        Command::Eval(a) => (cmd_eval(&cfg, a)?, 0),
        Command::Rate(a) => cmd_rate(&cfg, a)?,
        Command::Verify(a) => cmd_verify(&cfg, a)?,
        Command::Coeffs(a) => (cmd_coeffs(&cfg, a)?, 0),
        Command::Scatter(a) => (cmd_scatter(&cfg, a)?, 0),
    };
    emit(&cfg, &body)?;
    Ok(code)
}

fn emit(cfg: &RunConfig, body: &str) -> Result<()> {
    let io = |e: std::io::Error| GreenError::Io(e.to_string());
    match &cfg.output {
        Some(p) => fs::write(p, body).map_err(io),
        None => std::io::stdout().lock().write_all(body.as_bytes()).map_err(io),
    }
}

fn to_json<T: Serialize>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| GreenError::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// CSV body below the metadata line.
fn csv_table<R: Serialize>(header: Option<&[&str]>, rows: impl IntoIterator<Item = R>) -> Result<String> {
    let io = |e: csv::Error| GreenError::Io(e.to_string());
    let mut w = csv::WriterBuilder::new().has_headers(header.is_none()).from_writer(Vec::new());
    if let Some(h) = header {
        w.write_record(h).map_err(io)?;
    }
    for r in rows {
        w.serialize(r).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| GreenError::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| GreenError::Io(e.to_string()))
}

pub fn cmd_eval(cfg: &RunConfig, a: &EvalArgs) -> Result<String> {
    let wp = cfg.profile()?;
    let (g, g_err, used) = evaluate_green(&wp, &a.x, &a.y, a.method, &cfg.quad)?;
    let (h, h_err, _) = evaluate_grad(&wp, &a.x, &a.y, a.method, &cfg.quad)?;
    Ok(match cfg.format {
        Format::Json => to_json(&json!({
            "schema": SCHEMA_VERSION,
            "k_plus": cfg.k_plus,
            "k_minus": cfg.k_minus,
            "x": [a.x.x1, a.x.x2],
            "y": [a.y.x1, a.y.x2],
            "method": used,
            "g": [g.re, g.im],
            "g_error": g_err,
            "grad_y": [[h.0.re, h.0.im], [h.1.re, h.1.im]],
            "grad_y_error": h_err,
        }))?,
        Format::Csv => {
            let m = used.to_string();
            let rows = [("G", g.re, g.im, g_err, &m), ("dG/dy1", h.0.re, h.0.im, h_err, &m), ("dG/dy2", h.1.re, h.1.im, h_err, &m)];
            cfg.meta_line("eval") + &csv_table(Some(&["quantity", "re", "im", "error", "method"]), rows)?
        }
    })
}

fn rate_thetas(wp: &WaveProfile, a: &RateArgs) -> Vec<f64> {
    if !a.thetas.is_empty() {
        return a.thetas.clone();
    }
    let crit = critical_angles(wp);
    if crit.is_empty() {
        return vec![0.5, 1.5, 2.5, 3.8, 4.7, 5.6];
    }
    crit.iter().flat_map(|c| a.offsets.iter().map(move |d| c + d)).collect()
}

fn envelope_csv(cfg: &RunConfig, report: &EnvelopeReport) -> Result<String> {
    let mut out = cfg.meta_line("rate") + &csv_table(None, &report.rows)?;
    for s in &report.summaries {
        let (slope, intercept) = s.fit.map_or((f64::NAN, f64::NAN), |f| (f.slope, f.intercept));
        let _ = writeln!(
            out,
            "# summary theta={} y={},{} near_critical={} clear_points={} slope={slope} intercept={intercept} constant={} constant_last_decade={} verdict={}",
            s.theta, s.y[0], s.y[1], s.near_critical, s.clear_points, s.constant, s.constant_last_decade, s.verdict
        );
    }
    let _ = writeln!(out, "# verdict={}", report.verdict());
    Ok(out)
}

fn sharpness_csv(cfg: &RunConfig, report: &SharpnessReport) -> Result<String> {
    let rows = report
        .series
        .iter()
        .flat_map(|s| s.radii.iter().zip(&s.scaled_34).zip(&s.scaled_32).map(move |((r, a), b)| (s.theta, *r, *a, *b)));
    let mut out = cfg.meta_line("rate --sharpness") + &csv_table(Some(&["theta", "r", "scaled_34", "scaled_32"]), rows)?;
    for s in &report.series {
        let _ = writeln!(
            out,
            "# summary theta={} flagged={} bounded_below={} growing={} verdict={}",
            s.theta, s.flagged, s.bounded_below, s.growing, s.verdict
        );
    }
    let _ = writeln!(out, "# verdict={}", report.verdict());
    Ok(out)
}

fn verdict_code(v: Verdict) -> i32 {
    if v == Verdict::Pass {
        0
    } else {
        EXIT_FAILED_CHECK
    }
}

pub fn cmd_rate(cfg: &RunConfig, a: &RateArgs) -> Result<(String, i32)> {
    let wp = cfg.profile()?;
    if a.n_radii < 2 || !(a.r_min > 0.0 && a.r_max > a.r_min) {
        return Err(GreenError::Config("radial grid needs 0 < r_min < r_max and n_radii >= 2".into()));
    }
    let radii = geometric_radii(a.r_min, a.r_max, a.n_radii);
    if a.sharpness {
        let y = a.y.first().ok_or_else(|| GreenError::Config("no source point".into()))?;
        let report = sharpness_probe(&wp, y, &radii, a.method, &cfg.quad)?;
        let body = match cfg.format {
            Format::Json => to_json(&report)?,
            Format::Csv => sharpness_csv(cfg, &report)?,
        };
        return Ok((body, verdict_code(report.verdict())));
    }
    let dirs = rate_thetas(&wp, a).into_iter().map(FarDirection::new).collect::<Result<Vec<_>>>()?;
    let quantity = match a.quantity {
        QuantityArg::Value => Quantity::Value,
        QuantityArg::Gradient => Quantity::Gradient,
    };
    let plan = SweepPlan::new(wp, a.y.clone(), dirs, radii, a.method)?.with_quantity(quantity).with_quad(cfg.quad)?;
    let report = envelope_check(&plan)?;
    let body = match cfg.format {
        Format::Json => to_json(&report)?,
        Format::Csv => envelope_csv(cfg, &report)?,
    };
    Ok((body, verdict_code(report.verdict())))
}

fn tap_line(n: usize, c: &Check) -> String {
    let bound = match c.lower {
        Some(lo) => format!("range [{lo}, {}]", c.tolerance),
        None => format!("tolerance {:e}", c.tolerance),
    };
    format!("{} {n} - {}: {} # measured {:e}, {bound}\n", if c.passed { "ok" } else { "not ok" }, c.suite, c.name, c.measured)
}

pub fn cmd_verify(cfg: &RunConfig, a: &VerifyArgs) -> Result<(String, i32)> {
    let suites: Vec<Suite> = if a.suite.is_empty() { Suite::ALL.to_vec() } else { a.suite.clone() };
    let mut checks: Vec<Check> = Vec::new();
    let mut out = String::from("TAP version 13\n");
    let mut failed = false;
    'suites: for s in suites {
        let results = match run_suite(s, cfg.seed, &cfg.quad) {
            Ok(v) => v,
            Err(e) => {
                let c = Check { suite: s, name: format!("suite raised: {e}"), measured: f64::NAN, lower: None, tolerance: f64::NAN, passed: false };
                vec![c]
            }
        };
        for c in results {
            failed |= !c.passed;
            out += &tap_line(checks.len() + 1, &c);
            let stop = !c.passed && !a.keep_going;
            checks.push(c);
            if stop {
                out += "Bail out! first failure (use --keep-going to continue)\n";
                break 'suites;
            }
        }
    }
    let _ = writeln!(out, "1..{}", checks.len());
    let body = match cfg.format {
        Format::Json => to_json(&checks)?,
        Format::Csv => out,
    };
    Ok((body, if failed { EXIT_FAILED_CHECK } else { 0 }))
}

pub fn cmd_coeffs(cfg: &RunConfig, a: &CoeffsArgs) -> Result<String> {
    if a.n_angles == 0 {
        return Err(GreenError::Config("n_angles must be positive".into()));
    }
    let wp = cfg.profile()?;
    let step = std::f64::consts::PI / (a.n_angles + 1) as f64;
    let rows = (1..=a.n_angles)
        .map(|i| {
            let t = step * i as f64;
            let (r, tr, rt, tt) = (refl_coeff(t, &wp)?, trans_coeff(t, &wp)?, refl_tilde(t, &wp)?, trans_tilde(t, &wp)?);
            Ok((t, r.re, r.im, tr.re, tr.im, rt.re, rt.im, tt.re, tt.im))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(match cfg.format {
        Format::Json => to_json(&json!({
            "schema": SCHEMA_VERSION,
            "k_plus": cfg.k_plus,
            "k_minus": cfg.k_minus,
            "columns": ["theta", "re_r", "im_r", "re_t", "im_t", "re_r_tilde", "im_r_tilde", "re_t_tilde", "im_t_tilde"],
            "rows": rows,
        }))?,
        Format::Csv => {
            let h = ["theta", "re_r", "im_r", "re_t", "im_t", "re_r_tilde", "im_r_tilde", "re_t_tilde", "im_t_tilde"];
            cfg.meta_line("coeffs") + &csv_table(Some(&h), rows)?
        }
    })
}

#[derive(Debug, Serialize)]
struct ScatterRow {
    kind: &'static str,
    theta: f64,
    r: f64,
    re: f64,
    im: f64,
    re_ref: f64,
    im_ref: f64,
    rel_error: f64,
}

pub fn cmd_scatter(cfg: &RunConfig, a: &ScatterArgs) -> Result<String> {
    let wp = cfg.profile()?;
    if a.n_dirs == 0 {
        return Err(GreenError::Config("n_dirs must be positive".into()));
    }
    let trace = manufacture_trace(&wp, &a.z0, a.radius, a.n_per_arc, &cfg.quad)?;
    if let Some(p) = &a.trace {
        let f = fs::File::create(p).map_err(|e| GreenError::Io(format!("{}: {e}", p.display())))?;
        trace.write_csv(f)?;
    }
    let eval_r = a.eval_radius.unwrap_or(3.0 * a.radius);
    // offset by half a step so no direction is lateral
    let thetas: Vec<f64> = (0..a.n_dirs).map(|i| 2.0 * std::f64::consts::PI * (i as f64 + 0.5) / a.n_dirs as f64).collect();
    let xs: Vec<Point> = thetas.iter().map(|&t| Point::polar(eval_r, t)).collect();
    let near = represent_many(&trace, &xs, &wp, &cfg.quad)?;
    let mut rows = Vec::with_capacity(2 * a.n_dirs);
    for ((t, x), v) in thetas.iter().zip(&xs).zip(near) {
        let g = green(&wp, x, &a.z0, &cfg.quad)?.value;
        rows.push(ScatterRow { kind: "near", theta: *t, r: eval_r, re: v.re, im: v.im, re_ref: g.re, im_ref: g.im, rel_error: (v - g).norm() / g.norm() });
    }
    for &t in &thetas {
        let d = FarDirection::new(t)?;
        let (v, g) = (farfield_from_boundary(&trace, &d, &wp)?, g_farfield(&d, &a.z0, &wp)?);
        rows.push(ScatterRow { kind: "far", theta: t, r: f64::INFINITY, re: v.re, im: v.im, re_ref: g.re, im_ref: g.im, rel_error: (v - g).norm() / g.norm() });
    }
    let worst = |k: &str| rows.iter().filter(|r| r.kind == k).map(|r| r.rel_error).fold(0.0, f64::max);
    let (wn, wf) = (worst("near"), worst("far"));
    Ok(match cfg.format {
        Format::Json => to_json(&json!({
            "schema": SCHEMA_VERSION,
            "k_plus": cfg.k_plus,
            "k_minus": cfg.k_minus,
            "z0": [a.z0.x1, a.z0.x2],
            "radius": a.radius,
            "n_per_arc": a.n_per_arc,
            "max_rel_error_near": wn,
            "max_rel_error_far": wf,
            "rows": rows.iter().map(|r| json!([r.kind, r.theta, if r.r.is_finite() { json!(r.r) } else { json!(null) }, r.re, r.im, r.re_ref, r.im_ref, r.rel_error])).collect::<Vec<_>>(),
        }))?,
        Format::Csv => {
            let mut out = cfg.meta_line("scatter") + &csv_table(None, &rows)?;
            let _ = writeln!(out, "# max_rel_error near={wn:e} far={wf:e}");
            out
        }
    })
}
