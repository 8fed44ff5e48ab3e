//! Experiment orchestration: ensembles of traced geodesics, aggregation with
//! standard errors, comparison against the closed forms, report output, and
//! the standalone verification checks exposed by the CLI.

use crate::error::{Error, Result};
use crate::excursion::{stats, trace, OverlapPolicy, TraceOptions};
use crate::fuchsian::{model_by_name, Site};
use crate::hypgeom::{dist_to_geodesic, tangency_maps, BoundaryPoint, Geodesic, UhpPoint};
use crate::liouville::{replica_seed, LiouvilleSampler};
use crate::quad;
use crate::theory::{self, PrintedAreaForm, Prediction};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};
use std::f64::consts::{FRAC_PI_3, TAU};
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

/// Resample attempts per replica when a geodesic hits the cone point.
pub const MAX_RESAMPLES: u32 = 16;

/// Where the disc is centered.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum SiteSpec {
    /// `i`, cone point of order 2.
    ConeI,
    /// `e^{iπ/3}`, cone point of order 3.
    ConeRho,
    /// `2i`, a regular point.
    Regular2i,
    Point { x: f64, y: f64 },
}

impl SiteSpec {
    pub fn point(&self) -> UhpPoint<f64> {
        match *self {
            SiteSpec::ConeI => UhpPoint::i(),
            SiteSpec::ConeRho => UhpPoint { x: 0.5, y: 3f64.sqrt() / 2.0 },
            SiteSpec::Regular2i => UhpPoint { x: 0.0, y: 2.0 },
            SiteSpec::Point { x, y } => UhpPoint { x, y },
        }
    }
}

impl fmt::Display for SiteSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SiteSpec::ConeI => write!(f, "cone-i"),
            SiteSpec::ConeRho => write!(f, "cone-rho"),
            SiteSpec::Regular2i => write!(f, "regular-2i"),
            SiteSpec::Point { x, y } => write!(f, "{x},{y}"),
        }
    }
}

impl FromStr for SiteSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "cone-i" => Ok(SiteSpec::ConeI),
            "cone-rho" => Ok(SiteSpec::ConeRho),
            "regular-2i" => Ok(SiteSpec::Regular2i),
            other => {
                let body = other.strip_prefix("point:").unwrap_or(other);
                let (x, y) = body
                    .split_once(',')
                    .ok_or_else(|| Error::Config(format!("unrecognized site `{other}`")))?;
                let parse = |v: &str| v.trim().parse::<f64>().map_err(|_| Error::Config(format!("bad coordinate `{v}`")));
                let (x, y) = (parse(x)?, parse(y)?);
                UhpPoint::new(x, y)?;
                Ok(SiteSpec::Point { x, y })
            }
        }
    }
}

impl TryFrom<String> for SiteSpec {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<SiteSpec> for String {
    fn from(s: SiteSpec) -> String {
        s.to_string()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    #[default]
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::Config(format!("unknown format `{other}`"))),
        }
    }
}

/// One ensemble experiment. Exactly one of `radius` and `area` is set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub model: String,
    pub site: SiteSpec,
    pub radius: Option<f64>,
    pub area: Option<f64>,
    pub time: f64,
    pub replicas: usize,
    pub seed: u64,
    pub step: Option<f64>,
    /// Permit discs beyond the embedding radius, counting lifts with multiplicity.
    pub allow_overlap: bool,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            model: "modular".to_string(),
            site: SiteSpec::Regular2i,
            radius: None,
            area: None,
            time: 1000.0,
            replicas: 1,
            seed: 0,
            step: None,
            allow_overlap: false,
            out: None,
            format: OutputFormat::Json,
        }
    }
}

/// A validated configuration with the site resolved.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedExperiment {
    pub site: Site,
    pub orbifold_area: f64,
    pub radius: f64,
    pub area: Option<f64>,
    pub options: TraceOptions,
    pub step: f64,
}

impl ExperimentConfig {
    pub fn resolve(&self) -> Result<ResolvedExperiment> {
        let model = model_by_name(&self.model).map_err(|e| Error::Config(e.to_string()))?;
        let site = Site::new(model, self.site.point()).map_err(|e| Error::Config(e.to_string()))?;
        let radius = match (self.radius, self.area) {
            (Some(r), None) => {
                if !(r > 0.0 && r.is_finite()) {
                    return Err(Error::Config(format!("radius must be positive, got {r}")));
                }
                r
            }
            (None, Some(a)) => {
                if !(a > 0.0 && a.is_finite()) {
                    return Err(Error::Config(format!("area must be positive, got {a}")));
                }
                if !self.allow_overlap && a >= site.max_area() {
                    return Err(Error::Config(format!(
                        "area {a} is not below the embedding bound A = {}",
                        site.max_area()
                    )));
                }
                theory::radius_from_area(a, site.order)?
            }
            _ => return Err(Error::Config("exactly one of radius and area must be given".to_string())),
        };
        if !self.allow_overlap && radius >= site.max_radius {
            return Err(Error::Config(format!("radius {radius} is not below the embedding radius R = {}", site.max_radius)));
        }
        if !(self.time > 0.0 && self.time.is_finite()) {
            return Err(Error::Config(format!("time must be positive, got {}", self.time)));
        }
        if self.replicas == 0 {
            return Err(Error::Config("at least one replica is required".to_string()));
        }
        let step = self.step.unwrap_or_else(|| crate::excursion::default_step(radius));
        if !(step > 0.0 && step <= radius) {
            return Err(Error::Config(format!("step must lie in (0, r], got {step}")));
        }
        let overlap = if self.allow_overlap { OverlapPolicy::LiftMultiplicity } else { OverlapPolicy::Embedded };
        Ok(ResolvedExperiment {
            orbifold_area: model.area(),
            site,
            radius,
            area: self.area,
            options: TraceOptions { step: Some(step), overlap },
            step,
        })
    }
}

/// Per-replica statistics at the horizon.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplicaRow {
    pub replica: usize,
    pub seed: u64,
    pub n_excursions: usize,
    pub rate: f64,
    pub mean_length: Option<f64>,
    pub mean_gap: Option<f64>,
    pub occupancy: f64,
    pub resamples: u32,
}

/// Ensemble mean with its standard error (undefined for fewer than two values).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: Option<f64>,
    pub std_error: Option<f64>,
    pub n: usize,
}

impl Estimate {
    /// Mean and standard error folded in the given order.
    pub fn from_values<I: IntoIterator<Item = f64>>(values: I) -> Self {
        let v: Vec<f64> = values.into_iter().collect();
        let n = v.len();
        if n == 0 {
            return Self { mean: None, std_error: None, n };
        }
        let mean = v.iter().fold(0.0, |s, x| s + x) / n as f64;
        let std_error = (n >= 2).then(|| {
            let ss = v.iter().fold(0.0, |s, x| s + (x - mean) * (x - mean));
            (ss / (n - 1) as f64 / n as f64).sqrt()
        });
        Self { mean: Some(mean), std_error, n }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub rate: Estimate,
    pub mean_length: Estimate,
    pub mean_gap: Estimate,
    pub occupancy: Estimate,
}

impl Summary {
    pub fn from_rows(rows: &[ReplicaRow]) -> Self {
        Self {
            rate: Estimate::from_values(rows.iter().map(|r| r.rate)),
            mean_length: Estimate::from_values(rows.iter().filter_map(|r| r.mean_length)),
            mean_gap: Estimate::from_values(rows.iter().filter_map(|r| r.mean_gap)),
            occupancy: Estimate::from_values(rows.iter().map(|r| r.occupancy)),
        }
    }
}

/// Empirical estimate against theory for one statistic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub quantity: String,
    pub empirical: Option<f64>,
    pub std_error: Option<f64>,
    pub theory: f64,
    pub rel_error: Option<f64>,
    /// `(empirical − theory)/std_error`
    pub z_score: Option<f64>,
    /// Value of the printed (uncorrected) area-form expression, when one exists.
    pub printed: Option<f64>,
    pub printed_z_score: Option<f64>,
}

impl Comparison {
    fn new(quantity: &str, est: Estimate, theory: f64, printed: Option<f64>) -> Self {
        let z = |target: f64| match (est.mean, est.std_error) {
            (Some(m), Some(se)) if se > 0.0 => Some((m - target) / se),
            _ => None,
        };
        Self {
            quantity: quantity.to_string(),
            empirical: est.mean,
            std_error: est.std_error,
            theory,
            rel_error: est.mean.map(|m| (m - theory).abs() / theory.abs()),
            z_score: z(theory),
            printed,
            printed_z_score: printed.and_then(z),
        }
    }

    /// Within `rel_tol` relative error and `sigmas` standard errors of theory.
    pub fn agrees(&self, rel_tol: f64, sigmas: f64) -> bool {
        matches!((self.rel_error, self.z_score), (Some(e), Some(z)) if e <= rel_tol && z.abs() <= sigmas)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SiteInfo {
    pub x: f64,
    pub y: f64,
    pub order: u32,
    pub max_radius: f64,
    pub max_area: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub version: String,
    /// Echo of the configuration (without the output path).
    pub config: ExperimentConfig,
    pub site: SiteInfo,
    pub orbifold_area: f64,
    pub radius: f64,
    pub area: Option<f64>,
    pub step: f64,
    pub overlap: OverlapPolicy,
    pub replicas: Vec<ReplicaRow>,
    pub summary: Summary,
    pub theory: Prediction<f64>,
    pub printed: Option<PrintedAreaForm<f64>>,
    pub comparisons: Vec<Comparison>,
    pub total_resamples: u32,
    /// Wall-clock duration; kept out of the emitted files so they stay byte-stable.
    #[serde(skip)]
    pub wall_seconds: f64,
}

impl ExperimentReport {
    pub fn comparison(&self, quantity: &str) -> Option<&Comparison> {
        self.comparisons.iter().find(|c| c.quantity == quantity)
    }
}

fn run_replica(cfg: &ExperimentConfig, res: &ResolvedExperiment, index: usize) -> Result<ReplicaRow> {
    let mut sampler = LiouvilleSampler::for_replica(cfg.seed, index as u64);
    let mut resamples = 0;
    loop {
        let v = sampler.sample();
        match trace(&v, &res.site, res.radius, cfg.time, res.options) {
            Ok(rec) => {
                let s = stats(&rec, cfg.time)?;
                return Ok(ReplicaRow {
                    replica: index,
                    seed: replica_seed(cfg.seed, index as u64),
                    n_excursions: s.count,
                    rate: s.rate(),
                    mean_length: s.mean_length,
                    mean_gap: s.mean_gap,
                    occupancy: s.occupancy,
                    resamples,
                });
            }
            Err(Error::ConePointHit(_)) if resamples < MAX_RESAMPLES => resamples += 1,
            Err(e) => return Err(e),
        }
    }
}

/// Runs the ensemble on the current rayon pool. Replica results are
/// combined in index order, so the report does not depend on scheduling.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let started = Instant::now();
    let res = cfg.resolve()?;
    let rows = (0..cfg.replicas)
        .into_par_iter()
        .map(|i| run_replica(cfg, &res, i))
        .collect::<Result<Vec<_>>>()?;
    let summary = Summary::from_rows(&rows);
    let theory = theory::predict_radius_form(res.radius, res.site.order, res.orbifold_area)?;
    let printed = match res.area {
        Some(a) => Some(theory::predict_area_form(a, res.site.order, res.orbifold_area)?.printed),
        None => None,
    };
    let comparisons = vec![
        Comparison::new("rate", summary.rate, theory.rate, printed.map(|p| p.rate)),
        Comparison::new(
            "mean_length",
            summary.mean_length,
            theory.mean_excursion_length,
            printed.map(|p| p.mean_excursion_length),
        ),
        Comparison::new("mean_gap", summary.mean_gap, theory.mean_return_gap, None),
        Comparison::new("occupancy", summary.occupancy, theory.occupancy, None),
    ];
    let total_resamples = rows.iter().map(|r| r.resamples).sum();
    Ok(ExperimentReport {
        version: env!("CARGO_PKG_VERSION").to_string(),
        config: ExperimentConfig { out: None, ..cfg.clone() },
        site: SiteInfo {
            x: res.site.z0.x,
            y: res.site.z0.y,
            order: res.site.order,
            max_radius: res.site.max_radius,
            max_area: res.site.max_area(),
        },
        orbifold_area: res.orbifold_area,
        radius: res.radius,
        area: res.area,
        step: res.step,
        overlap: res.options.overlap,
        replicas: rows,
        summary,
        theory,
        printed,
        comparisons,
        total_resamples,
        wall_seconds: started.elapsed().as_secs_f64(),
    })
}

/// Runs the ensemble on a dedicated pool of `threads` workers.
pub fn run_experiment_with_threads(cfg: &ExperimentConfig, threads: usize) -> Result<ExperimentReport> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Config(e.to_string()))?;
    pool.install(|| run_experiment(cfg))
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub const REPLICA_COLUMNS: [&str; 7] = ["replica", "seed", "n_excursions", "rate", "mean_length", "mean_gap", "occupancy"];
pub const SUMMARY_COLUMNS: [&str; 9] =
    ["statistic", "mean", "std_error", "n", "theory", "rel_error", "z_score", "printed", "printed_z_score"];

/// Replica table, a blank line, then the summary table.
pub fn render_csv(rep: &ExperimentReport) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(REPLICA_COLUMNS)?;
    for r in &rep.replicas {
        w.write_record([
            r.replica.to_string(),
            r.seed.to_string(),
            r.n_excursions.to_string(),
            r.rate.to_string(),
            opt(r.mean_length),
            opt(r.mean_gap),
            r.occupancy.to_string(),
        ])?;
    }
    let mut out = String::from_utf8(w.into_inner().map_err(|e| Error::Io(e.to_string()))?)
        .expect("csv output is utf-8");
    out.push('\n');
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(SUMMARY_COLUMNS)?;
    let est = |q: &str| match q {
        "rate" => rep.summary.rate,
        "mean_length" => rep.summary.mean_length,
        "mean_gap" => rep.summary.mean_gap,
        _ => rep.summary.occupancy,
    };
    for c in &rep.comparisons {
        w.write_record([
            c.quantity.clone(),
            opt(c.empirical),
            opt(c.std_error),
            est(&c.quantity).n.to_string(),
            c.theory.to_string(),
            opt(c.rel_error),
            opt(c.z_score),
            opt(c.printed),
            opt(c.printed_z_score),
        ])?;
    }
    out.push_str(&String::from_utf8(w.into_inner().map_err(|e| Error::Io(e.to_string()))?).expect("utf-8"));
    Ok(out)
}

/// Parses the replica table of [`render_csv`] output.
pub fn parse_replica_csv(text: &str) -> Result<Vec<ReplicaRow>> {
    let table = text.split("\n\n").next().unwrap_or_default();
    let mut rd = csv::Reader::from_reader(table.as_bytes());
    let num = |s: &str| -> Result<Option<f64>> {
        if s.is_empty() {
            Ok(None)
        } else {
            s.parse::<f64>().map(Some).map_err(|e| Error::Io(e.to_string()))
        }
    };
    let mut rows = Vec::new();
    for rec in rd.records() {
        let rec = rec?;
        let int = |i: usize| rec[i].parse::<u64>().map_err(|e| Error::Io(e.to_string()));
        rows.push(ReplicaRow {
            replica: int(0)? as usize,
            seed: int(1)?,
            n_excursions: int(2)? as usize,
            rate: num(&rec[3])?.unwrap_or(f64::NAN),
            mean_length: num(&rec[4])?,
            mean_gap: num(&rec[5])?,
            occupancy: num(&rec[6])?.unwrap_or(f64::NAN),
            resamples: 0,
        });
    }
    Ok(rows)
}

pub fn render_json(rep: &ExperimentReport) -> Result<String> {
    let mut s = serde_json::to_string_pretty(rep)?;
    s.push('\n');
    Ok(s)
}

pub fn emit_report(rep: &ExperimentReport, format: OutputFormat, path: &Path) -> Result<()> {
    let body = match format {
        OutputFormat::Csv => render_csv(rep)?,
        OutputFormat::Json => render_json(rep)?,
    };
    std::fs::write(path, body).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

// ---------------------------------------------------------------------------
// Standalone checks

/// Tangency tolerance for the `W`/`U` check.
pub const TANGENCY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TangencyReport {
    pub rho: f64,
    pub grid: usize,
    pub max_residual_w: f64,
    pub max_residual_u: f64,
    /// `W_ρ(x) ∈ [−1/x, x)` held at every tested `x > 0`.
    pub w_in_range: bool,
    pub passed: bool,
}

/// `grid` sample points, half negative and half positive, spread
/// logarithmically over `10⁻² ≤ |x| ≤ 10²`.
pub fn tangency_grid(grid: usize) -> Vec<f64> {
    let half = (grid / 2).max(1);
    let mut xs = Vec::with_capacity(2 * half);
    for j in 0..half {
        let u = if half == 1 { 0.0 } else { -2.0 + 4.0 * j as f64 / (half - 1) as f64 };
        let x = 10f64.powf(u);
        xs.push(x);
        xs.push(-x);
    }
    xs
}

pub fn check_tangency(rho: f64, grid: usize) -> Result<TangencyReport> {
    if !(rho > 0.0) || grid == 0 {
        return Err(Error::Config("tangency check needs rho > 0 and a non-empty grid".to_string()));
    }
    let i = UhpPoint::i();
    let residual = |x: f64, p: BoundaryPoint<f64>| -> Result<f64> {
        let g = Geodesic::new(BoundaryPoint::Finite(x), p)?;
        Ok((dist_to_geodesic(i, &g).distance - rho).abs())
    };
    let (mut rw, mut ru, mut in_range) = (0.0f64, 0.0f64, true);
    for x in tangency_grid(grid) {
        let (w, u) = tangency_maps(rho, x)?;
        rw = rw.max(residual(x, w)?);
        ru = ru.max(residual(x, u)?);
        if x > 0.0 {
            match w {
                BoundaryPoint::Finite(wv) => in_range &= wv >= -1.0 / x && wv < x,
                BoundaryPoint::Infinity => in_range = false,
            }
        }
    }
    Ok(TangencyReport {
        rho,
        grid,
        max_residual_w: rw,
        max_residual_u: ru,
        w_in_range: in_range,
        passed: rw <= TANGENCY_TOL && ru <= TANGENCY_TOL && in_range,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub radius: f64,
    pub integral: f64,
    pub closed_form: f64,
    pub rel_error: f64,
    pub quadrature_error: f64,
    pub evaluations: usize,
    /// Largest deviation of the branchwise inner integral from `2 sinh r/(1 + x²)`.
    pub max_inner_residual: f64,
    pub passed: bool,
}

/// Relative tolerance of the integrated cross-section measure.
pub const ORACLE_REL_TOL: f64 = 1e-6;
/// Pointwise tolerance of the inner integral.
pub const INNER_TOL: f64 = 1e-9;

/// 10³ points over `|x| ≤ 4 max(1, sinh r)`, covering both branches.
pub fn inner_grid(r: f64) -> Vec<f64> {
    let span = 4.0 * r.sinh().max(1.0);
    (0..1000).map(|j| -span + 2.0 * span * (j as f64 + 0.5) / 1000.0).collect()
}

pub fn check_oracle(r: f64) -> Result<OracleReport> {
    let q = theory::quadrature_oracle(r).map_err(|e| Error::Config(e.to_string()))?;
    let closed = TAU * r.sinh();
    let max_inner = inner_grid(r)
        .into_iter()
        .map(|x| (theory::inner_integral(r, x) - 2.0 * r.sinh() / (1.0 + x * x)).abs())
        .fold(0.0, f64::max);
    let rel = (q.value - closed).abs() / closed;
    Ok(OracleReport {
        radius: r,
        integral: q.value,
        closed_form: closed,
        rel_error: rel,
        quadrature_error: q.error,
        evaluations: q.evaluations,
        max_inner_residual: max_inner,
        passed: rel <= ORACLE_REL_TOL && max_inner <= INNER_TOL,
    })
}

/// Minimum p-value for the sampler goodness-of-fit tests.
pub const SAMPLER_MIN_P: f64 = 0.001;
/// Largest tolerated |z| for the sampler's moment checks.
pub const SAMPLER_MAX_Z: f64 = 3.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChiSquareTest {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

impl ChiSquareTest {
    fn from_counts(counts: &[u64], probs: &[f64]) -> Self {
        let n: u64 = counts.iter().sum();
        let statistic = counts
            .iter()
            .zip(probs)
            .map(|(&c, &p)| {
                let e = p * n as f64;
                (c as f64 - e).powi(2) / e
            })
            .sum();
        let dof = counts.len() - 1;
        let p_value = ChiSquared::new(dof as f64).expect("positive dof").sf(statistic);
        Self { statistic, dof, p_value }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplerReport {
    pub n: usize,
    pub seed: u64,
    pub acceptance_rate: f64,
    pub acceptance_expected: f64,
    pub acceptance_z: f64,
    pub angle: ChiSquareTest,
    pub x_marginal: ChiSquareTest,
    pub y_marginal: ChiSquareTest,
    pub mean_inv_y: f64,
    pub mean_inv_y_expected: f64,
    pub mean_inv_y_z: f64,
    pub passed: bool,
}

const SQRT3_2: f64 = 0.866_025_403_784_438_6;
const MARGINAL_BINS: usize = 20;
const ANGLE_BINS: usize = 36;

/// Width of `F` at height `y`.
fn domain_width(y: f64) -> f64 {
    if y >= 1.0 {
        1.0
    } else {
        (1.0 - 2.0 * (1.0 - y * y).max(0.0).sqrt()).max(0.0)
    }
}

/// `y` at bin edge `u ∈ [0, 1]` of the transform `u = 1 − (√3/2)/y`.
fn y_edge(u: f64) -> f64 {
    SQRT3_2 / (1.0 - u)
}

/// Probability mass of `F` (under `dA/area`) with height in `[lo, hi)`.
fn y_band_mass(lo: f64, hi: f64) -> f64 {
    let f = |y: f64| domain_width(y) / (y * y);
    let mut total = 0.0;
    let finite_hi = hi.is_finite();
    if lo < 1.0 {
        let top = if finite_hi { hi.min(1.0) } else { 1.0 };
        total += quad::integrate(f, lo, top, 1e-13, 2000).value;
    }
    let start = lo.max(1.0);
    if finite_hi {
        if hi > start {
            total += 1.0 / start - 1.0 / hi;
        }
    } else {
        total += 1.0 / start;
    }
    total / FRAC_PI_3
}

pub fn check_sampler(n: usize, seed: u64) -> Result<SamplerReport> {
    if n < 100 {
        return Err(Error::Config("sampler check needs at least 100 samples".to_string()));
    }
    let mut sampler = LiouvilleSampler::new(seed);
    let mut angle_counts = vec![0u64; ANGLE_BINS];
    let mut x_counts = vec![0u64; MARGINAL_BINS];
    let mut y_counts = vec![0u64; MARGINAL_BINS];
    let (mut s1, mut s2) = (0.0, 0.0);
    for _ in 0..n {
        let v = sampler.sample();
        angle_counts[((v.angle / TAU * ANGLE_BINS as f64) as usize).min(ANGLE_BINS - 1)] += 1;
        x_counts[(((v.base.x + 0.5) * MARGINAL_BINS as f64) as usize).min(MARGINAL_BINS - 1)] += 1;
        let u = 1.0 - SQRT3_2 / v.base.y;
        y_counts[((u * MARGINAL_BINS as f64) as usize).min(MARGINAL_BINS - 1)] += 1;
        let inv = 1.0 / v.base.y;
        s1 += inv;
        s2 += inv * inv;
    }

    let acceptance_expected = FRAC_PI_3 / (2.0 / 3f64.sqrt());
    let acceptance_rate = sampler.accepted() as f64 / sampler.proposals() as f64;
    let acceptance_z = (acceptance_rate - acceptance_expected)
        / (acceptance_expected * (1.0 - acceptance_expected) / sampler.proposals() as f64).sqrt();

    let angle = ChiSquareTest::from_counts(&angle_counts, &vec![1.0 / ANGLE_BINS as f64; ANGLE_BINS]);
    let x_probs: Vec<f64> = (0..MARGINAL_BINS)
        .map(|j| {
            let lo = -0.5 + j as f64 / MARGINAL_BINS as f64;
            let hi = lo + 1.0 / MARGINAL_BINS as f64;
            quad::integrate(|x: f64| (1.0 - x * x).sqrt().recip(), lo, hi, 1e-14, 200).value / FRAC_PI_3
        })
        .collect();
    let x_marginal = ChiSquareTest::from_counts(&x_counts, &x_probs);
    let y_probs: Vec<f64> = (0..MARGINAL_BINS)
        .map(|j| {
            let lo = y_edge(j as f64 / MARGINAL_BINS as f64);
            let hi = if j + 1 == MARGINAL_BINS { f64::INFINITY } else { y_edge((j + 1) as f64 / MARGINAL_BINS as f64) };
            y_band_mass(lo, hi)
        })
        .collect();
    let y_marginal = ChiSquareTest::from_counts(&y_counts, &y_probs);

    // E[1/y] = ∫∫_F y⁻³ dA / area(F), by quadrature.
    let mean_inv_y_expected = quad::integrate(
        |x: f64| quad::integrate_to_infinity(|y: f64| y.powi(-3), (1.0 - x * x).sqrt(), 1e-14).value,
        -0.5,
        0.5,
        1e-12,
        500,
    )
    .value
        / FRAC_PI_3;
    let nf = n as f64;
    let mean_inv_y = s1 / nf;
    let var = (s2 / nf - mean_inv_y * mean_inv_y) * nf / (nf - 1.0);
    let mean_inv_y_z = (mean_inv_y - mean_inv_y_expected) / (var / nf).sqrt();

    let passed = acceptance_z.abs() <= SAMPLER_MAX_Z
        && mean_inv_y_z.abs() <= SAMPLER_MAX_Z
        && [&angle, &x_marginal, &y_marginal].iter().all(|t| t.p_value > SAMPLER_MIN_P);
    Ok(SamplerReport {
        n,
        seed,
        acceptance_rate,
        acceptance_expected,
        acceptance_z,
        angle,
        x_marginal,
        y_marginal,
        mean_inv_y,
        mean_inv_y_expected,
        mean_inv_y_z,
        passed,
    })
}
