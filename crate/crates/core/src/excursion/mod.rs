//! Excursion tracing.
//!
//! A sampled vector is followed along its geodesic for time `T`; every visit
//! to a lift of the site disc becomes one `(t_i, s_i)` interval, computed in
//! closed form from the lift's foot point. Candidate lifts are discovered at
//! regular sample times through complete orbit-ball enumeration, so no
//! excursion is missed however short it is.

mod path;

pub use path::{Frame, GeodesicPath, FRAME_LENGTH};

use crate::error::{Error, Result};
use crate::fuchsian::{modular, GroupElement, OrbifoldModel, Site};
use crate::hypgeom::chord_from_foot;
use crate::liouville::UnitTangentVector;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::io::Write;

/// Closest approach to a cone point below which a trace asks for a resample.
pub const CONE_HIT_TOL: f64 = 1e-12;

/// How excursions into overlapping lifts are handled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OverlapPolicy {
    /// Require `r < R`; discs are disjoint and excursions never overlap.
    #[default]
    Embedded,
    /// Allow `r ≥ R` and count each lifted disc crossed as its own
    /// excursion, possibly overlapping its neighbours in time.
    LiftMultiplicity,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TraceOptions {
    /// Sampling step δ; defaults to [`default_step`].
    pub step: Option<f64>,
    pub overlap: OverlapPolicy,
}

/// `min(r/2, 0.05)`
pub fn default_step(r: f64) -> f64 {
    (r / 2.0).min(0.05)
}

/// One visit of the geodesic to a lift of the site disc.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Excursion {
    pub entry: f64,
    pub exit: f64,
    /// The geodesic started inside this disc; `entry` was clipped to 0.
    pub clipped_start: bool,
    /// The excursion outlasts the horizon; `exit` was clipped to `T`.
    pub clipped_end: bool,
    /// Frame in whose coordinates `lift` is expressed.
    pub frame: usize,
    /// Coset key of the lift: the disc center is `lift · z0` in frame coordinates.
    pub lift: GroupElement,
    pub closest: f64,
}

impl Excursion {
    pub fn length(&self) -> f64 {
        self.exit - self.entry
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExcursionRecord {
    pub site: Site,
    pub radius: f64,
    pub horizon: f64,
    pub step: f64,
    pub overlap: OverlapPolicy,
    /// Sorted by entry time.
    pub excursions: Vec<Excursion>,
}

/// Traces `v` on the modular orbifold.
pub fn trace(v: &UnitTangentVector, site: &Site, r: f64, horizon: f64, opts: TraceOptions) -> Result<ExcursionRecord> {
    let model = modular();
    let path = GeodesicPath::new(model, v, horizon);
    trace_on_path(model, &path, site, r, horizon, opts)
}

pub fn trace_on_path(
    model: &dyn OrbifoldModel,
    path: &GeodesicPath,
    site: &Site,
    r: f64,
    horizon: f64,
    opts: TraceOptions,
) -> Result<ExcursionRecord> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::InvalidArgument(format!("radius must be positive, got {r}")));
    }
    if opts.overlap == OverlapPolicy::Embedded && r >= site.max_radius {
        return Err(Error::EmbeddingViolated { radius: r, max_radius: site.max_radius });
    }
    if !(horizon > 0.0) || !horizon.is_finite() {
        return Err(Error::InvalidArgument(format!("horizon must be positive, got {horizon}")));
    }
    let step = opts.step.unwrap_or_else(|| default_step(r));
    if !(step > 0.0 && step <= r) {
        return Err(Error::InvalidArgument(format!("step must lie in (0, r], got {step}")));
    }
    let last_frame = path.frames().len() - 1;
    if path.frame(last_frame).start + FRAME_LENGTH < horizon {
        return Err(Error::InvalidArgument("path does not cover the horizon".to_string()));
    }

    let rho_c = r + step;
    let samples = (horizon / step).floor() as usize;
    // Lifts already examined, keyed in the current frame's coordinates, with
    // the last time at which they can reappear as candidates.
    let mut seen: HashMap<GroupElement, f64> = HashMap::new();
    let mut hits = Vec::new();
    let mut current = 0usize;
    for j in 0..=samples {
        let t = j as f64 * step;
        let k = path.frame_index(t);
        while current < k {
            current += 1;
            let h = path.frame(current).entry;
            seen = seen.into_iter().map(|(key, until)| (site.coset_key(h * key), until)).collect();
        }
        seen.retain(|_, until| *until >= t);

        let frame = path.frame(k);
        let (w, h) = model.reduce(frame.point(t));
        let h_inv = h.inverse();
        for op in model.orbit_ball(site.z0, w, rho_c)? {
            let lift = site.coset_key(h_inv * op.element);
            if seen.contains_key(&lift) {
                continue;
            }
            let center = lift.apply(site.z0);
            let foot = frame.geodesic.foot(center);
            seen.insert(lift, frame.time(foot.t_foot) + rho_c + 1e-9);
            if site.is_cone() && foot.distance < CONE_HIT_TOL {
                return Err(Error::ConePointHit(foot.distance));
            }
            if let Some(chord) = chord_from_foot(foot, center, r) {
                hits.push(Excursion {
                    entry: frame.time(chord.t_entry),
                    exit: frame.time(chord.t_exit),
                    clipped_start: false,
                    clipped_end: false,
                    frame: k,
                    lift,
                    closest: foot.distance,
                });
            }
        }
    }

    let mut excursions: Vec<Excursion> = hits
        .into_iter()
        .filter(|e| e.exit > 0.0 && e.entry <= horizon)
        .map(|mut e| {
            if e.entry < 0.0 {
                e.entry = 0.0;
                e.clipped_start = true;
            }
            if e.exit > horizon {
                e.exit = horizon;
                e.clipped_end = true;
            }
            e
        })
        .collect();
    excursions.sort_by(|a, b| a.entry.total_cmp(&b.entry).then(a.exit.total_cmp(&b.exit)));

    if opts.overlap == OverlapPolicy::Embedded {
        if let Some(w) = excursions.windows(2).find(|w| w[1].entry < w[0].exit) {
            return Err(Error::OverlappingExcursions(w[1].entry));
        }
    }

    Ok(ExcursionRecord { site: site.clone(), radius: r, horizon, step, overlap: opts.overlap, excursions })
}

/// Counting and averaging statistics of a record up to time `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExcursionStats {
    pub time: f64,
    /// `N(t) = max{i : t_i ≤ t}`, excursions in progress at time 0 excluded.
    pub count: usize,
    /// Mean of `s_i − t_i` over excursions with both ends observed.
    pub mean_length: Option<f64>,
    /// Mean spacing of consecutive entry times.
    pub mean_gap: Option<f64>,
    /// Fraction of `[0, t]` spent inside the disc.
    pub occupancy: f64,
}

impl ExcursionStats {
    pub fn rate(&self) -> f64 {
        self.count as f64 / self.time
    }
}

pub fn stats(rec: &ExcursionRecord, t: f64) -> Result<ExcursionStats> {
    if !(t > 0.0) || t > rec.horizon {
        return Err(Error::InvalidArgument(format!("statistics time {t} outside (0, {}]", rec.horizon)));
    }
    let counted: Vec<&Excursion> = rec.excursions.iter().filter(|e| !e.clipped_start && e.entry <= t).collect();
    let complete: Vec<f64> = counted.iter().filter(|e| !e.clipped_end).map(|e| e.length()).collect();
    let mean_length = (!complete.is_empty()).then(|| complete.iter().sum::<f64>() / complete.len() as f64);
    let mean_gap = (counted.len() >= 2)
        .then(|| (counted[counted.len() - 1].entry - counted[0].entry) / (counted.len() - 1) as f64);
    let inside: f64 = rec.excursions.iter().map(|e| (e.exit.min(t) - e.entry.max(0.0)).max(0.0)).sum();
    Ok(ExcursionStats { time: t, count: counted.len(), mean_length, mean_gap, occupancy: inside / t })
}

/// Writes one CSV row per excursion:
/// `index,t_entry,t_exit,frame,a,b,c,d` with the lift's matrix entries.
pub fn write_events_csv<W: Write>(rec: &ExcursionRecord, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["index", "t_entry", "t_exit", "frame", "a", "b", "c", "d"])?;
    for (i, e) in rec.excursions.iter().enumerate() {
        let [a, b, c, d] = e.lift.entries();
        w.write_record([
            i.to_string(),
            e.entry.to_string(),
            e.exit.to_string(),
            e.frame.to_string(),
            a.to_string(),
            b.to_string(),
            c.to_string(),
            d.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
