#![allow(dead_code)]

use geoexcursion::excursion::GeodesicPath;
use geoexcursion::fuchsian::GroupElement;
use geoexcursion::hypgeom::{dist, UhpPoint};
use std::collections::{HashSet, VecDeque};

pub type Point = UhpPoint<f64>;

/// Plain reduction loop: translate into the strip, invert if inside the unit circle.
pub fn naive_reduce(mut z: Point) -> Point {
    for _ in 0..10_000 {
        let n = z.x.round();
        z.x -= n;
        let m = z.x * z.x + z.y * z.y;
        if m < 1.0 - 1e-14 {
            z = Point { x: -z.x / m, y: z.y / m };
        } else {
            return z;
        }
    }
    panic!("reduction did not terminate");
}

/// Every element reachable as a word in `T, T⁻¹, S` of length at most `depth`.
pub fn words_up_to(depth: usize) -> HashSet<GroupElement> {
    let gens = [GroupElement::T, GroupElement::T_INV, GroupElement::S];
    let mut seen = HashSet::from([GroupElement::IDENTITY]);
    let mut queue = VecDeque::from([(GroupElement::IDENTITY, 0usize)]);
    while let Some((g, k)) = queue.pop_front() {
        if k == depth {
            continue;
        }
        for s in gens {
            let h = g * s;
            if seen.insert(h) {
                queue.push_back((h, k + 1));
            }
        }
    }
    seen
}

/// Group elements with all entries bounded by `max_entry`, found by
/// breadth-first search over the generators.
pub fn bounded_elements(max_entry: i64) -> HashSet<GroupElement> {
    let gens = [GroupElement::T, GroupElement::T_INV, GroupElement::S];
    let mut seen = HashSet::from([GroupElement::IDENTITY]);
    let mut queue = VecDeque::from([GroupElement::IDENTITY]);
    while let Some(g) = queue.pop_front() {
        for s in gens {
            let h = g * s;
            if h.entries().iter().all(|e| e.abs() <= max_entry) && seen.insert(h) {
                queue.push_back(h);
            }
        }
    }
    seen
}

/// Orbit points of `z0` that can lie within distance 1 of the fundamental domain.
pub fn orbit_window(z0: Point) -> Vec<Point> {
    let mut pts: Vec<Point> = bounded_elements(20)
        .into_iter()
        .map(|g| g.apply(z0))
        .filter(|q| q.y >= 0.3 && q.x.abs() <= 4.0)
        .collect();
    pts.sort_by(|a, b| (a.x, a.y).partial_cmp(&(b.x, b.y)).unwrap());
    pts.dedup_by(|a, b| (a.x - b.x).abs() < 1e-12 && (a.y - b.y).abs() < 1e-12);
    pts
}

/// Distance from `p` to the orbit of `z0`, exact whenever it is below 1.
pub fn orbit_distance(p: Point, window: &[Point]) -> f64 {
    let w = naive_reduce(p);
    window.iter().map(|q| dist(w, *q)).fold(f64::INFINITY, f64::min)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanExcursion {
    pub entry: f64,
    pub exit: f64,
}

/// Samples `d(γ(t), Γz0) − r` on a grid of spacing `h` and locates sign
/// changes by linear interpolation.
pub fn dense_scan(path: &GeodesicPath, window: &[Point], r: f64, horizon: f64, h: f64) -> Vec<ScanExcursion> {
    let n = (horizon / h).round() as usize;
    let f = |t: f64| orbit_distance(path.point(t), window) - r;
    let mut out = Vec::new();
    let mut prev = f(0.0);
    let mut open = (prev <= 0.0).then_some(0.0);
    for k in 1..=n {
        let t = (k as f64 * h).min(horizon);
        let cur = f(t);
        let cross = (t - h) + h * prev / (prev - cur);
        if prev > 0.0 && cur <= 0.0 {
            open = Some(cross);
        } else if prev <= 0.0 && cur > 0.0 {
            out.push(ScanExcursion { entry: open.take().expect("exit without entry"), exit: cross });
        }
        prev = cur;
    }
    if let Some(entry) = open {
        out.push(ScanExcursion { entry, exit: horizon });
    }
    out
}
