mod common;

use common::{dense_scan, orbit_window, Point};
use geoexcursion::excursion::{stats, trace, trace_on_path, GeodesicPath, OverlapPolicy, TraceOptions};
use geoexcursion::fuchsian::{make_site, modular, OrbifoldModel};
use geoexcursion::hypgeom::dist;
use geoexcursion::liouville::{from_boundary_coords, flow_shift, to_boundary_coords, LiouvilleSampler};
use geoexcursion::Error;

fn sites() -> [(Point, f64); 3] {
    [(Point { x: 0.0, y: 2.0 }, 0.2), (Point::i(), 0.4), (Point { x: 0.5, y: 3f64.sqrt() / 2.0 }, 0.4)]
}

#[test]
fn matches_dense_scan() {
    let model = modular();
    let mut sampler = LiouvilleSampler::new(11);
    for (z0, r) in sites() {
        let site = make_site(z0).unwrap();
        let window = orbit_window(z0);
        for _ in 0..4 {
            let v = sampler.sample();
            let path = GeodesicPath::new(model, &v, 60.0);
            let rec = trace_on_path(model, &path, &site, r, 60.0, TraceOptions::default()).unwrap();
            let scan = dense_scan(&path, &window, r, 60.0, 1e-3);
            assert_eq!(rec.excursions.len(), scan.len());
            for (e, s) in rec.excursions.iter().zip(&scan) {
                assert!((e.entry - s.entry).abs() < 1e-3 && (e.exit - s.exit).abs() < 1e-3, "{e:?} vs {s:?}");
            }
        }
    }
}

#[test]
fn excursion_endpoints_lie_on_the_circle() {
    let model = modular();
    let mut sampler = LiouvilleSampler::new(5);
    for (z0, r) in sites() {
        let site = make_site(z0).unwrap();
        let v = sampler.sample();
        let path = GeodesicPath::new(model, &v, 100.0);
        let rec = trace_on_path(model, &path, &site, r, 100.0, TraceOptions::default()).unwrap();
        for e in &rec.excursions {
            let frame = path.frame(e.frame);
            let center = e.lift.apply(z0);
            for (t, clipped) in [(e.entry, e.clipped_start), (e.exit, e.clipped_end)] {
                let d = dist(frame.point(t), center);
                if clipped {
                    assert!(d <= r + 1e-9);
                } else {
                    assert!((d - r).abs() < 1e-8, "distance {d} at t = {t}");
                }
            }
            let mid = dist(frame.point(0.5 * (e.entry + e.exit)), center);
            assert!(mid < r);
        }
    }
}

#[test]
fn halving_the_step_changes_nothing() {
    let mut sampler = LiouvilleSampler::new(8);
    for (z0, r) in sites() {
        let site = make_site(z0).unwrap();
        for _ in 0..5 {
            let v = sampler.sample();
            let a = trace(&v, &site, r, 200.0, TraceOptions::default()).unwrap();
            let step = a.step / 2.0;
            let b = trace(&v, &site, r, 200.0, TraceOptions { step: Some(step), ..Default::default() }).unwrap();
            assert_eq!(a.excursions.len(), b.excursions.len());
            for (x, y) in a.excursions.iter().zip(&b.excursions) {
                assert!((x.entry - y.entry).abs() < 1e-9 && (x.exit - y.exit).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn flow_shift_moves_excursions() {
    // Tracing G_s v over [0, T − s] sees the excursions of v over [s, T], shifted by −s.
    let site = make_site(Point { x: 0.0, y: 2.0 }).unwrap();
    let mut sampler = LiouvilleSampler::new(21);
    let s = 0.8;
    for _ in 0..40 {
        let v = sampler.sample();
        let w = from_boundary_coords(&flow_shift(&to_boundary_coords(&v), s));
        let a = trace(&v, &site, 0.2, 10.0, TraceOptions::default()).unwrap();
        let b = trace(&w, &site, 0.2, 10.0 - s, TraceOptions::default()).unwrap();
        let shifted: Vec<_> = a.excursions.iter().filter(|e| e.exit > s).map(|e| (e.entry.max(s) - s, e.exit - s)).collect();
        assert_eq!(shifted.len(), b.excursions.len());
        for ((en, ex), e) in shifted.iter().zip(&b.excursions) {
            assert!((en - e.entry).abs() < 1e-8 && (ex - e.exit).abs() < 1e-8);
        }
    }
}

#[test]
fn occupancy_is_summed_clipped_length() {
    let site = make_site(Point::i()).unwrap();
    let mut sampler = LiouvilleSampler::new(2);
    for _ in 0..10 {
        let v = sampler.sample();
        let t = 300.0;
        let rec = trace(&v, &site, 0.3, t, TraceOptions::default()).unwrap();
        let s = stats(&rec, t).unwrap();
        let total: f64 = rec.excursions.iter().map(|e| e.length()).sum();
        assert!((s.occupancy * t - total).abs() < 1e-9);
        for w in rec.excursions.windows(2) {
            assert!(w[0].exit <= w[1].entry);
        }
    }
}

#[test]
fn lift_multiplicity_counts_overlapping_discs() {
    let site = make_site(Point::i()).unwrap();
    let r = 0.79;
    assert!(r > site.max_radius);
    let v = LiouvilleSampler::new(4).sample();
    assert!(matches!(
        trace(&v, &site, r, 50.0, TraceOptions::default()),
        Err(Error::EmbeddingViolated { .. })
    ));
    let opts = TraceOptions { overlap: OverlapPolicy::LiftMultiplicity, ..Default::default() };
    let rec = trace(&v, &site, r, 200.0, opts).unwrap();
    let overlaps = rec.excursions.windows(2).filter(|w| w[0].exit > w[1].entry).count();
    assert!(overlaps > 0);
}

#[test]
fn resample_signal_on_cone_hit() {
    let site = make_site(Point::i()).unwrap();
    let v = geoexcursion::liouville::UnitTangentVector::new(Point { x: 0.0, y: 1.5 }, 1.5 * std::f64::consts::PI);
    assert!(matches!(trace(&v, &site, 0.3, 5.0, TraceOptions::default()), Err(Error::ConePointHit(_))));
    let site = make_site(Point { x: 0.5, y: 3f64.sqrt() / 2.0 }).unwrap();
    let v = geoexcursion::liouville::UnitTangentVector::new(Point { x: 0.5, y: 2.0 }, 1.5 * std::f64::consts::PI);
    assert!(matches!(trace(&v, &site, 0.3, 5.0, TraceOptions::default()), Err(Error::ConePointHit(_))));
}

#[test]
fn model_reduction_agrees_with_naive_loop() {
    let model = modular();
    let mut sampler = LiouvilleSampler::new(99);
    for _ in 0..200 {
        let v = sampler.sample();
        let path = GeodesicPath::new(model, &v, 30.0);
        for k in 0..60 {
            let p = path.point(k as f64 * 0.5 + 0.25);
            let (w, _) = model.reduce(p);
            let n = common::naive_reduce(p);
            assert!(dist(w, n) < 1e-9 || (w.x.abs() - 0.5).abs() < 1e-9 || (w.norm_sqr() - 1.0).abs() < 1e-9);
        }
    }
}
