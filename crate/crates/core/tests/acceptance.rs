//! Acceptance gate: one PASS/FAIL line per criterion.

mod common;

use common::{bounded_elements, dense_scan, orbit_window, Point};
use geoexcursion::excursion::{trace_on_path, GeodesicPath, TraceOptions};
use geoexcursion::fuchsian::{make_site, modular, OrbifoldModel};
use geoexcursion::harness::{
    check_oracle, check_sampler, check_tangency, render_csv, render_json, run_experiment, run_experiment_with_threads,
    ExperimentConfig, ExperimentReport, SiteSpec,
};
use geoexcursion::hypgeom::dist;
use geoexcursion::liouville::LiouvilleSampler;
use geoexcursion::quad;
use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

const REL_TOL: f64 = 0.05;
const SIGMAS: f64 = 3.0;
const REPLICAS: usize = 200;
const HORIZON: f64 = 5000.0;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn ensemble(site: SiteSpec, radius: Option<f64>, area: Option<f64>, seed: u64) -> ExperimentReport {
    let cfg = ExperimentConfig {
        site,
        radius,
        area,
        time: HORIZON,
        replicas: REPLICAS,
        seed,
        allow_overlap: area.is_some(),
        ..Default::default()
    };
    run_experiment(&cfg).expect("experiment runs")
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut worst = (0.0f64, 0.0f64);
    let mut ok = true;
    for r in [0.1, 0.25, 0.5, 1.0, 1.5] {
        let rep = check_oracle(r).unwrap();
        ok &= rep.passed;
        worst = (worst.0.max(rep.rel_error), worst.1.max(rep.max_inner_residual));
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        ok && secs < 1.0,
        format!("max rel error {:.2e}, max inner residual {:.2e}, {secs:.3}s", worst.0, worst.1),
    )
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut ok = true;
    let mut worst = 0.0f64;
    for rho in [0.2, 0.5, 1f64.asinh(), 1.5] {
        let rep = check_tangency(rho, 200).unwrap();
        ok &= rep.passed;
        worst = worst.max(rep.max_residual_w).max(rep.max_residual_u);
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(ok && secs < 1.0, format!("max residual {worst:.2e}, {secs:.3}s"))
}

fn describe(rep: &ExperimentReport, q: &str) -> String {
    let c = rep.comparison(q).unwrap();
    format!(
        "{q} {:.5} ± {:.5} vs {:.5} (rel {:.2}%, z {:+.2})",
        c.empirical.unwrap_or(f64::NAN),
        c.std_error.unwrap_or(f64::NAN),
        c.theory,
        100.0 * c.rel_error.unwrap_or(f64::NAN),
        c.z_score.unwrap_or(f64::NAN)
    )
}

fn criterion_3(rep: &ExperimentReport) -> Outcome {
    let c = rep.comparison("rate").unwrap();
    outcome(c.agrees(REL_TOL, SIGMAS), describe(rep, "rate"))
}

fn criterion_4(rep: &ExperimentReport) -> Outcome {
    let qs = ["mean_length", "mean_gap", "occupancy"];
    let ok = qs.iter().all(|q| rep.comparison(q).unwrap().rel_error.is_some_and(|e| e <= REL_TOL));
    outcome(ok, qs.iter().map(|q| describe(rep, q)).collect::<Vec<_>>().join("; "))
}

fn criterion_5() -> Outcome {
    let i = ensemble(SiteSpec::ConeI, Some(0.4), None, 5);
    let rho = ensemble(SiteSpec::ConeRho, Some(0.4), None, 6);
    let ok = [&i, &rho].iter().all(|r| r.comparison("rate").unwrap().rel_error.is_some_and(|e| e <= REL_TOL));
    outcome(ok, format!("k=2: {}; k=3: {}", describe(&i, "rate"), describe(&rho, "rate")))
}

fn criterion_6() -> Outcome {
    let rep = ensemble(SiteSpec::ConeI, None, Some(1.0), 7);
    let mut ok = true;
    let mut parts = Vec::new();
    for q in ["rate", "mean_length"] {
        let c = rep.comparison(q).unwrap();
        let pz = c.printed_z_score.unwrap_or(0.0);
        ok &= c.rel_error.is_some_and(|e| e <= REL_TOL) && pz.abs() >= 10.0;
        parts.push(format!("{}, printed {:.5} at {:+.1} SE", describe(&rep, q), c.printed.unwrap(), -pz));
    }
    outcome(ok, parts.join("; "))
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let model = modular();
    let sites = [(Point { x: 0.0, y: 2.0 }, 0.2), (Point::i(), 0.4), (Point { x: 0.5, y: 3f64.sqrt() / 2.0 }, 0.4)];
    let windows: Vec<_> = sites.iter().map(|(z0, _)| orbit_window(*z0)).collect();
    let mut sampler = LiouvilleSampler::new(2024);
    let horizon = 200.0;
    let (mut ok, mut total, mut worst, mut step_worst) = (true, 0usize, 0.0f64, 0.0f64);
    for n in 0..50 {
        let (z0, r) = sites[n % 3];
        let site = make_site(z0).unwrap();
        let v = sampler.sample();
        let path = GeodesicPath::new(model, &v, horizon);
        let rec = trace_on_path(model, &path, &site, r, horizon, TraceOptions::default()).unwrap();
        let scan = dense_scan(&path, &windows[n % 3], r, horizon, 1e-3);
        total += scan.len();
        if rec.excursions.len() != scan.len() {
            ok = false;
            continue;
        }
        for (e, s) in rec.excursions.iter().zip(&scan) {
            worst = worst.max((e.entry - s.entry).abs()).max((e.exit - s.exit).abs());
        }
        let half = TraceOptions { step: Some(rec.step / 2.0), ..Default::default() };
        let rec2 = trace_on_path(model, &path, &site, r, horizon, half).unwrap();
        if rec2.excursions.len() != rec.excursions.len() {
            ok = false;
            continue;
        }
        for (a, b) in rec.excursions.iter().zip(&rec2.excursions) {
            step_worst = step_worst.max((a.entry - b.entry).abs()).max((a.exit - b.exit).abs());
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        ok && worst <= 1e-3 && step_worst <= 1e-9 && secs < 60.0,
        format!("{total} excursions, max endpoint gap {worst:.1e}, δ-halving gap {step_worst:.1e}, {secs:.1}s"),
    )
}

fn criterion_8() -> Outcome {
    let mut parts = Vec::new();
    let area = quad::integrate(
        |x: f64| quad::integrate_to_infinity(|y: f64| y.powi(-2), (1.0 - x * x).sqrt(), 1e-13).value,
        -0.5,
        0.5,
        1e-13,
        1000,
    )
    .value;
    let area_ok = (area - PI / 3.0).abs() < 1e-8 && (modular().area() - PI / 3.0).abs() < 1e-15;
    parts.push(format!("area {area:.12}"));

    let all = bounded_elements(20);
    let mut sites_ok = true;
    for z0 in [Point::i(), Point { x: 0.5, y: 3f64.sqrt() / 2.0 }, Point { x: 0.0, y: 2.0 }] {
        let site = make_site(z0).unwrap();
        let k = all.iter().filter(|g| dist(g.apply(z0), z0) < 1e-10).count();
        let big_r = 0.5 * all.iter().map(|g| dist(g.apply(z0), z0)).filter(|d| *d > 1e-10).fold(f64::INFINITY, f64::min);
        sites_ok &= site.order as usize == k && (site.max_radius - big_r).abs() < 1e-9;
        parts.push(format!("(k={}, R={:.6})", site.order, site.max_radius));
    }

    let s = check_sampler(1_000_000, 8).unwrap();
    parts.push(format!(
        "sampler p = {:.3}/{:.3}/{:.3}",
        s.angle.p_value, s.x_marginal.p_value, s.y_marginal.p_value
    ));

    let cfg = ExperimentConfig { site: SiteSpec::ConeRho, radius: Some(0.4), time: 500.0, replicas: 16, seed: 11, ..Default::default() };
    let one = run_experiment_with_threads(&cfg, 1).unwrap();
    let four = run_experiment_with_threads(&cfg, 4).unwrap();
    let same = render_json(&one).unwrap() == render_json(&four).unwrap()
        && render_csv(&one).unwrap() == render_csv(&four).unwrap();
    parts.push(format!("1 vs 4 threads identical: {same}"));
    outcome(area_ok && sites_ok && s.passed && same, parts.join(", "))
}

fn main() -> ExitCode {
    let regular = ensemble(SiteSpec::Regular2i, Some(0.2), None, 42);
    let results = [
        ("1 quadrature oracle", criterion_1()),
        ("2 tangency maps", criterion_2()),
        ("3 return rate, regular point", criterion_3(&regular)),
        ("4 length, gap, occupancy", criterion_4(&regular)),
        ("5 cone points", criterion_5()),
        ("6 area form, corrected vs printed", criterion_6()),
        ("7 tracer vs dense scan", criterion_7()),
        ("8 foundations", criterion_8()),
    ];
    let mut failed = 0;
    for (name, o) in &results {
        println!("{} criterion {name}: {}", if o.passed { "PASS" } else { "FAIL" }, o.detail);
        failed += usize::from(!o.passed);
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
