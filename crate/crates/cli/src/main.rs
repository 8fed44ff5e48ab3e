use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use geoexcursion::fuchsian::{model_by_name, Site};
use geoexcursion::harness::{
    check_oracle, check_sampler, check_tangency, emit_report, render_csv, render_json, run_experiment,
    run_experiment_with_threads, ExperimentConfig, OutputFormat, SiteSpec,
};
use geoexcursion::theory;
use serde_json::json;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "geoexcursion", version, about = "Geodesic excursions into discs on the modular orbifold")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form predictions for one disc.
    Predict(PredictArgs),
    /// Run an ensemble of traced geodesics and compare with theory.
    Simulate(SimulateArgs),
    /// Numerical oracles.
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// Self-checks of the geometric primitives and the sampler.
    #[command(subcommand)]
    Check(CheckCommand),
}

#[derive(Args)]
struct PredictArgs {
    /// cone-i, cone-rho, regular-2i, or `x,y`
    #[arg(long)]
    site: SiteSpec,
    #[arg(long, conflicts_with = "area", required_unless_present = "area")]
    radius: Option<f64>,
    #[arg(long)]
    area: Option<f64>,
    #[arg(long, default_value = "modular")]
    model: String,
}

#[derive(Args)]
struct SimulateArgs {
    /// JSON experiment config; command-line flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    model: Option<String>,
    #[arg(long)]
    site: Option<SiteSpec>,
    #[arg(long, conflicts_with = "area")]
    radius: Option<f64>,
    #[arg(long)]
    area: Option<f64>,
    /// Horizon T of each trajectory.
    #[arg(long)]
    time: Option<f64>,
    #[arg(long)]
    replicas: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Sampling step δ (defaults to min(r/2, 0.05)).
    #[arg(long)]
    step: Option<f64>,
    /// Allow discs past the embedding radius; lifts are counted with multiplicity.
    #[arg(long)]
    allow_overlap: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    format: Option<OutputFormat>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Integrate the cross-section measure numerically.
    Integrate {
        #[arg(long)]
        radius: f64,
    },
}

#[derive(Subcommand)]
enum CheckCommand {
    /// Tangency of the W/U maps on a grid of boundary points.
    Tangency {
        #[arg(long)]
        rho: f64,
        #[arg(long, default_value_t = 1000)]
        grid: usize,
    },
    /// Goodness of fit of the Liouville sampler.
    Sampler {
        #[arg(long, default_value_t = 1_000_000)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Invalid input or configuration.
const EXIT_INVALID: u8 = 2;
/// A check ran and failed.
const EXIT_CHECK_FAILED: u8 = 3;

enum Failure {
    Invalid(anyhow::Error),
    Other(anyhow::Error),
}

impl From<geoexcursion::Error> for Failure {
    fn from(e: geoexcursion::Error) -> Self {
        use geoexcursion::Error::*;
        match e {
            Io(_) => Failure::Other(e.into()),
            _ => Failure::Invalid(e.into()),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Other(e)
    }
}

fn print_json(v: &impl serde::Serialize) -> Result<(), Failure> {
    println!("{}", serde_json::to_string_pretty(v).context("serializing output")?);
    Ok(())
}

fn predict(args: PredictArgs) -> Result<u8, Failure> {
    let model = model_by_name(&args.model)?;
    let site = Site::new(model, args.site.point())?;
    let area_s = model.area();
    let (radius, printed) = match (args.radius, args.area) {
        (Some(r), _) => (r, None),
        (None, Some(a)) => {
            let p = theory::predict_area_form(a, site.order, area_s)?;
            (p.corrected.radius, Some(p.printed))
        }
        (None, None) => unreachable!("clap requires one of radius and area"),
    };
    let prediction = theory::predict_radius_form(radius, site.order, area_s)?;
    print_json(&json!({
        "site": args.site,
        "order": site.order,
        "max_radius": site.max_radius,
        "max_area": site.max_area(),
        "embedded": radius < site.max_radius,
        "orbifold_area": area_s,
        "prediction": prediction,
        "printed": printed,
    }))?;
    Ok(0)
}

fn simulate(args: SimulateArgs) -> Result<u8, Failure> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            serde_json::from_str::<ExperimentConfig>(&text)
                .map_err(|e| Failure::Invalid(anyhow::anyhow!("{}: {e}", path.display())))?
        }
        None => ExperimentConfig::default(),
    };
    if let Some(v) = args.model {
        cfg.model = v;
    }
    if let Some(v) = args.site {
        cfg.site = v;
    }
    if let Some(r) = args.radius {
        cfg.radius = Some(r);
        cfg.area = None;
    }
    if let Some(a) = args.area {
        cfg.area = Some(a);
        cfg.radius = None;
    }
    if let Some(v) = args.time {
        cfg.time = v;
    }
    if let Some(v) = args.replicas {
        cfg.replicas = v;
    }
    if let Some(v) = args.seed {
        cfg.seed = v;
    }
    if args.step.is_some() {
        cfg.step = args.step;
    }
    if args.allow_overlap {
        cfg.allow_overlap = true;
    }
    if args.out.is_some() {
        cfg.out = args.out;
    }
    if let Some(v) = args.format {
        cfg.format = v;
    }
    let report = match args.threads {
        Some(n) => run_experiment_with_threads(&cfg, n)?,
        None => run_experiment(&cfg)?,
    };
    match &cfg.out {
        Some(path) => {
            emit_report(&report, cfg.format, path)?;
            eprintln!(
                "{} replicas, T = {}, wrote {} ({:.2}s)",
                report.replicas.len(),
                cfg.time,
                path.display(),
                report.wall_seconds
            );
        }
        None => {
            let body = match cfg.format {
                OutputFormat::Csv => render_csv(&report)?,
                OutputFormat::Json => render_json(&report)?,
            };
            print!("{body}");
        }
    }
    Ok(0)
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Predict(args) => predict(args),
        Command::Simulate(args) => simulate(args),
        Command::Oracle(OracleCommand::Integrate { radius }) => {
            let rep = check_oracle(radius)?;
            print_json(&rep)?;
            Ok(if rep.passed { 0 } else { EXIT_CHECK_FAILED })
        }
        Command::Check(CheckCommand::Tangency { rho, grid }) => {
            let rep = check_tangency(rho, grid)?;
            print_json(&rep)?;
            Ok(if rep.passed { 0 } else { EXIT_CHECK_FAILED })
        }
        Command::Check(CheckCommand::Sampler { n, seed }) => {
            let rep = check_sampler(n, seed)?;
            print_json(&rep)?;
            Ok(if rep.passed { 0 } else { EXIT_CHECK_FAILED })
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Invalid(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_INVALID)
        }
        Err(Failure::Other(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
