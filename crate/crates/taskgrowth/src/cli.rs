use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use taskgrowth_core::dynamics::Scenario;
use taskgrowth_core::sweep::Sampling;
use taskgrowth_core::ParamName;

use crate::config::Config;
use crate::error::{Error, Result};
use crate::manifest::RunManifest;
use crate::pipeline;
use crate::shock::parse_schedule;
use crate::svg::{self, Series};
use crate::tables;

#[derive(Debug, Parser)]
#[command(name = "taskgrowth", version, about = "Task-based endogenous growth model: statics, simulation, sweeps and surrogate analysis")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Key variables over a grid of automation frontiers.
    Statics(StaticsArgs),
    /// Forward simulation of one configuration.
    Simulate(SimulateArgs),
    /// Batch of simulations over sampled parameters.
    Sweep(SweepArgs),
    /// Random-forest surrogate, importances and Shapley values for a sweep dataset.
    Analyze(AnalyzeArgs),
}

#[derive(Debug, Args)]
pub struct Common {
    /// JSON configuration; omitted keys take baseline values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory (created if missing).
    #[arg(long)]
    pub out: PathBuf,
    /// Also write SVG charts.
    #[arg(long)]
    pub plots: bool,
}

#[derive(Debug, Args)]
pub struct StaticsArgs {
    #[command(flatten)]
    pub common: Common,
    /// Number of frontier grid points over [0, M].
    #[arg(long)]
    pub grid: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub common: Common,
    /// Parameter preset: 0 (static), knowledge, adaptive or full.
    #[arg(long, default_value = "full", value_parser = parse_scenario)]
    pub scenario: Scenario,
    /// Shock `name[,name...]:*MULT@[t0,t1)`; repeat or join with `;`.
    #[arg(long)]
    pub shock: Vec<String>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SamplingArg {
    Uniform,
    Lhs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 500)]
    pub n: usize,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Overrides the config's sampling scheme.
    #[arg(long, value_enum)]
    pub sampling: Option<SamplingArg>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub common: Common,
    /// Sweep dataset CSV.
    #[arg(long)]
    pub dataset: PathBuf,
    /// Surrogate target: w or s_L.
    #[arg(long, default_value = "s_L", value_parser = parse_target)]
    pub target: taskgrowth_core::sweep::Target,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

fn parse_scenario(s: &str) -> std::result::Result<Scenario, String> {
    s.parse().map_err(|_| format!("unknown scenario `{s}` (expected 0, knowledge, adaptive or full)"))
}

fn parse_target(s: &str) -> std::result::Result<taskgrowth_core::sweep::Target, String> {
    pipeline::parse_target(s).ok_or_else(|| format!("unknown target `{s}` (expected w or s_L)"))
}

struct Run {
    manifest: RunManifest,
    out: PathBuf,
    plots: bool,
}

impl Run {
    fn start(command: &str, args: &[String], common: &Common, seed: Option<u64>) -> Result<(Self, Config)> {
        let config = match &common.config {
            Some(p) => Config::load(p)?,
            None => Config::default(),
        };
        let mut manifest = RunManifest::new(command, args.to_vec(), seed, config.clone());
        if let Some(p) = &common.config {
            manifest.add_input(p)?;
        }
        std::fs::create_dir_all(&common.out).map_err(|e| Error::io(&common.out, e))?;
        Ok((Self { manifest, out: common.out.clone(), plots: common.plots }, config))
    }

    fn table<F>(&mut self, name: &str, f: F) -> Result<()>
    where
        F: FnOnce(&mut std::io::BufWriter<std::fs::File>) -> std::io::Result<()>,
    {
        tables::write_file(&self.out.join(name), f)?;
        self.manifest.outputs.push(name.into());
        Ok(())
    }

    fn text(&mut self, name: &str, body: &str) -> Result<()> {
        let path = self.out.join(name);
        std::fs::write(&path, body).map_err(|e| Error::io(&path, e))?;
        self.manifest.outputs.push(name.into());
        Ok(())
    }

    fn finish(self) -> Result<()> {
        self.manifest.write(&self.out)
    }
}

/// Runs the command line `args` (without the program name).
pub fn run(args: &[String]) -> Result<()> {
    let argv = std::iter::once("taskgrowth".to_string()).chain(args.iter().cloned());
    let cli = Cli::try_parse_from(argv).map_err(|e| match e.kind() {
        clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => e.exit(),
        _ => Error::Config(e.to_string().trim_end().to_string()),
    })?;
    match cli.command {
        Command::Statics(a) => statics(args, &a),
        Command::Simulate(a) => simulate(args, &a),
        Command::Sweep(a) => sweep(args, &a),
        Command::Analyze(a) => analyze(args, &a),
    }
}

fn statics(args: &[String], a: &StaticsArgs) -> Result<()> {
    let (mut run, mut cfg) = Run::start("statics", args, &a.common, None)?;
    if let Some(g) = a.grid {
        cfg.statics.grid = g;
        run.manifest.config = cfg.clone();
    }
    let rows = pipeline::statics(&cfg, cfg.statics.grid)?;
    run.table("statics.csv", |w| tables::write_statics(w, &rows))?;
    if run.plots {
        let col = |f: fn(&taskgrowth_core::production::StaticEquilibrium) -> f64| -> Vec<(f64, f64)> {
            rows.iter().map(|r| (r.eq.z_star, f(&r.eq))).collect()
        };
        for (file, label, pts) in [
            ("statics_Y_per_L.svg", "Y/L", col(|e| e.output_per_worker)),
            ("statics_w.svg", "w", col(|e| e.wage)),
            ("statics_s_L.svg", "s_L", col(|e| e.labor_share)),
            ("statics_K_over_Y.svg", "K/Y", col(|e| e.capital_output_ratio)),
        ] {
            let chart = svg::line_chart(&format!("{label} vs z*"), "z*", label, &[Series { name: label, points: pts }]);
            run.text(file, &chart)?;
        }
    }
    println!("statics: {} grid points -> {}", rows.len(), run.out.join("statics.csv").display());
    run.finish()
}

fn simulate(args: &[String], a: &SimulateArgs) -> Result<()> {
    let (mut run, cfg) = Run::start("simulate", args, &a.common, None)?;
    let shocks = parse_schedule(&a.shock)?;
    let traj = pipeline::run_simulation(&cfg, a.scenario, shocks)?;
    run.table("trajectory.csv", |w| tables::write_trajectory(w, &traj))?;
    if run.plots {
        let series = |f: fn(&taskgrowth_core::dynamics::TrajectoryPoint) -> f64| -> Vec<(f64, f64)> {
            traj.points.iter().map(|p| (p.t, f(p))).collect()
        };
        for (file, label, pts) in [
            ("trajectory_knowledge.svg", "knowledge", series(|p| p.knowledge)),
            ("trajectory_z_star.svg", "z*", series(|p| p.z_star)),
            ("trajectory_w.svg", "w", series(|p| p.wage)),
            ("trajectory_s_L.svg", "s_L", series(|p| p.labor_share)),
            ("trajectory_Y.svg", "Y", series(|p| p.output)),
        ] {
            let chart = svg::line_chart(&format!("{label} over time"), "t", label, &[Series { name: label, points: pts }]);
            run.text(file, &chart)?;
        }
        let w0 = traj.points.first().map_or(1.0, |p| p.wage);
        let phase: Vec<(f64, f64)> = traj.points.iter().map(|p| (p.z_star, p.wage / w0)).collect();
        run.text("phase_w_z.svg", &svg::line_chart("w/w0 vs z*", "z*", "w/w0", &[Series { name: "w/w0", points: phase }]))?;
    }
    if let Some(end) = traj.last() {
        println!(
            "simulate: t={} z*={:.6} w={:.6} s_L={:.6} converged={} stagnated={} diverged={}",
            end.t, end.z_star, end.wage, end.labor_share, traj.converged, traj.stagnated, traj.diverged
        );
    }
    run.finish()
}

fn sweep(args: &[String], a: &SweepArgs) -> Result<()> {
    let (mut run, cfg) = Run::start("sweep", args, &a.common, Some(a.seed))?;
    let sampling = match a.sampling {
        Some(SamplingArg::Uniform) => Sampling::Uniform,
        Some(SamplingArg::Lhs) => Sampling::LatinHypercube,
        None => cfg.sampling(),
    };
    let out = pipeline::sweep(&cfg, a.n, a.seed, sampling)?;
    run.table("dataset.csv", |w| tables::write_dataset(w, &out.dataset))?;
    run.table("failures.csv", |w| tables::write_failures(w, &out.dataset, &out.failures))?;
    println!(
        "sweep: {} rows, {} converged ({:.1}%), {} failed",
        out.dataset.rows.len(),
        out.dataset.converged().count(),
        100.0 * out.dataset.converged_fraction(),
        out.failures.len()
    );
    run.finish()
}

fn analyze(args: &[String], a: &AnalyzeArgs) -> Result<()> {
    let (mut run, cfg) = Run::start("analyze", args, &a.common, Some(a.seed))?;
    run.manifest.add_input(&a.dataset)?;
    let ds = tables::read_dataset(&a.dataset)?;
    let res = pipeline::analyze(&ds, a.target, &cfg.surrogate, a.seed)?;
    run.table("importance.csv", |w| tables::write_importance(w, &res.importance))?;
    run.table("shap.csv", |w| tables::write_shap(w, &res.shap))?;
    let metrics = serde_json::to_string_pretty(&res.metrics_json()).expect("metrics serialize") + "\n";
    run.text("metrics.json", &metrics)?;
    if run.plots {
        let names: Vec<&str> = ParamName::ALL.iter().map(|p| p.as_str()).collect();
        let pts: Vec<(usize, f64, f64)> = res.shap.iter().map(|e| (e.feature.index(), e.shap, e.percentile)).collect();
        let title = format!("Shapley values for {}", pipeline::target_name(a.target));
        run.text("shap.svg", &svg::beeswarm(&title, &names, &pts))?;
    }
    let top: Vec<&str> = res.importance.ranking().iter().take(3).map(|&i| ParamName::ALL[i].as_str()).collect();
    println!(
        "analyze: {} converged rows, validation R2={:.3}, top features {}",
        res.n_converged,
        res.validation_r2,
        top.join(", ")
    );
    run.finish()
}
