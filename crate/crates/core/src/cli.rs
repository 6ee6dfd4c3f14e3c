//! The `bootperc` command line.
//!
//! Values come from flags, then from the `--config` file, then from built-in
//! defaults. Randomized commands refuse to run without a seed.
//!
//! Exit codes: 0 success, 1 a `--check` or comparison failed, 2 usage or
//! configuration error, 3 the prediction is unreliable (tangential root).

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, CommandFactory, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::cascade::{write_trajectory_csv, CascadeParams, CascadeResult};
use crate::degree_model::{DistConfig, JointDegreeDistribution};
use crate::error::{Error, Result};
use crate::experiment::{
    check_sweep, compare, linear_grid, replication_stream, run_replication, run_sweep,
    trajectory_concentration_study, write_sweep_csv, ConcentrationPlan, Engine, ExperimentPlan,
};
use crate::theory::{find_y_star, Branch, RootSearch};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_UNRELIABLE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "bootperc", version, about = "Bootstrap percolation on directed configuration-model graphs")]
pub struct Cli {
    /// Worker threads (default: available parallelism). Results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Suppress the run summary on standard error.
    #[arg(long, short, global = true)]
    pub quiet: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the predicted final fraction and root diagnostics as JSON.
    Theory(TheoryArgs),
    /// Run one cascade and print its result as JSON.
    Simulate(SimulateArgs),
    /// Sweep an (alpha, omega) grid and write a CSV with one row per cell.
    Sweep(SweepArgs),
    /// Compare theory with replicated simulation for one cell.
    Compare(CompareArgs),
    /// Measure the distance of sequential runs to the fluid-limit trajectory.
    Concentration(ConcentrationArgs),
}

#[derive(Debug, Args)]
pub struct Common {
    /// JSON run configuration; flags take precedence over its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// JSON degree-law file (overrides the config's `dist`).
    #[arg(long)]
    pub dist: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TheoryArgs {
    #[command(flatten)]
    pub common: Common,
    /// Seed fraction in [0, 1].
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Firing threshold.
    #[arg(long)]
    pub omega: Option<u32>,
    /// Step of the downward root scan.
    #[arg(long)]
    pub grid_step: Option<f64>,
    /// Width to which the largest root is bisected.
    #[arg(long)]
    pub root_tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub common: Common,
    /// Seed fraction in [0, 1].
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Firing threshold.
    #[arg(long)]
    pub omega: Option<u32>,
    /// Number of vertices.
    #[arg(long)]
    pub n: Option<usize>,
    /// Master seed (required here or in the config).
    #[arg(long)]
    pub seed: Option<u64>,
    /// synchronous, sequential-replay or sequential-onfly.
    #[arg(long)]
    pub engine: Option<Engine>,
    /// Write the sampled trajectory CSV here (sequential engines only).
    #[arg(long)]
    pub trajectory: Option<PathBuf>,
    /// Trajectory sampling stride in steps (default: ceil(m / 1000)).
    #[arg(long)]
    pub stride: Option<u64>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: Common,
    /// Alpha grid as `start:stop:step` or a comma list.
    #[arg(long)]
    pub alpha_grid: Option<String>,
    /// Omega grid as `start:stop[:step]` or a comma list.
    #[arg(long)]
    pub omega_grid: Option<String>,
    /// Number of vertices per replication.
    #[arg(long)]
    pub n: Option<usize>,
    /// Replications per cell.
    #[arg(long)]
    pub reps: Option<usize>,
    /// Master seed (required here or in the config).
    #[arg(long)]
    pub seed: Option<u64>,
    /// synchronous, sequential-replay or sequential-onfly.
    #[arg(long)]
    pub engine: Option<Engine>,
    /// Output CSV path (default: standard output).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Exit with status 1 if a cell away from the critical band misses its tolerance.
    #[arg(long)]
    pub check: bool,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub common: Common,
    /// Seed fraction in [0, 1].
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Firing threshold.
    #[arg(long)]
    pub omega: Option<u32>,
    /// Number of vertices per replication.
    #[arg(long)]
    pub n: Option<usize>,
    /// Replications.
    #[arg(long)]
    pub reps: Option<usize>,
    /// Master seed (required here or in the config).
    #[arg(long)]
    pub seed: Option<u64>,
    /// synchronous, sequential-replay or sequential-onfly.
    #[arg(long)]
    pub engine: Option<Engine>,
}

#[derive(Debug, Args)]
pub struct ConcentrationArgs {
    #[command(flatten)]
    pub common: Common,
    /// Seed fraction in [0, 1].
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Firing threshold.
    #[arg(long)]
    pub omega: Option<u32>,
    /// Increasing graph sizes as a comma list.
    #[arg(long)]
    pub n_list: Option<String>,
    /// Replications per size.
    #[arg(long)]
    pub reps: Option<usize>,
    /// Master seed (required here or in the config).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Compare with the fluid limit every this many steps.
    #[arg(long)]
    pub stride: Option<u64>,
    /// Also write the report JSON here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Contents of a `--config` file. Every field is optional.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub dist: Option<DistConfig>,
    pub alpha: Option<f64>,
    pub omega: Option<u32>,
    pub alpha_grid: Option<Vec<f64>>,
    pub omega_grid: Option<Vec<u32>>,
    pub n: Option<usize>,
    pub n_list: Option<Vec<usize>>,
    pub reps: Option<usize>,
    pub seed: Option<u64>,
    pub engine: Option<Engine>,
    pub record_trajectories: Option<bool>,
    pub stride: Option<u64>,
    pub grid_step: Option<f64>,
    pub root_tol: Option<f64>,
    pub out: Option<PathBuf>,
    pub trajectory: Option<PathBuf>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }
}

pub const DEFAULT_N: usize = 10_000;
pub const DEFAULT_REPS: usize = 10;
pub const DEFAULT_N_LIST: [usize; 3] = [1_000, 10_000, 100_000];

fn default_dist() -> DistConfig {
    DistConfig::gaussian(50.0, 15.0)
}

fn default_alpha_grid() -> Vec<f64> {
    linear_grid(0.0, 0.3, 0.01).expect("static grid")
}

fn default_omega_grid() -> Vec<u32> {
    (1..=40).collect()
}

struct Resolved {
    config: RunConfig,
    dist_config: DistConfig,
    dist: JointDegreeDistribution,
}

fn resolve(common: &Common) -> Result<Resolved> {
    let config = match &common.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let dist_config = match &common.dist {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", p.display())))?;
            DistConfig::from_json(&text)?
        }
        None => config.dist.clone().unwrap_or_else(default_dist),
    };
    let dist = dist_config.build().map_err(as_config)?;
    Ok(Resolved { config, dist_config, dist })
}

fn as_config(e: Error) -> Error {
    match e {
        Error::Config(_) => e,
        other => Error::Config(other.to_string()),
    }
}

fn params(alpha: Option<f64>, omega: Option<u32>, cfg: &RunConfig) -> Result<CascadeParams> {
    let alpha = alpha
        .or(cfg.alpha)
        .ok_or_else(|| Error::Config("--alpha is required".into()))?;
    let omega = omega
        .or(cfg.omega)
        .ok_or_else(|| Error::Config("--omega is required".into()))?;
    CascadeParams::new(omega, alpha).map_err(as_config)
}

fn seed(flag: Option<u64>, cfg: &RunConfig) -> Result<u64> {
    flag.or(cfg.seed)
        .ok_or_else(|| Error::Config("--seed is required for randomized commands".into()))
}

fn positive(name: &str, v: usize) -> Result<usize> {
    if v == 0 {
        Err(Error::Config(format!("--{name} must be at least 1")))
    } else {
        Ok(v)
    }
}

/// Parses `start:stop:step` or a comma list of reals.
pub fn parse_alpha_grid(s: &str) -> Result<Vec<f64>> {
    let bad = |_| Error::Config(format!("bad alpha grid `{s}`"));
    if s.contains(':') {
        let parts: Vec<f64> = s.split(':').map(|p| p.trim().parse().map_err(bad)).collect::<Result<_>>()?;
        match parts[..] {
            [a, b, step] => linear_grid(a, b, step),
            _ => Err(Error::Config(format!("alpha range `{s}` needs start:stop:step"))),
        }
    } else {
        s.split(',').map(|p| p.trim().parse().map_err(bad)).collect()
    }
}

/// Parses `start:stop[:step]` or a comma list of integers.
pub fn parse_omega_grid(s: &str) -> Result<Vec<u32>> {
    let bad = |_| Error::Config(format!("bad omega grid `{s}`"));
    if s.contains(':') {
        let parts: Vec<u32> = s.split(':').map(|p| p.trim().parse().map_err(bad)).collect::<Result<_>>()?;
        let (a, b, step) = match parts[..] {
            [a, b] => (a, b, 1),
            [a, b, step] if step > 0 => (a, b, step),
            _ => return Err(Error::Config(format!("omega range `{s}` needs start:stop[:step]"))),
        };
        if b < a {
            return Err(Error::Config(format!("empty omega range `{s}`")));
        }
        Ok((a..=b).step_by(step as usize).collect())
    } else {
        s.split(',').map(|p| p.trim().parse().map_err(bad)).collect()
    }
}

fn parse_n_list(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|p| p.trim().parse().map_err(|_| Error::Config(format!("bad n list `{s}`"))))
        .collect()
}

fn write_json<W: Write + ?Sized, T: Serialize>(out: &mut W, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn create(path: &Path) -> Result<std::io::BufWriter<std::fs::File>> {
    std::fs::File::create(path)
        .map(std::io::BufWriter::new)
        .map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display())))
}

fn cmd_theory(a: &TheoryArgs, out: &mut dyn Write) -> Result<i32> {
    let r = resolve(&a.common)?;
    let p = params(a.alpha, a.omega, &r.config)?;
    let defaults = RootSearch::default();
    let search = RootSearch {
        grid_step: a.grid_step.or(r.config.grid_step).unwrap_or(defaults.grid_step),
        root_tol: a.root_tol.or(r.config.root_tol).unwrap_or(defaults.root_tol),
        ..defaults
    };
    let outcome = find_y_star(&r.dist, &p, &search).map_err(as_config)?;
    write_json(out, &outcome)?;
    Ok(if outcome.branch == Branch::Tangential { EXIT_UNRELIABLE } else { EXIT_OK })
}

#[derive(Serialize)]
struct SimulateReport<'a> {
    alpha: f64,
    omega: u32,
    seed: u64,
    engine: Engine,
    dist: &'a DistConfig,
    #[serde(flatten)]
    result: &'a CascadeResult,
}

fn cmd_simulate(a: &SimulateArgs, out: &mut dyn Write) -> Result<i32> {
    let r = resolve(&a.common)?;
    let p = params(a.alpha, a.omega, &r.config)?;
    let seed = seed(a.seed, &r.config)?;
    let n = positive("n", a.n.or(r.config.n).unwrap_or(DEFAULT_N))?;
    let engine = a.engine.or(r.config.engine).unwrap_or_default();
    let trajectory_path = a.trajectory.clone().or(r.config.trajectory.clone());
    let record = trajectory_path.is_some() || r.config.record_trajectories.unwrap_or(false);
    if record && engine == Engine::Synchronous {
        return Err(Error::Config("trajectories need a sequential engine".into()));
    }
    let stride = a.stride.or(r.config.stride);
    if stride == Some(0) {
        return Err(Error::Config("--stride must be at least 1".into()));
    }
    let mut rng = replication_stream(seed, &p, 0);
    let mut result = run_replication(&r.dist, &p, n, engine, record.then_some(stride.unwrap_or(0)), &mut rng)?;
    if let Some(path) = &trajectory_path {
        let tr = result.trajectory.take().unwrap_or_default();
        write_trajectory_csv(&tr, create(path)?)?;
    }
    let report = SimulateReport {
        alpha: p.alpha,
        omega: p.omega,
        seed,
        engine,
        dist: &r.dist_config,
        result: &result,
    };
    write_json(out, &report)?;
    Ok(EXIT_OK)
}

fn cmd_sweep(a: &SweepArgs, out: &mut dyn Write, err: &mut dyn Write, quiet: bool) -> Result<i32> {
    let r = resolve(&a.common)?;
    let alpha_grid = match &a.alpha_grid {
        Some(s) => parse_alpha_grid(s)?,
        None => r.config.alpha_grid.clone().unwrap_or_else(default_alpha_grid),
    };
    let omega_grid = match &a.omega_grid {
        Some(s) => parse_omega_grid(s)?,
        None => r.config.omega_grid.clone().unwrap_or_else(default_omega_grid),
    };
    let plan = ExperimentPlan {
        dist: r.dist_config.clone(),
        alpha_grid,
        omega_grid,
        n: a.n.or(r.config.n).unwrap_or(DEFAULT_N),
        reps: a.reps.or(r.config.reps).unwrap_or(DEFAULT_REPS),
        master_seed: seed(a.seed, &r.config)?,
        engine: a.engine.or(r.config.engine).unwrap_or_default(),
        record_trajectories: false,
    };
    plan.validate()?;
    let out_path = a.out.clone().or(r.config.out.clone());
    // Open the output before the work so an unwritable path fails fast.
    let mut file = out_path.as_deref().map(create).transpose()?;

    let start = Instant::now();
    let cells = run_sweep(&plan)?;
    let check = check_sweep(&plan, &cells)?;
    match file.as_mut() {
        Some(f) => {
            write_sweep_csv(&cells, &mut *f)?;
            f.flush()?;
        }
        None => write_sweep_csv(&cells, &mut *out)?,
    }
    if !quiet {
        writeln!(
            err,
            "{} cells in {:.1} s; max |sim - theory| outside the critical band {:.4} ({} of {} cells checked, {} over tolerance)",
            check.cells,
            start.elapsed().as_secs_f64(),
            check.max_gap,
            check.checked,
            check.cells,
            check.violations.len()
        )?;
        for (alpha, omega, gap, tol) in &check.violations {
            writeln!(err, "  alpha {alpha} omega {omega}: gap {gap:.4} > tolerance {tol:.4}")?;
        }
    }
    if file.is_some() {
        write_json(out, &check)?;
    }
    Ok(if a.check && !check.passed() { EXIT_FAILED } else { EXIT_OK })
}

fn cmd_compare(a: &CompareArgs, out: &mut dyn Write) -> Result<i32> {
    let r = resolve(&a.common)?;
    let p = params(a.alpha, a.omega, &r.config)?;
    let seed = seed(a.seed, &r.config)?;
    let n = positive("n", a.n.or(r.config.n).unwrap_or(DEFAULT_N))?;
    let reps = positive("reps", a.reps.or(r.config.reps).unwrap_or(DEFAULT_REPS))?;
    let engine = a.engine.or(r.config.engine).unwrap_or_default();
    let report = compare(&r.dist, &p, n, reps, engine, seed)?;
    write_json(out, &report)?;
    Ok(if !report.reliable {
        EXIT_UNRELIABLE
    } else if report.pass {
        EXIT_OK
    } else {
        EXIT_FAILED
    })
}

fn cmd_concentration(a: &ConcentrationArgs, out: &mut dyn Write) -> Result<i32> {
    let r = resolve(&a.common)?;
    let p = params(a.alpha, a.omega, &r.config)?;
    let n_list = match &a.n_list {
        Some(s) => parse_n_list(s)?,
        None => r.config.n_list.clone().unwrap_or_else(|| DEFAULT_N_LIST.to_vec()),
    };
    let plan = ConcentrationPlan {
        params: p,
        n_list,
        reps: positive("reps", a.reps.or(r.config.reps).unwrap_or(DEFAULT_REPS))?,
        master_seed: seed(a.seed, &r.config)?,
        stride: a.stride.or(r.config.stride).unwrap_or(1),
    };
    let out_path = a.out.clone().or(r.config.out.clone());
    let mut file = out_path.as_deref().map(create).transpose()?;
    let report = trajectory_concentration_study(&r.dist, &plan)?;
    if let Some(f) = file.as_mut() {
        write_json(f, &report)?;
        f.flush()?;
    }
    write_json(out, &report)?;
    Ok(EXIT_OK)
}

fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match &cli.command {
        Command::Theory(a) => cmd_theory(a, out),
        Command::Simulate(a) => cmd_simulate(a, out),
        Command::Sweep(a) => cmd_sweep(a, out, err, cli.quiet),
        Command::Compare(a) => cmd_compare(a, out),
        Command::Concentration(a) => cmd_concentration(a, out),
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Replication { .. } | Error::CounterIdentity { .. } | Error::MatchingMismatch(_) => EXIT_FAILED,
        _ => EXIT_CONFIG,
    }
}

/// The clap command tree, for help rendering and introspection.
pub fn command() -> clap::Command {
    Cli::command()
}

/// Runs the CLI on explicit arguments and streams. Returns the exit code.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let threads = cli.threads.unwrap_or(0);
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: cannot start {threads} workers: {e}");
            return EXIT_CONFIG;
        }
    };
    // Streams are buffered so the work can run on the pool's threads.
    let (mut obuf, mut ebuf) = (Vec::new(), Vec::new());
    let outcome = pool.install(|| dispatch(&cli, &mut obuf, &mut ebuf));
    let _ = out.write_all(&obuf);
    let _ = err.write_all(&ebuf);
    match outcome {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn run() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let mut out = stdout.lock();
    let mut err = stderr.lock();
    let code = run_with(std::env::args_os(), &mut out, &mut err);
    let _ = out.flush();
    code
}
