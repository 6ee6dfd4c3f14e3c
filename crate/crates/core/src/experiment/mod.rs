//! Monte Carlo replications, theory comparisons and phase sweeps.
//!
//! Every replication draws from its own stream, keyed by the master seed,
//! the cell coordinates `(omega, alpha)` and the replication index. Results
//! are therefore the same for any thread count and any cell order.

mod concentration;

pub use concentration::{
    trajectory_concentration_study, ConcentrationPlan, ConcentrationReport, ConcentrationRow,
    Quantiles,
};

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cascade::{
    default_stride, run_sequential, run_synchronous, seed_initial, CascadeParams, CascadeResult, PartnerSource,
    SequentialOptions,
};
use crate::degree_model::{sample_degree_sequence, DistConfig, JointDegreeDistribution};
use crate::error::{Error, Result};
use crate::graph::build_matching;
use crate::rng::{stream, Stream};
use crate::theory::{critical_alpha, find_y_star, Branch, RootSearch, TheoryOutcome};

/// Stream tag for cell replications.
const CELL_TAG: u64 = 0x63656c6c;

/// Jumps in the predicted limit between adjacent grid points larger than
/// this mark a critical seed fraction.
pub const JUMP_THRESHOLD: f64 = 0.5;

/// Absolute floor of the comparison tolerance.
pub const TOLERANCE_FLOOR: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Engine {
    #[default]
    #[serde(rename = "synchronous")]
    Synchronous,
    #[serde(rename = "sequential-replay")]
    SequentialReplay,
    #[serde(rename = "sequential-onfly")]
    SequentialOnTheFly,
}

impl Engine {
    pub fn as_str(self) -> &'static str {
        match self {
            Engine::Synchronous => "synchronous",
            Engine::SequentialReplay => "sequential-replay",
            Engine::SequentialOnTheFly => "sequential-onfly",
        }
    }
}

impl std::str::FromStr for Engine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "synchronous" | "sync" => Ok(Engine::Synchronous),
            "sequential-replay" | "replay" => Ok(Engine::SequentialReplay),
            "sequential-onfly" | "onfly" => Ok(Engine::SequentialOnTheFly),
            _ => Err(Error::Config(format!(
                "unknown engine `{s}` (synchronous, sequential-replay, sequential-onfly)"
            ))),
        }
    }
}

impl std::fmt::Display for Engine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentPlan {
    pub dist: DistConfig,
    pub alpha_grid: Vec<f64>,
    pub omega_grid: Vec<u32>,
    pub n: usize,
    pub reps: usize,
    pub master_seed: u64,
    #[serde(default)]
    pub engine: Engine,
    #[serde(default)]
    pub record_trajectories: bool,
}

impl ExperimentPlan {
    pub fn validate(&self) -> Result<()> {
        if self.alpha_grid.is_empty() || self.omega_grid.is_empty() {
            return Err(Error::Config("alpha and omega grids must be nonempty".into()));
        }
        if self.reps == 0 || self.n == 0 {
            return Err(Error::Config("n and reps must be at least 1".into()));
        }
        for &a in &self.alpha_grid {
            CascadeParams::new(0, a)?;
        }
        Ok(())
    }

    /// Cells in output order: omega-major, then alpha.
    pub fn cells(&self) -> Vec<CascadeParams> {
        self.omega_grid
            .iter()
            .flat_map(|&omega| self.alpha_grid.iter().map(move |&alpha| CascadeParams { omega, alpha }))
            .collect()
    }
}

/// Evenly spaced grid `start, start + step, ...` up to `stop` inclusive,
/// with values rounded to 12 decimals so `0.01 * 7` prints as `0.07`.
pub fn linear_grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && start.is_finite() && stop.is_finite() && stop >= start) {
        return Err(Error::Config(format!("bad grid {start}:{stop}:{step}")));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..count)
        .map(|i| ((start + i as f64 * step) * 1e12).round() / 1e12)
        .collect())
}

/// Stream for replication `rep` of cell `params`.
pub fn replication_stream(master_seed: u64, params: &CascadeParams, rep: usize) -> Stream {
    stream(master_seed, &[CELL_TAG, params.omega as u64, params.alpha.to_bits(), rep as u64])
}

/// One pipeline: degree sequence, seeds, matching (unless on-the-fly), cascade.
///
/// `trajectory_stride` applies to the sequential engines; `Some(0)` picks
/// [`default_stride`] for the sampled stub count.
pub fn run_replication(
    dist: &JointDegreeDistribution,
    params: &CascadeParams,
    n: usize,
    engine: Engine,
    trajectory_stride: Option<u64>,
    rng: &mut Stream,
) -> Result<CascadeResult> {
    let seq = sample_degree_sequence(dist, n, rng)?;
    let mut state = seed_initial(&seq, params, rng);
    let trajectory_stride = trajectory_stride.map(|s| if s == 0 { default_stride(seq.total_stubs()) } else { s });
    let opts = SequentialOptions { trajectory_stride, ..SequentialOptions::default() };
    match engine {
        Engine::Synchronous => {
            let m = build_matching(&seq, rng);
            run_synchronous(&mut state, &m)
        }
        Engine::SequentialReplay => {
            let m = build_matching(&seq, rng);
            run_sequential(&mut state, PartnerSource::Replay(&m), opts, rng)
        }
        Engine::SequentialOnTheFly => run_sequential(&mut state, PartnerSource::OnTheFly, opts, rng),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellResult {
    pub alpha: f64,
    pub omega: u32,
    pub n: usize,
    pub reps: usize,
    pub phi_mean: f64,
    /// Sample standard deviation (zero for a single replication).
    pub phi_sd: f64,
    pub phi_min: f64,
    pub phi_max: f64,
    /// Smallest externally seeded fraction over the replications.
    pub seed_min: f64,
    pub phi_theory: f64,
    pub y_star: f64,
    pub branch: Branch,
}

impl CellResult {
    /// `max(0.01, 3 sd / sqrt(reps))`.
    pub fn tolerance(&self) -> f64 {
        TOLERANCE_FLOOR.max(3.0 * self.phi_sd / (self.reps as f64).sqrt())
    }

    pub fn gap(&self) -> f64 {
        self.phi_mean - self.phi_theory
    }
}

fn aggregate(params: &CascadeParams, n: usize, runs: &[CascadeResult], theory: &TheoryOutcome) -> CellResult {
    let reps = runs.len();
    let phis: Vec<f64> = runs.iter().map(|r| r.phi).collect();
    let mean = phis.iter().sum::<f64>() / reps as f64;
    let sd = if reps > 1 {
        (phis.iter().map(|p| (p - mean) * (p - mean)).sum::<f64>() / (reps - 1) as f64).sqrt()
    } else {
        0.0
    };
    CellResult {
        alpha: params.alpha,
        omega: params.omega,
        n,
        reps,
        phi_mean: mean,
        phi_sd: sd,
        phi_min: phis.iter().copied().fold(f64::INFINITY, f64::min),
        phi_max: phis.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        seed_min: runs
            .iter()
            .map(|r| r.seeded as f64 / n as f64)
            .fold(f64::INFINITY, f64::min),
        phi_theory: theory.phi,
        y_star: theory.y_star,
        branch: theory.branch,
    }
}

fn replicate(
    dist: &JointDegreeDistribution,
    params: &CascadeParams,
    n: usize,
    engine: Engine,
    master_seed: u64,
    rep: usize,
) -> Result<CascadeResult> {
    let mut rng = replication_stream(master_seed, params, rep);
    run_replication(dist, params, n, engine, None, &mut rng).map_err(|e| Error::Replication {
        alpha: params.alpha,
        omega: params.omega,
        rep,
        source: Box::new(e),
    })
}

/// Runs `reps` replications of one cell in parallel and attaches the
/// theory prediction.
pub fn run_cell(
    dist: &JointDegreeDistribution,
    params: &CascadeParams,
    n: usize,
    reps: usize,
    engine: Engine,
    master_seed: u64,
) -> Result<CellResult> {
    if reps == 0 || n == 0 {
        return Err(Error::Config("n and reps must be at least 1".into()));
    }
    let theory = find_y_star(dist, params, &RootSearch::default())?;
    let runs = (0..reps)
        .into_par_iter()
        .map(|rep| replicate(dist, params, n, engine, master_seed, rep))
        .collect::<Result<Vec<_>>>()?;
    Ok(aggregate(params, n, &runs, &theory))
}

/// Evaluates every cell of the plan. All `(cell, rep)` jobs share one
/// parallel pool; the reduction is keyed by index.
pub fn run_sweep(plan: &ExperimentPlan) -> Result<Vec<CellResult>> {
    plan.validate()?;
    let dist = plan.dist.build()?;
    let cells = plan.cells();
    let theory = cells
        .par_iter()
        .map(|p| find_y_star(&dist, p, &RootSearch::default()))
        .collect::<Result<Vec<_>>>()?;
    let jobs: Vec<(usize, usize)> = (0..cells.len())
        .flat_map(|c| (0..plan.reps).map(move |r| (c, r)))
        .collect();
    let runs = jobs
        .par_iter()
        .map(|&(c, rep)| replicate(&dist, &cells[c], plan.n, plan.engine, plan.master_seed, rep))
        .collect::<Result<Vec<_>>>()?;
    Ok(cells
        .iter()
        .zip(&theory)
        .zip(runs.chunks(plan.reps))
        .map(|((p, t), r)| aggregate(p, plan.n, r, t))
        .collect())
}

pub const SWEEP_CSV_HEADER: &str = "alpha,omega,n,reps,phi_mean,phi_sd,phi_theory,branch";

pub fn write_sweep_csv<W: Write>(cells: &[CellResult], mut w: W) -> std::io::Result<()> {
    writeln!(w, "{SWEEP_CSV_HEADER}")?;
    for c in cells {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{}",
            c.alpha, c.omega, c.n, c.reps, c.phi_mean, c.phi_sd, c.phi_theory, c.branch
        )?;
    }
    Ok(())
}

/// Location of the predicted discontinuity along the alpha grid for one
/// omega: the first adjacent pair whose `phi_theory` rises by more than
/// [`JUMP_THRESHOLD`], refined by bisection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriticalPoint {
    pub omega: u32,
    pub alpha_c: f64,
    pub alpha_below: f64,
    pub alpha_above: f64,
    pub jump: f64,
}

/// Finds the critical point of every omega in a sweep whose cells are
/// omega-major with a common alpha grid.
pub fn critical_points(
    dist: &JointDegreeDistribution,
    cells: &[CellResult],
    alpha_grid: &[f64],
) -> Result<Vec<CriticalPoint>> {
    let mut out = Vec::new();
    if alpha_grid.is_empty() {
        return Ok(out);
    }
    for row in cells.chunks(alpha_grid.len()) {
        let omega = row[0].omega;
        if let Some(w) = row.windows(2).find(|w| w[1].phi_theory - w[0].phi_theory > JUMP_THRESHOLD) {
            let (lo, hi) = (w[0].alpha, w[1].alpha);
            let alpha_c = critical_alpha(dist, omega, lo, hi, JUMP_THRESHOLD, 1e-9)?.unwrap_or(0.5 * (lo + hi));
            out.push(CriticalPoint {
                omega,
                alpha_c,
                alpha_below: lo,
                alpha_above: hi,
                jump: w[1].phi_theory - w[0].phi_theory,
            });
        }
    }
    Ok(out)
}

/// Largest spacing between adjacent grid points.
pub fn grid_step(grid: &[f64]) -> f64 {
    grid.windows(2).map(|w| (w[1] - w[0]).abs()).fold(0.0, f64::max)
}

/// True when a cell sits within one grid step of its row's critical point,
/// or its root is tangential. Such cells are not held to the tolerance.
pub fn is_critical(cell: &CellResult, points: &[CriticalPoint], step: f64) -> bool {
    cell.branch == Branch::Tangential
        || points
            .iter()
            .any(|p| p.omega == cell.omega && (cell.alpha - p.alpha_c).abs() <= step + 1e-12)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepCheck {
    pub cells: usize,
    pub checked: usize,
    pub critical: Vec<CriticalPoint>,
    /// Largest `|phi_mean - phi_theory|` outside the critical band.
    pub max_gap: f64,
    /// `(alpha, omega, gap, tolerance)` of every failing cell.
    pub violations: Vec<(f64, u32, f64, f64)>,
}

impl SweepCheck {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Compares every non-critical cell against its tolerance.
pub fn check_sweep(plan: &ExperimentPlan, cells: &[CellResult]) -> Result<SweepCheck> {
    let dist = plan.dist.build()?;
    let critical = critical_points(&dist, cells, &plan.alpha_grid)?;
    let step = grid_step(&plan.alpha_grid);
    let mut check = SweepCheck { cells: cells.len(), checked: 0, critical, max_gap: 0.0, violations: Vec::new() };
    for c in cells {
        if is_critical(c, &check.critical, step) {
            continue;
        }
        check.checked += 1;
        let gap = c.gap().abs();
        check.max_gap = check.max_gap.max(gap);
        if gap >= c.tolerance() {
            check.violations.push((c.alpha, c.omega, gap, c.tolerance()));
        }
    }
    Ok(check)
}

/// Theory against simulation for a single cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub alpha: f64,
    pub omega: u32,
    pub n: usize,
    pub reps: usize,
    pub engine: Engine,
    pub phi_theory: f64,
    pub y_star: f64,
    pub branch: Branch,
    pub reliable: bool,
    pub phi_mean: f64,
    pub phi_sd: f64,
    pub phi_min: f64,
    pub phi_max: f64,
    pub gap: f64,
    /// Gap over the standard error; absent when the standard error is zero.
    pub z_score: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
}

pub fn compare(
    dist: &JointDegreeDistribution,
    params: &CascadeParams,
    n: usize,
    reps: usize,
    engine: Engine,
    master_seed: u64,
) -> Result<ComparisonReport> {
    let cell = run_cell(dist, params, n, reps, engine, master_seed)?;
    let se = cell.phi_sd / (reps as f64).sqrt();
    let gap = cell.gap();
    let reliable = cell.branch != Branch::Tangential;
    Ok(ComparisonReport {
        alpha: cell.alpha,
        omega: cell.omega,
        n,
        reps,
        engine,
        phi_theory: cell.phi_theory,
        y_star: cell.y_star,
        branch: cell.branch,
        reliable,
        phi_mean: cell.phi_mean,
        phi_sd: cell.phi_sd,
        phi_min: cell.phi_min,
        phi_max: cell.phi_max,
        gap,
        z_score: (se > 0.0).then(|| gap / se),
        tolerance: cell.tolerance(),
        pass: reliable && gap.abs() < cell.tolerance(),
    })
}
