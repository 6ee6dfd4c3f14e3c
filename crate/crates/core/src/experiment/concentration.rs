use rayon::prelude::*;
use serde::Serialize;

use crate::cascade::{run_sequential, seed_initial, CascadeParams, PartnerSource, SequentialOptions};
use crate::degree_model::{sample_degree_sequence, JointDegreeDistribution};
use crate::error::{Error, Result};
use crate::rng::stream;
use crate::theory::trajectory_at_y;

const STUDY_TAG: u64 = 0x636f6e63;

#[derive(Debug, Clone, PartialEq)]
pub struct ConcentrationPlan {
    pub params: CascadeParams,
    pub n_list: Vec<usize>,
    pub reps: usize,
    pub master_seed: u64,
    /// Compare against the fluid limit every this many steps.
    pub stride: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Quantiles {
    pub median: f64,
    pub q10: f64,
    pub q90: f64,
    pub max: f64,
}

impl Quantiles {
    fn of(values: &[f64]) -> Self {
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        // Linear interpolation between order statistics.
        let at = |q: f64| {
            let pos = q * (v.len() - 1) as f64;
            let (lo, hi) = (pos.floor() as usize, pos.ceil() as usize);
            v[lo] + (pos - lo as f64) * (v[hi] - v[lo])
        };
        Self { median: at(0.5), q10: at(0.1), q90: at(0.9), max: v[v.len() - 1] }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConcentrationRow {
    pub n: usize,
    /// `sup_t |F(t)/n - f(t/n)|` over replications.
    pub fired: Quantiles,
    /// `sup_t |F_out(t)/n - f_out(t/n)|` over replications.
    pub fired_out: Quantiles,
    pub per_rep_fired: Vec<f64>,
    pub per_rep_fired_out: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConcentrationReport {
    pub alpha: f64,
    pub omega: u32,
    pub reps: usize,
    pub master_seed: u64,
    pub stride: u64,
    pub rows: Vec<ConcentrationRow>,
}

impl ConcentrationReport {
    /// True when the median fired-count deviation strictly decreases along `n`.
    pub fn strictly_decreasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].fired.median < w[0].fired.median)
    }
}

/// Sup deviations of one on-the-fly run from the closed-form trajectory,
/// taken over the recorded steps up to the stopping time.
fn sup_deviation(
    dist: &JointDegreeDistribution,
    params: &CascadeParams,
    n: usize,
    stride: u64,
    master_seed: u64,
    rep: usize,
) -> Result<(f64, f64)> {
    let mut rng = stream(master_seed, &[STUDY_TAG, n as u64, rep as u64]);
    let seq = sample_degree_sequence(dist, n, &mut rng)?;
    let mut state = seed_initial(&seq, params, &mut rng);
    let opts = SequentialOptions { trajectory_stride: Some(stride), ..SequentialOptions::default() };
    let result = run_sequential(&mut state, PartnerSource::OnTheFly, opts, &mut rng)?;
    let lambda = dist.lambda();
    let nf = n as f64;
    let (mut sup_f, mut sup_out) = (0.0f64, 0.0f64);
    for s in result.trajectory.unwrap_or_default() {
        // The sample's stub total can exceed n lambda; the limit is flat at y = 0.
        let y = (1.0 - s.t as f64 / nf / lambda).max(0.0);
        let pt = trajectory_at_y(y, dist, params);
        sup_f = sup_f.max((s.fired as f64 / nf - pt.f_total_vertices).abs());
        sup_out = sup_out.max((s.f_out as f64 / nf - pt.f_out).abs());
    }
    Ok((sup_f, sup_out))
}

/// Runs `reps` on-the-fly cascades for each `n` and summarizes their
/// sup-distance to the fluid limit.
pub fn trajectory_concentration_study(
    dist: &JointDegreeDistribution,
    plan: &ConcentrationPlan,
) -> Result<ConcentrationReport> {
    if plan.reps == 0 || plan.n_list.is_empty() || plan.stride == 0 {
        return Err(Error::Config("concentration study needs reps, n values and a stride".into()));
    }
    if plan.n_list.windows(2).any(|w| w[1] <= w[0]) || plan.n_list[0] == 0 {
        return Err(Error::Config("n_list must be positive and strictly increasing".into()));
    }
    let mut rows = Vec::with_capacity(plan.n_list.len());
    for &n in &plan.n_list {
        let devs = (0..plan.reps)
            .into_par_iter()
            .map(|rep| sup_deviation(dist, &plan.params, n, plan.stride, plan.master_seed, rep))
            .collect::<Result<Vec<_>>>()?;
        let (f, out): (Vec<f64>, Vec<f64>) = devs.into_iter().unzip();
        rows.push(ConcentrationRow {
            n,
            fired: Quantiles::of(&f),
            fired_out: Quantiles::of(&out),
            per_rep_fired: f,
            per_rep_fired_out: out,
        });
    }
    Ok(ConcentrationReport {
        alpha: plan.params.alpha,
        omega: plan.params.omega,
        reps: plan.reps,
        master_seed: plan.master_seed,
        stride: plan.stride,
        rows,
    })
}
