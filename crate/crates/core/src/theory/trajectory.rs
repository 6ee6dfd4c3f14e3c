use serde::Serialize;

use super::binomial::{pmf, tail_at_least, tail_below};
use crate::cascade::CascadeParams;
use crate::degree_model::JointDegreeDistribution;
use crate::error::{Error, Result};

/// Aggregates of the fluid limit at rescaled time `tau`, per vertex.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrajectoryPoint {
    pub tau: f64,
    pub y: f64,
    /// Fired out-stubs not yet consumed: `sum k f^{j,k} - tau`.
    pub f_out: f64,
    /// Fired vertices: `sum f^{j,k}`. This is the limit of `F(t) / n`.
    pub f_total_vertices: f64,
    /// Out-stubs on fired vertices, consumed or not: `sum k f^{j,k}`.
    pub f_total_outmass: f64,
    /// Unconsumed in-stubs on non-fired vertices.
    pub n_in: f64,
    /// Unconsumed in-stubs on fired vertices.
    pub f_in: f64,
}

/// Per-class values `n_i^{j,k}` for `i < min(omega, j + 1)` and `f^{j,k}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassPoint {
    pub in_degree: u32,
    pub out_degree: u32,
    pub mass: f64,
    pub n: Vec<f64>,
    pub f: f64,
}

fn y_of(tau: f64, lambda: f64) -> Result<f64> {
    if !(tau.is_finite() && tau >= 0.0 && tau < lambda) {
        return Err(Error::TauOutOfRange { tau, lambda });
    }
    Ok(1.0 - tau / lambda)
}

/// Closed-form solution of the fluid-limit system at `tau`, with
/// `y = 1 - tau / lambda`. Requires `0 <= tau < lambda`.
pub fn ode_trajectory(
    tau: f64,
    dist: &JointDegreeDistribution,
    params: &CascadeParams,
) -> Result<TrajectoryPoint> {
    let y = y_of(tau, dist.lambda())?;
    Ok(trajectory_at_y(y, dist, params))
}

/// Same as [`ode_trajectory`] but parameterized by `y` in `[0, 1]`.
pub fn trajectory_at_y(y: f64, dist: &JointDegreeDistribution, params: &CascadeParams) -> TrajectoryPoint {
    let lambda = dist.lambda();
    let (alpha, omega) = (params.alpha, params.omega);
    let q = (1.0 - y).clamp(0.0, 1.0);
    let tau = lambda * q;
    let (mut vertices, mut outmass, mut n_in) = (0.0, 0.0, 0.0);
    for g in dist.in_degree_groups() {
        let fired = alpha + (1.0 - alpha) * tail_at_least(g.in_degree, q, omega);
        vertices += g.mass * fired;
        outmass += g.out_mass * fired;
        // sum_{i<omega} (j - i) C(j,i) q^i y^(j-i) = j y P(Bin(j-1, q) < omega)
        if g.in_degree > 0 {
            n_in += g.mass * g.in_degree as f64 * y * tail_below(g.in_degree - 1, q, omega);
        }
    }
    n_in *= 1.0 - alpha;
    TrajectoryPoint {
        tau,
        y,
        f_out: outmass - tau,
        f_total_vertices: vertices,
        f_total_outmass: outmass,
        n_in,
        f_in: lambda - tau - n_in,
    }
}

/// Per-class tables at `tau`, in the order of the distribution's support.
pub fn class_tables(
    tau: f64,
    dist: &JointDegreeDistribution,
    params: &CascadeParams,
) -> Result<Vec<ClassPoint>> {
    let y = y_of(tau, dist.lambda())?;
    let q = 1.0 - y;
    let (alpha, omega) = (params.alpha, params.omega);
    Ok(dist
        .support()
        .iter()
        .map(|c| {
            let top = omega.min(c.in_degree + 1);
            ClassPoint {
                in_degree: c.in_degree,
                out_degree: c.out_degree,
                mass: c.p,
                n: (0..top).map(|i| c.p * (1.0 - alpha) * pmf(c.in_degree, i, q)).collect(),
                f: c.p * (alpha + (1.0 - alpha) * tail_at_least(c.in_degree, q, omega)),
            }
        })
        .collect())
}
