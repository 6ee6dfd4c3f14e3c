//! Bootstrap percolation run to its fixed point.
//!
//! Two engines share one [`CascadeState`]:
//!
//! * [`run_synchronous`] applies the round rule: a non-fired vertex fires at
//!   round `t + 1` when at least `omega` of its in-edges (counted with
//!   multiplicity) come from vertices fired at round `t`.
//! * [`run_sequential`] consumes one fired out-stub per step, reveals its
//!   partner in-stub, and fires the partner on its `omega`-th reveal. It
//!   keeps the per-class counters `N_i^{j,k}`, `F^{j,k}` and the stub totals
//!   `N_in`, `F_in`, `F_out` that the fluid limit is written in.
//!
//! Both engines reach the same final fired set on a fixed matching: the
//! closure of a monotone threshold rule does not depend on the schedule.

mod sequential;
mod state;
mod synchronous;

pub use sequential::{run_sequential, PartnerSource, SequentialOptions, StubOrder};
pub use state::{seed_initial, CascadeState, DegreeClasses};
pub use synchronous::run_synchronous;

use serde::Serialize;

use crate::error::{Error, Result};

/// Firing threshold and external activation probability.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CascadeParams {
    pub omega: u32,
    pub alpha: f64,
}

impl CascadeParams {
    pub fn new(omega: u32, alpha: f64) -> Result<Self> {
        if !alpha.is_finite() || !(0.0..=1.0).contains(&alpha) {
            return Err(Error::InvalidProbability(alpha));
        }
        Ok(Self { omega, alpha })
    }
}

/// Stub-side counters at one sequential step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TrajectorySample {
    pub t: u64,
    pub fired: u64,
    pub f_out: u64,
    pub n_in: u64,
    pub f_in: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CascadeResult {
    pub n: usize,
    /// Vertices fired by the external stimulus.
    pub seeded: u64,
    /// Final fired count `F(T_f)`.
    pub fired_final: u64,
    pub phi: f64,
    /// Edges consumed (sequential) or rounds with new firings (synchronous).
    pub stop_time: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trajectory: Option<Vec<TrajectorySample>>,
}

/// Final fired fraction `F(T_f) / n`.
pub fn phi_hat(result: &CascadeResult, n: usize) -> f64 {
    if n == 0 {
        0.0
    } else {
        result.fired_final as f64 / n as f64
    }
}

/// Default trajectory sampling stride: `ceil(m / 1000)`, at least 1.
pub fn default_stride(m: u64) -> u64 {
    m.div_ceil(1000).max(1)
}

/// Writes samples as CSV with header `t,F,F_out,N_in,F_in`.
pub fn write_trajectory_csv<W: std::io::Write>(
    samples: &[TrajectorySample],
    mut w: W,
) -> std::io::Result<()> {
    writeln!(w, "t,F,F_out,N_in,F_in")?;
    for s in samples {
        writeln!(w, "{},{},{},{},{}", s.t, s.fired, s.f_out, s.n_in, s.f_in)?;
    }
    Ok(())
}
