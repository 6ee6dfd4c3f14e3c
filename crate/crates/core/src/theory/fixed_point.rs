use serde::Serialize;

use super::binomial::tail_below;
use crate::cascade::CascadeParams;
use crate::degree_model::JointDegreeDistribution;
use crate::error::{Error, Result};

/// `f_alpha(y) = lambda y - (1 - alpha) E[D_out 1(Bin(D_in, 1 - y) < omega)]`.
pub fn f_alpha(y: f64, dist: &JointDegreeDistribution, params: &CascadeParams) -> f64 {
    if y >= 1.0 && params.omega >= 1 {
        // Every indicator is 1; summing the groups would only add rounding.
        return dist.lambda() * params.alpha;
    }
    let p = (1.0 - y).clamp(0.0, 1.0);
    let stuck: f64 = dist
        .in_degree_groups()
        .iter()
        .map(|g| g.out_mass * tail_below(g.in_degree, p, params.omega))
        .sum();
    dist.lambda() * y - (1.0 - params.alpha) * stuck
}

/// `1 - (1 - alpha) E[1(Bin(D_in, 1 - y) < omega)]`, the fired fraction
/// when the process stops at `y`.
pub fn fired_fraction_at(y: f64, dist: &JointDegreeDistribution, params: &CascadeParams) -> f64 {
    let p = (1.0 - y).clamp(0.0, 1.0);
    let unfired: f64 = dist
        .in_degree_groups()
        .iter()
        .map(|g| g.mass * tail_below(g.in_degree, p, params.omega))
        .sum();
    (1.0 - (1.0 - params.alpha) * unfired).clamp(0.0, 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    /// `f_alpha > 0` on `(0, 1]`: `y* = 0` and almost every vertex fires.
    FullActivation,
    /// `f_alpha` goes strictly negative just below `y*`.
    RegularCrossing,
    /// `f_alpha` touches zero without crossing; no limit is predicted.
    Tangential,
}

impl Branch {
    pub fn as_str(self) -> &'static str {
        match self {
            Branch::FullActivation => "full-activation",
            Branch::RegularCrossing => "regular-crossing",
            Branch::Tangential => "tangential",
        }
    }
}

impl std::fmt::Display for Branch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Resolution of the downward scan for the largest root.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootSearch {
    pub grid_step: f64,
    pub root_tol: f64,
    /// `|f|` below this at a grid minimum without a sign change counts as a touch.
    pub tangency_tol: f64,
}

impl Default for RootSearch {
    fn default() -> Self {
        Self { grid_step: 1e-3, root_tol: 1e-9, tangency_tol: 1e-6 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Diagnostics {
    /// `f` at the returned root.
    pub f_at_root: f64,
    /// `f(y* + 10 root_tol)`, clamped to `y <= 1`.
    pub f_above: f64,
    /// `f(y* - 10 grid_step)`, clamped to `y >= 0`.
    pub f_below: f64,
    pub bracket_low: f64,
    pub bracket_high: f64,
    pub bracket_width: f64,
    /// Smallest `f` seen on the grid over `(0, 1]` above the root.
    pub grid_min: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TheoryOutcome {
    pub alpha: f64,
    pub omega: u32,
    pub y_star: f64,
    pub phi: f64,
    pub branch: Branch,
    pub diagnostics: Diagnostics,
}

impl TheoryOutcome {
    pub fn is_reliable(&self) -> bool {
        self.branch != Branch::Tangential
    }
}

fn golden_min(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut a = hi - r * (hi - lo);
    let mut b = lo + r * (hi - lo);
    let (mut fa, mut fb) = (f(a), f(b));
    while hi - lo > tol {
        if fa < fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - r * (hi - lo);
            fa = f(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + r * (hi - lo);
            fb = f(b);
        }
    }
    0.5 * (lo + hi)
}

/// Locates the largest root `y*` of `f_alpha` in `[0, 1]` and classifies it.
///
/// The grid is scanned from `y = 1` downward, so the first sign change found
/// brackets the largest crossing; that bracket is bisected to `root_tol`.
/// A crossing is regular when `f(y* - 10 grid_step) < -tangency_tol`. A grid
/// minimum above the crossing (or anywhere in `(0, 1)` when there is no
/// crossing) with `f < tangency_tol` marks a touch point, which is then the
/// largest root and is reported as [`Branch::Tangential`].
pub fn find_y_star(
    dist: &JointDegreeDistribution,
    params: &CascadeParams,
    search: &RootSearch,
) -> Result<TheoryOutcome> {
    if !(search.grid_step > 0.0 && search.grid_step <= 0.1) {
        return Err(Error::Config(format!("grid_step {} outside (0, 0.1]", search.grid_step)));
    }
    if !(search.root_tol > 0.0 && search.tangency_tol >= 0.0) {
        return Err(Error::Config("root and tangency tolerances must be positive".into()));
    }
    let f = |y: f64| f_alpha(y, dist, params);
    let h = search.grid_step;
    let outcome = |y_star: f64, branch: Branch, lo: f64, hi: f64, grid_min: f64| TheoryOutcome {
        alpha: params.alpha,
        omega: params.omega,
        y_star,
        phi: fired_fraction_at(y_star, dist, params),
        branch,
        diagnostics: Diagnostics {
            f_at_root: f(y_star),
            f_above: f((y_star + 10.0 * search.root_tol).min(1.0)),
            f_below: f((y_star - 10.0 * h).max(0.0)),
            bracket_low: lo,
            bracket_high: hi,
            bracket_width: hi - lo,
            grid_min,
        },
    };

    let f1 = f(1.0);
    if f1 <= 0.0 {
        // Only alpha = 0 with omega >= 1: nothing is seeded and y* = 1.
        return Ok(outcome(1.0, Branch::RegularCrossing, 1.0, 1.0, f1));
    }

    let steps = (1.0 / h).ceil() as usize;
    let y_at = |i: usize| if i >= steps { 0.0 } else { 1.0 - i as f64 * h };

    // Lowest interior grid local minimum seen so far: (index, f).
    let mut touch: Option<(usize, f64)> = None;
    let mut grid_min = f64::INFINITY;
    let (mut f_prev2, mut f_prev) = (f64::NAN, f1);

    for i in 1..=steps {
        let y = y_at(i);
        let fy = f(y);
        if i >= 2
            && f_prev <= f_prev2
            && f_prev <= fy
            && f_prev < search.tangency_tol
            && touch.is_none_or(|(_, ft)| f_prev < ft)
        {
            touch = Some((i - 1, f_prev));
        }
        if fy < 0.0 {
            let (mut lo, mut hi) = (y, y_at(i - 1));
            while hi - lo > search.root_tol {
                let mid = 0.5 * (lo + hi);
                if f(mid) < 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            if let Some((ti, _)) = touch {
                let yt = golden_min(f, y_at(ti + 1), y_at(ti - 1), search.root_tol);
                return Ok(outcome(yt, Branch::Tangential, lo, hi, grid_min));
            }
            let regular = f((hi - 10.0 * h).max(0.0)) < -search.tangency_tol;
            let branch = if regular { Branch::RegularCrossing } else { Branch::Tangential };
            return Ok(outcome(hi, branch, lo, hi, grid_min));
        }
        if y > 0.0 {
            grid_min = grid_min.min(fy);
        }
        f_prev2 = f_prev;
        f_prev = fy;
    }

    if let Some((ti, _)) = touch {
        let yt = golden_min(f, y_at(ti + 1), y_at(ti - 1), search.root_tol);
        return Ok(outcome(yt, Branch::Tangential, yt, yt, grid_min));
    }
    Ok(outcome(0.0, Branch::FullActivation, 0.0, 0.0, grid_min))
}

/// Limiting fired fraction with the default root search. A tangential root
/// is reported as [`Error::TangentialRoot`].
pub fn predicted_phi(dist: &JointDegreeDistribution, params: &CascadeParams) -> Result<f64> {
    let out = find_y_star(dist, params, &RootSearch::default())?;
    match out.branch {
        Branch::Tangential => Err(Error::TangentialRoot {
            alpha: params.alpha,
            omega: params.omega,
            y_star: out.y_star,
        }),
        _ => Ok(out.phi),
    }
}

/// Locates the seed fraction where the predicted limit jumps, by bisection
/// on `alpha` between `lo` (below the jump) and `hi` (above it). Returns
/// `None` when the prediction rises by less than `min_jump` over `[lo, hi]`.
pub fn critical_alpha(
    dist: &JointDegreeDistribution,
    omega: u32,
    mut lo: f64,
    mut hi: f64,
    min_jump: f64,
    tol: f64,
) -> Result<Option<f64>> {
    let search = RootSearch::default();
    let phi = |a: f64| -> Result<f64> {
        Ok(find_y_star(dist, &CascadeParams::new(omega, a)?, &search)?.phi)
    };
    let (p_lo, p_hi) = (phi(lo)?, phi(hi)?);
    if p_hi - p_lo < min_jump {
        return Ok(None);
    }
    let mid_level = 0.5 * (p_lo + p_hi);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if phi(mid)? >= mid_level {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Some(0.5 * (lo + hi)))
}
