//! Reference computations shared by the integration tests. Nothing here
//! calls the library's binomial or root-finding code.

#![allow(dead_code)]

use bootperc::degree_model::JointDegreeDistribution;

/// `P(Bin(j, q) < omega)` for every `j` in `0..=jmax`, by adding one
/// Bernoulli trial at a time (Pascal's rule), truncated to `omega` cells.
pub fn pascal_below_all(jmax: u32, q: f64, omega: u32) -> Vec<f64> {
    let w = omega as usize;
    if w == 0 {
        return vec![0.0; jmax as usize + 1];
    }
    let mut dp = vec![0.0; w];
    dp[0] = 1.0;
    let mut out = Vec::with_capacity(jmax as usize + 1);
    out.push(1.0);
    for _ in 0..jmax {
        for i in (0..w).rev() {
            let stay = dp[i] * (1.0 - q);
            let up = if i > 0 { dp[i - 1] * q } else { 0.0 };
            dp[i] = stay + up;
        }
        out.push(dp.iter().sum());
    }
    out
}

/// `P(Bin(j, q) < omega)` by summing all `2^j` outcomes.
pub fn enumerate_below(j: u32, q: f64, omega: u32) -> f64 {
    (0u64..1 << j)
        .filter(|mask| mask.count_ones() < omega)
        .map(|mask| {
            let s = mask.count_ones() as i32;
            q.powi(s) * (1.0 - q).powi(j as i32 - s)
        })
        .sum()
}

/// Support triples grouped by in-degree: `(j, P(D_in = j), E[D_out 1(D_in = j)])`.
pub struct Law {
    pub lambda: f64,
    pub groups: Vec<(u32, f64, f64)>,
    pub jmax: u32,
}

impl Law {
    pub fn of(dist: &JointDegreeDistribution) -> Self {
        let mut jmax = 0;
        let mut lambda = 0.0;
        let mut by_j = std::collections::BTreeMap::<u32, (f64, f64)>::new();
        for c in dist.support() {
            jmax = jmax.max(c.in_degree);
            lambda += c.in_degree as f64 * c.p;
            let e = by_j.entry(c.in_degree).or_insert((0.0, 0.0));
            e.0 += c.p;
            e.1 += c.out_degree as f64 * c.p;
        }
        Self { lambda, groups: by_j.into_iter().map(|(j, (m, o))| (j, m, o)).collect(), jmax }
    }

    /// `E[D_out 1(Bin(D_in, 1 - y) < omega)]`
    pub fn stuck_outmass(&self, y: f64, omega: u32) -> f64 {
        let below = pascal_below_all(self.jmax, 1.0 - y, omega);
        self.groups.iter().map(|&(j, _, o)| o * below[j as usize]).sum()
    }

    pub fn f(&self, y: f64, alpha: f64, omega: u32) -> f64 {
        self.lambda * y - (1.0 - alpha) * self.stuck_outmass(y, omega)
    }

    pub fn phi_at(&self, y: f64, alpha: f64, omega: u32) -> f64 {
        let below = pascal_below_all(self.jmax, 1.0 - y, omega);
        let unfired: f64 = self.groups.iter().map(|&(j, m, _)| m * below[j as usize]).sum();
        1.0 - (1.0 - alpha) * unfired
    }

    /// Largest root of `f` in `[0, 1]`: scan down from 1 with `step`, then
    /// bisect the first sign change to `1e-13`. Returns 0 with no change.
    pub fn y_star(&self, alpha: f64, omega: u32, step: f64) -> f64 {
        let steps = (1.0 / step).round() as usize;
        let mut prev = 1.0;
        for i in 1..=steps {
            let y = 1.0 - i as f64 / steps as f64;
            if self.f(y, alpha, omega) < 0.0 {
                let (mut lo, mut hi) = (y, prev);
                while hi - lo > 1e-13 {
                    let mid = 0.5 * (lo + hi);
                    if self.f(mid, alpha, omega) < 0.0 {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                return hi;
            }
            prev = y;
        }
        0.0
    }

    /// Seed fraction of the largest jump of `y*`, read off the running
    /// minimum of `h(y) = lambda y / E[D_out 1(Bin(D_in, 1 - y) < omega)]`
    /// taken from `y = 1` downward. Since `f >= 0` exactly when
    /// `h >= 1 - alpha`, `y*` jumps where that running minimum is flat, and
    /// the longest flat stretch gives `alpha_c = 1 - (its level)`.
    /// Returns `(alpha_c, length of the stretch in y)`.
    pub fn alpha_c_scan(&self, omega: u32, step: f64) -> Option<(f64, f64)> {
        let steps = (1.0 / step).round() as usize;
        let mut running = f64::INFINITY;
        let mut best: Option<(f64, f64)> = None;
        let mut flat_start: Option<f64> = None;
        for i in 0..steps {
            let y = 1.0 - i as f64 / steps as f64;
            let g = self.stuck_outmass(y, omega);
            let h = if g > 0.0 { self.lambda * y / g } else { f64::INFINITY };
            if h < running {
                if let Some(start) = flat_start.take() {
                    let len = start - y;
                    if best.is_none_or(|(_, l)| len > l) {
                        best = Some((1.0 - running, len));
                    }
                }
                running = h;
            } else if flat_start.is_none() {
                flat_start = Some(y + step);
            }
        }
        if let Some(start) = flat_start {
            if best.is_none_or(|(_, l)| start > l) {
                best = Some((1.0 - running, start));
            }
        }
        best
    }
}

/// Discretized Gaussian masses on `0..=support_max`, normalized.
pub fn gaussian_masses(mean: f64, sd: f64, support_max: u32) -> Vec<f64> {
    let raw: Vec<f64> = (0..=support_max)
        .map(|k| (-(k as f64 - mean).powi(2) / (2.0 * sd * sd)).exp())
        .collect();
    let z: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / z).collect()
}

/// Poisson masses on `0..=support_max`, normalized.
pub fn poisson_masses(mean: f64, support_max: u32) -> Vec<f64> {
    let mut raw = vec![(-mean).exp()];
    for k in 1..=support_max {
        let prev = raw[k as usize - 1];
        raw.push(prev * mean / k as f64);
    }
    let z: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / z).collect()
}

pub fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}
