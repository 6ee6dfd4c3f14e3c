//! Joint in/out-degree laws and degree-sequence sampling.

use std::collections::BTreeMap;

use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on the normalization of probability masses.
pub const MASS_TOL: f64 = 1e-12;
/// Tolerance on in-mean versus out-mean.
pub const BALANCE_TOL: f64 = 1e-9;

/// A finitely supported law on nonnegative integer degrees.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteLaw {
    masses: Vec<(u32, f64)>,
}

impl DiscreteLaw {
    /// Builds a law from `(degree, mass)` pairs. Masses must be finite,
    /// nonnegative and sum to one within `1e-9`; they are renormalized
    /// exactly afterwards. Zero masses are dropped and repeated degrees merged.
    pub fn from_masses(masses: impl IntoIterator<Item = (u32, f64)>) -> Result<Self> {
        let mut merged: BTreeMap<u32, f64> = BTreeMap::new();
        for (k, p) in masses {
            if !p.is_finite() {
                return Err(Error::NonFinite { name: "mass", value: p });
            }
            if p < 0.0 {
                return Err(Error::InvalidLaw(format!("negative mass {p} at degree {k}")));
            }
            *merged.entry(k).or_insert(0.0) += p;
        }
        let total: f64 = merged.values().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidLaw(format!("masses sum to {total}, expected 1")));
        }
        Ok(Self::normalized(merged.into_iter().collect()))
    }

    fn normalized(raw: Vec<(u32, f64)>) -> Self {
        let total: f64 = raw.iter().map(|&(_, p)| p).sum();
        let masses = raw
            .into_iter()
            .filter(|&(_, p)| p > 0.0)
            .map(|(k, p)| (k, p / total))
            .collect();
        Self { masses }
    }

    pub fn point_mass(degree: u32) -> Self {
        Self { masses: vec![(degree, 1.0)] }
    }

    /// Discretized Gaussian on `{0, ..., support_max}`, renormalized.
    pub fn gaussian(mean: f64, sd: f64, support_max: u32) -> Result<Self> {
        make_gaussian_in_degree(mean, sd, support_max)
    }

    /// Poisson law truncated to `{0, ..., support_max}` and renormalized.
    pub fn poisson(mean: f64, support_max: u32) -> Result<Self> {
        if !mean.is_finite() {
            return Err(Error::NonFinite { name: "mean", value: mean });
        }
        if mean <= 0.0 {
            return Err(Error::InvalidLaw(format!("poisson mean must be positive, got {mean}")));
        }
        let mut raw = Vec::with_capacity(support_max as usize + 1);
        let mut p = (-mean).exp();
        for k in 0..=support_max {
            if k > 0 {
                p *= mean / k as f64;
            }
            raw.push((k, p));
        }
        Ok(Self::normalized(raw))
    }

    pub fn masses(&self) -> &[(u32, f64)] {
        &self.masses
    }

    pub fn mean(&self) -> f64 {
        self.masses.iter().map(|&(k, p)| k as f64 * p).sum()
    }

    pub fn mass_at(&self, degree: u32) -> f64 {
        self.masses
            .iter()
            .find(|&&(k, _)| k == degree)
            .map_or(0.0, |&(_, p)| p)
    }

    /// Degree with the largest mass (smallest degree on ties).
    pub fn mode(&self) -> u32 {
        let mut best = self.masses[0];
        for &(k, p) in &self.masses[1..] {
            if p > best.1 {
                best = (k, p);
            }
        }
        best.0
    }
}

/// Discretized Gaussian in-degree law: masses proportional to
/// `exp(-(k - mean)^2 / (2 sd^2))` on `{0, ..., support_max}`.
pub fn make_gaussian_in_degree(mean: f64, sd: f64, support_max: u32) -> Result<DiscreteLaw> {
    if !mean.is_finite() {
        return Err(Error::NonFinite { name: "mean", value: mean });
    }
    if !sd.is_finite() {
        return Err(Error::NonFinite { name: "sd", value: sd });
    }
    if sd <= 0.0 {
        return Err(Error::InvalidLaw(format!("gaussian sd must be positive, got {sd}")));
    }
    if (support_max as f64) < mean {
        return Err(Error::InvalidLaw(format!(
            "support_max {support_max} is below the mean {mean}"
        )));
    }
    let raw: Vec<(u32, f64)> = (0..=support_max)
        .map(|k| {
            let z = k as f64 - mean;
            (k, (-(z * z) / (2.0 * sd * sd)).exp())
        })
        .collect();
    if raw.iter().all(|&(_, p)| p == 0.0) {
        return Err(Error::InvalidLaw("gaussian has no mass on the support".into()));
    }
    Ok(DiscreteLaw::normalized(raw))
}

/// Default truncation point `ceil(mean + 6 sd)`.
pub fn default_gaussian_support(mean: f64, sd: f64) -> u32 {
    (mean + 6.0 * sd).ceil().max(0.0) as u32
}

/// One support point of a joint law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DegreeMass {
    pub in_degree: u32,
    pub out_degree: u32,
    pub p: f64,
}

/// Marginal mass and out-degree mass of all support points sharing an
/// in-degree. Sums that weight by a function of the in-degree only run over
/// these groups.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InDegreeGroup {
    pub in_degree: u32,
    /// `P(D_in = j)`
    pub mass: f64,
    /// `E[D_out 1(D_in = j)]`
    pub out_mass: f64,
}

/// The law `P(j, k)` of `(D_in, D_out)`. Immutable once built.
#[derive(Debug, Clone)]
pub struct JointDegreeDistribution {
    support: Vec<DegreeMass>,
    lambda: f64,
    groups: Vec<InDegreeGroup>,
    sampler: WeightedIndex<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub lambda: f64,
    /// `E[D_out 1(D_in < omega)]`
    pub out_mass_below: f64,
}

impl JointDegreeDistribution {
    /// Builds a joint law from explicit `(j, k, p)` triples.
    pub fn from_table(entries: impl IntoIterator<Item = (u32, u32, f64)>) -> Result<Self> {
        let mut merged: BTreeMap<(u32, u32), f64> = BTreeMap::new();
        for (j, k, p) in entries {
            if !p.is_finite() {
                return Err(Error::NonFinite { name: "mass", value: p });
            }
            if p < 0.0 {
                return Err(Error::InvalidLaw(format!("negative mass {p} at ({j}, {k})")));
            }
            *merged.entry((j, k)).or_insert(0.0) += p;
        }
        let total: f64 = merged.values().sum();
        if merged.is_empty() || (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidLaw(format!("masses sum to {total}, expected 1")));
        }
        let support = merged
            .into_iter()
            .filter(|&(_, p)| p > 0.0)
            .map(|((j, k), p)| DegreeMass { in_degree: j, out_degree: k, p: p / total })
            .collect();
        Self::from_support(support)
    }

    /// Product law `P(j, k) = p_j q_k`.
    pub fn product(in_law: &DiscreteLaw, out_law: &DiscreteLaw) -> Result<Self> {
        make_product_distribution(in_law, out_law)
    }

    /// Every vertex has in-degree `j` and out-degree `k`; balance needs `j == k`.
    pub fn point_mass(in_degree: u32, out_degree: u32) -> Result<Self> {
        Self::from_support(vec![DegreeMass { in_degree, out_degree, p: 1.0 }])
    }

    fn from_support(support: Vec<DegreeMass>) -> Result<Self> {
        let in_mean: f64 = support.iter().map(|e| e.in_degree as f64 * e.p).sum();
        let out_mean: f64 = support.iter().map(|e| e.out_degree as f64 * e.p).sum();
        if (in_mean - out_mean).abs() > BALANCE_TOL {
            return Err(Error::BalanceViolation { in_mean, out_mean });
        }
        if in_mean <= 0.0 {
            return Err(Error::InvalidLaw("mean degree must be positive".into()));
        }

        let mut by_in: BTreeMap<u32, (f64, f64)> = BTreeMap::new();
        for e in &support {
            let g = by_in.entry(e.in_degree).or_insert((0.0, 0.0));
            g.0 += e.p;
            g.1 += e.out_degree as f64 * e.p;
        }
        let groups = by_in
            .into_iter()
            .map(|(in_degree, (mass, out_mass))| InDegreeGroup { in_degree, mass, out_mass })
            .collect();
        let sampler = WeightedIndex::new(support.iter().map(|e| e.p))
            .map_err(|e| Error::InvalidLaw(e.to_string()))?;
        Ok(Self { support, lambda: in_mean, groups, sampler })
    }

    pub fn support(&self) -> &[DegreeMass] {
        &self.support
    }

    /// Mean degree `lambda = E[D_in] = E[D_out]`.
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn in_degree_groups(&self) -> &[InDegreeGroup] {
        &self.groups
    }

    pub fn max_in_degree(&self) -> u32 {
        self.groups.last().map_or(0, |g| g.in_degree)
    }

    pub fn moments(&self, omega: u32) -> Moments {
        let out_mass_below = self
            .groups
            .iter()
            .filter(|g| g.in_degree < omega)
            .map(|g| g.out_mass)
            .sum();
        Moments { lambda: self.lambda, out_mass_below }
    }

    /// `sum (j - k) P(j, k)`; zero up to rounding for every valid law.
    pub fn imbalance(&self) -> f64 {
        self.support
            .iter()
            .map(|e| (e.in_degree as f64 - e.out_degree as f64) * e.p)
            .sum()
    }

    pub fn sample_pair<R: Rng + ?Sized>(&self, rng: &mut R) -> (u32, u32) {
        let e = &self.support[self.sampler.sample(rng)];
        (e.in_degree, e.out_degree)
    }
}

pub fn make_product_distribution(
    in_law: &DiscreteLaw,
    out_law: &DiscreteLaw,
) -> Result<JointDegreeDistribution> {
    let (in_mean, out_mean) = (in_law.mean(), out_law.mean());
    if (in_mean - out_mean).abs() > BALANCE_TOL {
        return Err(Error::BalanceViolation { in_mean, out_mean });
    }
    let support = in_law
        .masses()
        .iter()
        .flat_map(|&(j, pj)| {
            out_law
                .masses()
                .iter()
                .map(move |&(k, qk)| DegreeMass { in_degree: j, out_degree: k, p: pj * qk })
        })
        .filter(|e| e.p > 0.0)
        .collect();
    JointDegreeDistribution::from_support(support)
}

/// Per-vertex `(in-degree, out-degree)` pairs with equal stub totals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeSequence {
    pairs: Vec<(u32, u32)>,
    m: u64,
}

impl DegreeSequence {
    pub fn new(pairs: Vec<(u32, u32)>) -> Result<Self> {
        let in_total: u64 = pairs.iter().map(|&(d, _)| d as u64).sum();
        let out_total: u64 = pairs.iter().map(|&(_, d)| d as u64).sum();
        if in_total != out_total {
            return Err(Error::UnbalancedSequence { in_total, out_total });
        }
        Ok(Self { pairs, m: in_total })
    }

    pub fn pairs(&self) -> &[(u32, u32)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn in_degree(&self, v: usize) -> u32 {
        self.pairs[v].0
    }

    pub fn out_degree(&self, v: usize) -> u32 {
        self.pairs[v].1
    }

    /// Total stub count `m`.
    pub fn total_stubs(&self) -> u64 {
        self.m
    }

    /// True when there are no edges at all, so any cascade is trivial.
    pub fn is_trivial(&self) -> bool {
        self.m == 0
    }

    /// Empirical mean degree `m / n`.
    pub fn mean_degree(&self) -> f64 {
        self.m as f64 / self.pairs.len() as f64
    }
}

/// Equalizes in- and out-stub totals by incrementing the deficient side of
/// uniformly chosen vertices, one stub at a time. Returns the initial deficit.
pub fn balance_stubs<R: Rng + ?Sized>(pairs: &mut [(u32, u32)], rng: &mut R) -> u64 {
    if pairs.is_empty() {
        return 0;
    }
    let in_total: u64 = pairs.iter().map(|&(d, _)| d as u64).sum();
    let out_total: u64 = pairs.iter().map(|&(_, d)| d as u64).sum();
    let deficit = in_total.abs_diff(out_total);
    let n = pairs.len();
    for _ in 0..deficit {
        let v = rng.gen_range(0..n);
        if in_total < out_total {
            pairs[v].0 += 1;
        } else {
            pairs[v].1 += 1;
        }
    }
    deficit
}

/// Draws `n` iid degree pairs from `dist`, then balances the stub totals.
pub fn sample_degree_sequence<R: Rng + ?Sized>(
    dist: &JointDegreeDistribution,
    n: usize,
    rng: &mut R,
) -> Result<DegreeSequence> {
    if n == 0 {
        return Err(Error::Config("vertex count must be at least 1".into()));
    }
    let mut pairs: Vec<(u32, u32)> = (0..n).map(|_| dist.sample_pair(rng)).collect();
    balance_stubs(&mut pairs, rng);
    DegreeSequence::new(pairs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistKind {
    Gaussian,
    Poisson,
    Regular,
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutDegreeMode {
    /// Out-degree drawn from the in-degree law, independently.
    #[default]
    SameIndependent,
    /// Out-degree given by `out_table` (parametric kinds) or by the joint
    /// `entries` (kind `table`).
    Table,
}

/// JSON description of a degree law.
///
/// ```json
/// {"type": "gaussian", "mean": 50, "sd": 15}
/// {"type": "poisson", "mean": 5, "support_max": 40}
/// {"type": "regular", "degree": 3}
/// {"type": "table", "entries": [[2, 1, 0.5], [0, 1, 0.5]], "out_degree": "table"}
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistConfig {
    #[serde(rename = "type")]
    pub kind: DistKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sd: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub support_max: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub entries: Option<Vec<(u32, u32, f64)>>,
    #[serde(default)]
    pub out_degree: OutDegreeMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out_table: Option<Vec<(u32, f64)>>,
}

impl DistConfig {
    pub fn gaussian(mean: f64, sd: f64) -> Self {
        Self { mean: Some(mean), sd: Some(sd), ..Self::empty(DistKind::Gaussian) }
    }

    pub fn poisson(mean: f64, support_max: u32) -> Self {
        Self {
            mean: Some(mean),
            support_max: Some(support_max),
            ..Self::empty(DistKind::Poisson)
        }
    }

    pub fn regular(degree: u32) -> Self {
        Self { degree: Some(degree), ..Self::empty(DistKind::Regular) }
    }

    pub fn table(entries: Vec<(u32, u32, f64)>) -> Self {
        Self {
            entries: Some(entries),
            out_degree: OutDegreeMode::Table,
            ..Self::empty(DistKind::Table)
        }
    }

    fn empty(kind: DistKind) -> Self {
        Self {
            kind,
            mean: None,
            sd: None,
            support_max: None,
            degree: None,
            entries: None,
            out_degree: OutDegreeMode::SameIndependent,
            out_table: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("degree law: {e}")))
    }

    pub fn build(&self) -> Result<JointDegreeDistribution> {
        let stray = |field: &str, present: bool| -> Result<()> {
            if present {
                Err(Error::Config(format!("field `{field}` does not apply to {:?} laws", self.kind)))
            } else {
                Ok(())
            }
        };
        let need = |field: &str, v: Option<f64>| -> Result<f64> {
            v.ok_or_else(|| Error::Config(format!("{:?} law requires `{field}`", self.kind)))
        };

        let in_law = match self.kind {
            DistKind::Table => {
                stray("mean", self.mean.is_some())?;
                stray("sd", self.sd.is_some())?;
                stray("support_max", self.support_max.is_some())?;
                stray("degree", self.degree.is_some())?;
                stray("out_table", self.out_table.is_some())?;
                if self.out_degree != OutDegreeMode::Table {
                    return Err(Error::Config(
                        "a joint table fixes the out-degree; use \"out_degree\": \"table\"".into(),
                    ));
                }
                let entries = self
                    .entries
                    .clone()
                    .ok_or_else(|| Error::Config("table law requires `entries`".into()))?;
                return JointDegreeDistribution::from_table(entries);
            }
            DistKind::Gaussian => {
                stray("degree", self.degree.is_some())?;
                stray("entries", self.entries.is_some())?;
                let mean = need("mean", self.mean)?;
                let sd = need("sd", self.sd)?;
                let support_max = self
                    .support_max
                    .unwrap_or_else(|| default_gaussian_support(mean, sd));
                DiscreteLaw::gaussian(mean, sd, support_max)?
            }
            DistKind::Poisson => {
                stray("sd", self.sd.is_some())?;
                stray("degree", self.degree.is_some())?;
                stray("entries", self.entries.is_some())?;
                let mean = need("mean", self.mean)?;
                let support_max = self
                    .support_max
                    .unwrap_or_else(|| (mean + 12.0 * mean.sqrt() + 10.0).ceil() as u32);
                DiscreteLaw::poisson(mean, support_max)?
            }
            DistKind::Regular => {
                stray("mean", self.mean.is_some())?;
                stray("sd", self.sd.is_some())?;
                stray("support_max", self.support_max.is_some())?;
                stray("entries", self.entries.is_some())?;
                let d = self
                    .degree
                    .ok_or_else(|| Error::Config("regular law requires `degree`".into()))?;
                DiscreteLaw::point_mass(d)
            }
        };

        let out_law = match self.out_degree {
            OutDegreeMode::SameIndependent => {
                stray("out_table", self.out_table.is_some())?;
                in_law.clone()
            }
            OutDegreeMode::Table => {
                let table = self.out_table.clone().ok_or_else(|| {
                    Error::Config("\"out_degree\": \"table\" requires `out_table`".into())
                })?;
                DiscreteLaw::from_masses(table)?
            }
        };
        make_product_distribution(&in_law, &out_law)
    }
}
