use std::collections::HashMap;

use rand::Rng;

use super::{CascadeParams, CascadeResult, TrajectorySample};
use crate::degree_model::DegreeSequence;
use crate::error::{Error, Result};

/// Distinct `(in-degree, out-degree)` classes present in a sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeClasses {
    keys: Vec<(u32, u32)>,
    of_vertex: Vec<u32>,
}

impl DegreeClasses {
    pub fn from_sequence(seq: &DegreeSequence) -> Self {
        let mut index: HashMap<(u32, u32), u32> = HashMap::new();
        let mut keys = Vec::new();
        let of_vertex = seq
            .pairs()
            .iter()
            .map(|&pair| {
                *index.entry(pair).or_insert_with(|| {
                    keys.push(pair);
                    keys.len() as u32 - 1
                })
            })
            .collect();
        Self { keys, of_vertex }
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    /// `(j, k)` of class `c`.
    pub fn key(&self, c: usize) -> (u32, u32) {
        self.keys[c]
    }

    pub fn class_of(&self, v: usize) -> usize {
        self.of_vertex[v] as usize
    }
}

/// Fired flags plus the counters of the sequential process.
///
/// `n_table[c * omega + i]` is `N_i^{j,k}` for class `c = (j, k)`: the number
/// of non-fired vertices of that class with `i` revealed in-edges from fired
/// sources. With `omega = 0` the table is empty; the engines fire every
/// vertex before the first step.
#[derive(Debug, Clone)]
pub struct CascadeState {
    omega: u32,
    degrees: Vec<(u32, u32)>,
    classes: DegreeClasses,
    fired: Vec<bool>,
    received: Vec<u32>,
    n_table: Vec<u64>,
    f_table: Vec<u64>,
    fired_count: u64,
    seeded: u64,
    n_in: u64,
    f_in: u64,
    f_out: u64,
    t: u64,
    m: u64,
}

/// Fires each vertex independently with probability `alpha`.
pub fn seed_initial<R: Rng + ?Sized>(
    seq: &DegreeSequence,
    params: &CascadeParams,
    rng: &mut R,
) -> CascadeState {
    let seeds: Vec<bool> = (0..seq.len()).map(|_| rng.gen_bool(params.alpha)).collect();
    CascadeState::with_seeds(seq, params.omega, &seeds)
}

impl CascadeState {
    /// State at `t = 0` with an explicit seed set.
    pub fn with_seeds(seq: &DegreeSequence, omega: u32, seeds: &[bool]) -> Self {
        assert_eq!(seeds.len(), seq.len(), "one seed flag per vertex");
        let classes = DegreeClasses::from_sequence(seq);
        let w = omega as usize;
        let mut state = Self {
            omega,
            degrees: seq.pairs().to_vec(),
            n_table: vec![0; classes.len() * w],
            f_table: vec![0; classes.len()],
            classes,
            fired: vec![false; seq.len()],
            received: vec![0; seq.len()],
            fired_count: 0,
            seeded: 0,
            n_in: seq.total_stubs(),
            f_in: 0,
            f_out: 0,
            t: 0,
            m: seq.total_stubs(),
        };
        if w > 0 {
            for v in 0..seq.len() {
                state.n_table[state.classes.class_of(v) * w] += 1;
            }
        }
        for (v, &s) in seeds.iter().enumerate() {
            if s {
                state.promote(v);
            }
        }
        state.seeded = state.fired_count;
        state
    }

    pub fn omega(&self) -> u32 {
        self.omega
    }

    pub fn vertex_count(&self) -> usize {
        self.fired.len()
    }

    pub fn total_stubs(&self) -> u64 {
        self.m
    }

    pub fn fired(&self) -> &[bool] {
        &self.fired
    }

    pub fn is_fired(&self, v: usize) -> bool {
        self.fired[v]
    }

    pub fn degree(&self, v: usize) -> (u32, u32) {
        self.degrees[v]
    }

    pub fn classes(&self) -> &DegreeClasses {
        &self.classes
    }

    /// `N_i^{j,k}` for class `c`; zero for `i >= omega`.
    pub fn n_count(&self, c: usize, i: u32) -> u64 {
        if i >= self.omega {
            0
        } else {
            self.n_table[c * self.omega as usize + i as usize]
        }
    }

    /// `F^{j,k}` for class `c`.
    pub fn f_count(&self, c: usize) -> u64 {
        self.f_table[c]
    }

    /// `F(t)`
    pub fn fired_count(&self) -> u64 {
        self.fired_count
    }

    pub fn seeded_count(&self) -> u64 {
        self.seeded
    }

    pub fn n_in(&self) -> u64 {
        self.n_in
    }

    pub fn f_in(&self) -> u64 {
        self.f_in
    }

    pub fn f_out(&self) -> u64 {
        self.f_out
    }

    /// Steps elapsed.
    pub fn steps(&self) -> u64 {
        self.t
    }

    pub(crate) fn sample(&self) -> TrajectorySample {
        TrajectorySample {
            t: self.t,
            fired: self.fired_count,
            f_out: self.f_out,
            n_in: self.n_in,
            f_in: self.f_in,
        }
    }

    pub(crate) fn result(&self, stop_time: u64, trajectory: Option<Vec<TrajectorySample>>) -> CascadeResult {
        let n = self.vertex_count();
        CascadeResult {
            n,
            seeded: self.seeded,
            fired_final: self.fired_count,
            phi: if n == 0 { 0.0 } else { self.fired_count as f64 / n as f64 },
            stop_time,
            trajectory,
        }
    }

    /// Fires a non-fired vertex outside the reveal process (external seed,
    /// zero threshold, or a synchronous round). Its unrevealed in-stubs move
    /// from `N_in` to `F_in` and its out-stubs join `F_out`.
    pub(crate) fn promote(&mut self, v: usize) {
        debug_assert!(!self.fired[v]);
        let c = self.classes.class_of(v);
        let (j, k) = self.degrees[v];
        let i = self.received[v];
        if self.omega > 0 {
            self.n_table[c * self.omega as usize + i as usize] -= 1;
        }
        let hidden = (j - i) as u64;
        self.n_in -= hidden;
        self.f_in += hidden;
        self.mark_fired(v, c, k);
    }

    fn mark_fired(&mut self, v: usize, c: usize, k: u32) {
        self.fired[v] = true;
        self.f_table[c] += 1;
        self.fired_count += 1;
        self.f_out += k as u64;
    }

    /// Fires every vertex when `omega == 0`. Returns how many fired.
    pub(crate) fn fire_zero_threshold(&mut self) -> u64 {
        if self.omega > 0 {
            return 0;
        }
        let before = self.fired_count;
        for v in 0..self.vertex_count() {
            if !self.fired[v] {
                self.promote(v);
            }
        }
        self.fired_count - before
    }

    /// One step of the sequential process: a fired out-stub has been paired
    /// with an in-stub of `w`. Returns true if `w` fires now.
    pub(crate) fn consume_edge_to(&mut self, w: usize) -> bool {
        self.t += 1;
        self.f_out -= 1;
        if self.fired[w] {
            self.f_in -= 1;
            return false;
        }
        self.n_in -= 1;
        let c = self.classes.class_of(w);
        let base = c * self.omega as usize;
        let i = self.received[w];
        self.received[w] = i + 1;
        self.n_table[base + i as usize] -= 1;
        if i + 1 < self.omega {
            self.n_table[base + i as usize + 1] += 1;
            false
        } else {
            let (j, k) = self.degrees[w];
            let hidden = (j - self.omega) as u64;
            self.n_in -= hidden;
            self.f_in += hidden;
            self.mark_fired(w, c, k);
            true
        }
    }

    /// Checks the stub-count identities from the class tables.
    pub fn check_identities(&self) -> Result<()> {
        let step = self.t;
        let fail = |identity: &'static str, lhs: i64, rhs: i64| {
            Err(Error::CounterIdentity { identity, step, lhs, rhs })
        };
        let w = self.omega as usize;

        let lhs = (self.f_in + self.n_in) as i64;
        let rhs = self.m as i64 - self.t as i64;
        if lhs != rhs {
            return fail("F_in + N_in = m - t", lhs, rhs);
        }

        let mut n_mass = 0i64;
        let mut out_mass = 0i64;
        let mut f_total = 0i64;
        for c in 0..self.classes.len() {
            let (j, k) = self.classes.key(c);
            for i in 0..w {
                let count = self.n_table[c * w + i] as i64;
                if i as u32 > j && count != 0 {
                    return fail("N_i^{j,k} = 0 for i > j", count, 0);
                }
                n_mass += (j as i64 - i as i64) * count;
            }
            out_mass += k as i64 * self.f_table[c] as i64;
            f_total += self.f_table[c] as i64;
        }
        if self.n_in as i64 != n_mass {
            return fail("N_in = sum (j - i) N_i^{j,k}", self.n_in as i64, n_mass);
        }
        let rhs = out_mass - self.t as i64;
        if self.f_out as i64 != rhs {
            return fail("F_out = sum k F^{j,k} - t", self.f_out as i64, rhs);
        }
        if self.fired_count as i64 != f_total {
            return fail("F = sum F^{j,k}", self.fired_count as i64, f_total);
        }
        Ok(())
    }

    /// Recounts the class tables from the per-vertex flags and compares.
    pub fn check_tables_against_vertices(&self) -> Result<()> {
        let w = self.omega as usize;
        let mut n_table = vec![0u64; self.n_table.len()];
        let mut f_table = vec![0u64; self.f_table.len()];
        for v in 0..self.vertex_count() {
            let c = self.classes.class_of(v);
            if self.fired[v] {
                f_table[c] += 1;
            } else if w > 0 {
                n_table[c * w + self.received[v] as usize] += 1;
            }
        }
        let step = self.t;
        if let Some(idx) = (0..n_table.len()).find(|&i| n_table[i] != self.n_table[i]) {
            return Err(Error::CounterIdentity {
                identity: "N_i^{j,k} matches vertex states",
                step,
                lhs: self.n_table[idx] as i64,
                rhs: n_table[idx] as i64,
            });
        }
        if let Some(c) = (0..f_table.len()).find(|&c| f_table[c] != self.f_table[c]) {
            return Err(Error::CounterIdentity {
                identity: "F^{j,k} matches vertex states",
                step,
                lhs: self.f_table[c] as i64,
                rhs: f_table[c] as i64,
            });
        }
        Ok(())
    }
}
