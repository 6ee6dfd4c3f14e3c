//! Directed configuration model as a uniform pairing of out-stubs with in-stubs.
//!
//! Stubs are numbered contiguously per vertex: vertex `v` owns in-stubs
//! `in_start[v]..in_start[v + 1]` and out-stubs `out_start[v]..out_start[v + 1]`.
//! Self-loops and parallel edges are kept.

use std::io::Write;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::degree_model::DegreeSequence;
use crate::error::{Error, Result};

/// Prefix offsets and per-stub owners for one side of the stub layout.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StubLayout {
    start: Vec<u64>,
    owner: Vec<u32>,
}

impl StubLayout {
    fn build(degrees: impl Iterator<Item = u32>, n: usize) -> Self {
        let mut start = Vec::with_capacity(n + 1);
        let mut owner = Vec::new();
        start.push(0);
        for (v, d) in degrees.enumerate() {
            owner.extend(std::iter::repeat_n(v as u32, d as usize));
            start.push(owner.len() as u64);
        }
        Self { start, owner }
    }

    pub fn in_stubs(seq: &DegreeSequence) -> Self {
        Self::build(seq.pairs().iter().map(|p| p.0), seq.len())
    }

    pub fn out_stubs(seq: &DegreeSequence) -> Self {
        Self::build(seq.pairs().iter().map(|p| p.1), seq.len())
    }

    pub fn owner(&self, stub: usize) -> usize {
        self.owner[stub] as usize
    }

    pub fn stubs_of(&self, v: usize) -> std::ops::Range<usize> {
        self.start[v] as usize..self.start[v + 1] as usize
    }

    pub fn len(&self) -> usize {
        self.owner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.owner.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StubMatching {
    in_layout: StubLayout,
    out_layout: StubLayout,
    /// Out-stub `s` is paired with in-stub `mate[s]`.
    mate: Vec<u32>,
    /// Inverse of `mate`.
    in_mate: Vec<u32>,
}

/// Uniform random configuration for `seq`, via an unbiased shuffle.
pub fn build_matching<R: Rng + ?Sized>(seq: &DegreeSequence, rng: &mut R) -> StubMatching {
    let m = seq.total_stubs() as usize;
    let mut mate: Vec<u32> = (0..m as u32).collect();
    mate.shuffle(rng);
    StubMatching::assemble(seq, mate)
}

impl StubMatching {
    fn assemble(seq: &DegreeSequence, mate: Vec<u32>) -> Self {
        let mut in_mate = vec![0u32; mate.len()];
        for (s, &t) in mate.iter().enumerate() {
            in_mate[t as usize] = s as u32;
        }
        Self {
            in_layout: StubLayout::in_stubs(seq),
            out_layout: StubLayout::out_stubs(seq),
            mate,
            in_mate,
        }
    }

    /// Builds a matching from an explicit pairing; `mate` must be a
    /// permutation of `0..m`.
    pub fn from_mate(seq: &DegreeSequence, mate: Vec<u32>) -> Result<Self> {
        let m = seq.total_stubs() as usize;
        if mate.len() != m {
            return Err(Error::MatchingMismatch(format!(
                "pairing has {} entries for {m} stubs",
                mate.len()
            )));
        }
        let mut seen = vec![false; m];
        for &t in &mate {
            let t = t as usize;
            if t >= m || std::mem::replace(&mut seen[t], true) {
                return Err(Error::MatchingMismatch("pairing is not a permutation".into()));
            }
        }
        Ok(Self::assemble(seq, mate))
    }

    /// Builds the degree sequence and matching realizing an explicit list of
    /// `(tail, head)` edges on vertices `0..n`.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<(DegreeSequence, Self)> {
        let mut pairs = vec![(0u32, 0u32); n];
        for &(a, b) in edges {
            for v in [a, b] {
                if v >= n {
                    return Err(Error::VertexOutOfRange { vertex: v, n });
                }
            }
            pairs[a].1 += 1;
            pairs[b].0 += 1;
        }
        let seq = DegreeSequence::new(pairs)?;
        let in_layout = StubLayout::in_stubs(&seq);
        let out_layout = StubLayout::out_stubs(&seq);
        let mut next_out: Vec<usize> = (0..n).map(|v| out_layout.stubs_of(v).start).collect();
        let mut next_in: Vec<usize> = (0..n).map(|v| in_layout.stubs_of(v).start).collect();
        let mut mate = vec![0u32; edges.len()];
        for &(a, b) in edges {
            mate[next_out[a]] = next_in[b] as u32;
            next_out[a] += 1;
            next_in[b] += 1;
        }
        let matching = Self::assemble(&seq, mate);
        Ok((seq, matching))
    }

    pub fn vertex_count(&self) -> usize {
        self.in_layout.start.len() - 1
    }

    /// Number of stub pairs `m`.
    pub fn edge_count(&self) -> usize {
        self.mate.len()
    }

    /// No edges at all; valid, but every cascade on it is trivial.
    pub fn is_empty(&self) -> bool {
        self.mate.is_empty()
    }

    pub fn mate(&self) -> &[u32] {
        &self.mate
    }

    pub fn in_layout(&self) -> &StubLayout {
        &self.in_layout
    }

    pub fn out_layout(&self) -> &StubLayout {
        &self.out_layout
    }

    /// Vertex owning the in-stub paired with out-stub `s`.
    #[inline]
    pub fn target_of(&self, out_stub: usize) -> usize {
        self.in_layout.owner(self.mate[out_stub] as usize)
    }

    /// Heads of the edges leaving `v`, with multiplicity.
    pub fn out_neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.out_layout.stubs_of(v).map(move |s| self.target_of(s))
    }

    /// Tails of the edges entering `v`, with multiplicity.
    pub fn in_neighbors_multiset(&self, v: usize) -> Result<Vec<usize>> {
        let n = self.vertex_count();
        if v >= n {
            return Err(Error::VertexOutOfRange { vertex: v, n });
        }
        Ok(self
            .in_layout
            .stubs_of(v)
            .map(|t| self.out_layout.owner(self.in_mate[t] as usize))
            .collect())
    }

    pub fn count_self_loops(&self) -> usize {
        (0..self.edge_count())
            .filter(|&s| self.out_layout.owner(s) == self.target_of(s))
            .count()
    }

    /// Edges as `(tail, head)` in out-stub order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.edge_count()).map(|s| (self.out_layout.owner(s), self.target_of(s)))
    }

    /// Writes the edge list as CSV with header `out_vertex,in_vertex`.
    pub fn write_edge_list<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "out_vertex,in_vertex")?;
        for (a, b) in self.edges() {
            writeln!(w, "{a},{b}")?;
        }
        Ok(())
    }

    /// `(in-degree, out-degree)` of every vertex, recomputed from the pairing.
    pub fn recount_degrees(&self) -> Vec<(u32, u32)> {
        let mut degs = vec![(0u32, 0u32); self.vertex_count()];
        for (a, b) in self.edges() {
            degs[a].1 += 1;
            degs[b].0 += 1;
        }
        degs
    }
}
