use std::collections::VecDeque;

use rand::Rng;

use super::{CascadeResult, CascadeState, TrajectorySample};
use crate::error::{Error, Result};
use crate::graph::{StubLayout, StubMatching};

/// Where the partner of a consumed out-stub comes from.
#[derive(Debug, Clone, Copy)]
pub enum PartnerSource<'a> {
    /// Follow a matching built in advance.
    Replay(&'a StubMatching),
    /// Draw the partner uniformly among the in-stubs not yet consumed, which
    /// reveals a uniform matching edge by edge.
    OnTheFly,
}

/// Which fired out-stub is consumed next.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StubOrder {
    #[default]
    Fifo,
    Lifo,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SequentialOptions {
    pub order: StubOrder,
    /// Verify every counter identity after each step.
    pub debug_check: bool,
    /// Record a trajectory sample every this many steps (plus the first and
    /// last step).
    pub trajectory_stride: Option<u64>,
}

struct StubPool {
    stubs: VecDeque<u32>,
    order: StubOrder,
}

impl StubPool {
    fn push_vertex(&mut self, layout: &StubLayout, v: usize) {
        self.stubs.extend(layout.stubs_of(v).map(|s| s as u32));
    }

    fn pop<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Option<usize> {
        let s = match self.order {
            StubOrder::Fifo => self.stubs.pop_front(),
            StubOrder::Lifo => self.stubs.pop_back(),
            StubOrder::Random => {
                if self.stubs.is_empty() {
                    None
                } else {
                    let idx = rng.gen_range(0..self.stubs.len());
                    self.stubs.swap_remove_back(idx)
                }
            }
        };
        s.map(|s| s as usize)
    }
}

enum Partners<'a> {
    Replay(&'a StubMatching),
    OnTheFly { free: Vec<u32>, in_layout: StubLayout },
}

impl Partners<'_> {
    fn target<R: Rng + ?Sized>(&mut self, out_stub: usize, rng: &mut R) -> usize {
        match self {
            Partners::Replay(m) => m.target_of(out_stub),
            Partners::OnTheFly { free, in_layout } => {
                let idx = rng.gen_range(0..free.len());
                let t = free.swap_remove(idx);
                in_layout.owner(t as usize)
            }
        }
    }
}

fn check_step(state: &CascadeState, opts: &SequentialOptions) -> Result<()> {
    if opts.debug_check {
        state.check_identities()?;
    }
    Ok(())
}

/// Runs the edge-consumption process until no fired out-stub is left
/// (`F_out = 0`), which happens after at most `m` steps.
///
/// Each step takes a fired out-stub, finds its partner in-stub and deletes
/// both. A fired partner changes nothing else; a non-fired partner moves up
/// one reveal level and fires on its `omega`-th reveal, adding its out-stubs
/// to the pool.
pub fn run_sequential<R: Rng + ?Sized>(
    state: &mut CascadeState,
    source: PartnerSource<'_>,
    opts: SequentialOptions,
    rng: &mut R,
) -> Result<CascadeResult> {
    if state.steps() != 0 {
        return Err(Error::Config("sequential engine needs a freshly seeded state".into()));
    }
    let owned_out;
    let (out_layout, mut partners): (&StubLayout, Partners<'_>) = match source {
        PartnerSource::Replay(m) => {
            if m.vertex_count() != state.vertex_count()
                || m.edge_count() as u64 != state.total_stubs()
                || (0..state.vertex_count()).any(|v| {
                    let (j, k) = state.degree(v);
                    m.in_layout().stubs_of(v).len() != j as usize
                        || m.out_layout().stubs_of(v).len() != k as usize
                })
            {
                return Err(Error::MatchingMismatch(
                    "matching degrees differ from the seeded sequence".into(),
                ));
            }
            (m.out_layout(), Partners::Replay(m))
        }
        PartnerSource::OnTheFly => {
            let seq = state_sequence(state)?;
            owned_out = StubLayout::out_stubs(&seq);
            let in_layout = StubLayout::in_stubs(&seq);
            let free = (0..state.total_stubs() as u32).collect();
            (&owned_out, Partners::OnTheFly { free, in_layout })
        }
    };

    state.fire_zero_threshold();

    let mut pool = StubPool { stubs: VecDeque::with_capacity(state.f_out() as usize), order: opts.order };
    for v in 0..state.vertex_count() {
        if state.is_fired(v) {
            pool.push_vertex(out_layout, v);
        }
    }

    let mut trajectory: Option<Vec<TrajectorySample>> = opts.trajectory_stride.map(|_| Vec::new());
    let stride = opts.trajectory_stride.unwrap_or(u64::MAX).max(1);
    if let Some(tr) = trajectory.as_mut() {
        tr.push(state.sample());
    }
    check_step(state, &opts)?;

    while let Some(s) = pool.pop(rng) {
        let w = partners.target(s, rng);
        if state.consume_edge_to(w) {
            pool.push_vertex(out_layout, w);
        }
        check_step(state, &opts)?;
        if let Some(tr) = trajectory.as_mut() {
            if state.steps().is_multiple_of(stride) {
                tr.push(state.sample());
            }
        }
    }
    debug_assert_eq!(state.f_out(), 0);

    if let Some(tr) = trajectory.as_mut() {
        if tr.last().map(|x| x.t) != Some(state.steps()) {
            tr.push(state.sample());
        }
    }
    if opts.debug_check {
        state.check_tables_against_vertices()?;
    }
    Ok(state.result(state.steps(), trajectory))
}

fn state_sequence(state: &CascadeState) -> Result<crate::degree_model::DegreeSequence> {
    crate::degree_model::DegreeSequence::new(
        (0..state.vertex_count()).map(|v| state.degree(v)).collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cascade::{run_synchronous, seed_initial, CascadeParams};
    use crate::degree_model::DegreeSequence;
    use crate::graph::build_matching;
    use crate::rng::stream_from_seed;

    const DEBUG: SequentialOptions = SequentialOptions {
        order: StubOrder::Fifo,
        debug_check: true,
        trajectory_stride: Some(1),
    };

    #[test]
    fn self_loop_stops_after_one_step() {
        let (seq, m) = StubMatching::from_edges(1, &[(0, 0)]).unwrap();
        let mut st = CascadeState::with_seeds(&seq, 1, &[true]);
        let r = run_sequential(&mut st, PartnerSource::Replay(&m), DEBUG, &mut stream_from_seed(0)).unwrap();
        assert_eq!(r.stop_time, 1);
        assert_eq!(r.fired_final, 1);
        let tr = r.trajectory.unwrap();
        assert_eq!(tr.len(), 2);
        assert_eq!(tr[1], TrajectorySample { t: 1, fired: 1, f_out: 0, n_in: 0, f_in: 0 });
    }

    #[test]
    fn zero_threshold_fires_everyone_first() {
        let (seq, m) = StubMatching::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let mut st = CascadeState::with_seeds(&seq, 0, &[false; 3]);
        let r = run_sequential(&mut st, PartnerSource::Replay(&m), DEBUG, &mut stream_from_seed(0)).unwrap();
        assert_eq!(r.fired_final, 3);
        assert_eq!(r.stop_time, 2);
    }

    #[test]
    fn star_matches_synchronous() {
        let edges = [(1, 0), (2, 0), (3, 0), (4, 0)];
        let (seq, m) = StubMatching::from_edges(5, &edges).unwrap();
        for omega in 1..=3 {
            let seeds = [false, true, true, false, false];
            let mut a = CascadeState::with_seeds(&seq, omega, &seeds);
            let mut b = a.clone();
            run_sequential(&mut a, PartnerSource::Replay(&m), DEBUG, &mut stream_from_seed(0)).unwrap();
            run_synchronous(&mut b, &m).unwrap();
            assert_eq!(a.fired(), b.fired(), "omega = {omega}");
        }
    }

    #[test]
    fn orders_agree_in_replay() {
        let pairs: Vec<(u32, u32)> = (0..60).map(|v| ((v % 4) as u32, ((v + 1) % 4) as u32)).collect();
        let seq = DegreeSequence::new(pairs).unwrap();
        let mut rng = stream_from_seed(5);
        let m = build_matching(&seq, &mut rng);
        let params = CascadeParams::new(2, 0.2).unwrap();
        let seeded = seed_initial(&seq, &params, &mut rng);
        let mut finals = Vec::new();
        for order in [StubOrder::Fifo, StubOrder::Lifo, StubOrder::Random] {
            let mut st = seeded.clone();
            let opts = SequentialOptions { order, ..DEBUG };
            run_sequential(&mut st, PartnerSource::Replay(&m), opts, &mut stream_from_seed(11)).unwrap();
            finals.push(st.fired().to_vec());
        }
        assert_eq!(finals[0], finals[1]);
        assert_eq!(finals[0], finals[2]);
    }

    #[test]
    fn on_the_fly_keeps_identities() {
        let pairs: Vec<(u32, u32)> = (0..200).map(|v| ((v % 5) as u32, ((v + 2) % 5) as u32)).collect();
        let seq = DegreeSequence::new(pairs).unwrap();
        let mut rng = stream_from_seed(8);
        let mut st = seed_initial(&seq, &CascadeParams::new(2, 0.15).unwrap(), &mut rng);
        let r = run_sequential(&mut st, PartnerSource::OnTheFly, DEBUG, &mut rng).unwrap();
        assert!(r.stop_time <= seq.total_stubs());
        assert!(r.fired_final >= r.seeded);
    }

    #[test]
    fn rejects_used_state() {
        let (seq, m) = StubMatching::from_edges(1, &[(0, 0)]).unwrap();
        let mut st = CascadeState::with_seeds(&seq, 1, &[true]);
        run_sequential(&mut st, PartnerSource::Replay(&m), DEBUG, &mut stream_from_seed(0)).unwrap();
        assert!(run_sequential(&mut st, PartnerSource::Replay(&m), DEBUG, &mut stream_from_seed(0)).is_err());
    }
}
