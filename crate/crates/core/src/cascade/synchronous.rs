use super::{CascadeResult, CascadeState};
use crate::error::{Error, Result};
use crate::graph::StubMatching;

fn check_fit(state: &CascadeState, matching: &StubMatching) -> Result<()> {
    if matching.vertex_count() != state.vertex_count()
        || matching.edge_count() as u64 != state.total_stubs()
    {
        return Err(Error::MatchingMismatch(format!(
            "matching has {} vertices / {} edges, state has {} / {}",
            matching.vertex_count(),
            matching.edge_count(),
            state.vertex_count(),
            state.total_stubs()
        )));
    }
    Ok(())
}

/// Applies synchronous rounds until no vertex changes.
///
/// Parallel edges from a fired vertex count with multiplicity. The returned
/// `stop_time` is the number of rounds that fired at least one vertex.
pub fn run_synchronous(state: &mut CascadeState, matching: &StubMatching) -> Result<CascadeResult> {
    check_fit(state, matching)?;
    let n = state.vertex_count();
    let omega = state.omega();

    let mut rounds = 0u64;
    // In-edges from fired tails seen so far, for non-fired heads only.
    let mut hits = vec![0u32; n];
    let mut frontier: Vec<usize> = (0..n).filter(|&v| state.is_fired(v)).collect();
    let mut next = Vec::new();

    if omega == 0 {
        next.extend((0..n).filter(|&v| !state.is_fired(v)));
        for &v in &next {
            state.promote(v);
        }
        if !next.is_empty() {
            rounds += 1;
        }
        return Ok(state.result(rounds, None));
    }

    loop {
        for &v in &frontier {
            for w in matching.out_neighbors(v) {
                if !state.is_fired(w) {
                    hits[w] += 1;
                    if hits[w] == omega {
                        next.push(w);
                    }
                }
            }
        }
        if next.is_empty() {
            break;
        }
        for &w in &next {
            state.promote(w);
        }
        rounds += 1;
        std::mem::swap(&mut frontier, &mut next);
        next.clear();
    }
    Ok(state.result(rounds, None))
}
