//! Build a small configuration-model graph and write its edge list.
//!
//! cargo run --example graph_dump > edges.csv

use bootperc::degree_model::{sample_degree_sequence, DistConfig};
use bootperc::graph::build_matching;
use bootperc::rng::stream_from_seed;

fn main() -> bootperc::Result<()> {
    let dist = DistConfig::poisson(2.0, 20).build()?;
    let mut rng = stream_from_seed(3);
    let seq = sample_degree_sequence(&dist, 20, &mut rng)?;
    let m = build_matching(&seq, &mut rng);
    eprintln!("{} vertices, {} edges, {} self-loops", m.vertex_count(), m.edge_count(), m.count_self_loops());
    m.write_edge_list(std::io::stdout().lock())?;
    Ok(())
}
