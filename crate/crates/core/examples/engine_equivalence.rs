//! The synchronous and sequential engines reach the same fired set on the
//! same matching and seeds; the on-the-fly engine agrees in distribution.
//!
//! cargo run --release --example engine_equivalence

use bootperc::cascade::{
    run_sequential, run_synchronous, seed_initial, CascadeParams, PartnerSource, SequentialOptions, StubOrder,
};
use bootperc::degree_model::{sample_degree_sequence, DistConfig};
use bootperc::graph::build_matching;
use bootperc::rng::stream;

fn main() -> bootperc::Result<()> {
    let dist = DistConfig::gaussian(8.0, 3.0).build()?;
    let params = CascadeParams::new(3, 0.1)?;
    let mut same = 0;
    let (mut replay, mut fly) = (0.0, 0.0);
    let trials = 50;
    for t in 0..trials {
        let mut rng = stream(1, &[t]);
        let seq = sample_degree_sequence(&dist, 5_000, &mut rng)?;
        let m = build_matching(&seq, &mut rng);
        let seeded = seed_initial(&seq, &params, &mut rng);

        let mut sync = seeded.clone();
        let rs = run_synchronous(&mut sync, &m)?;
        let mut seq_state = seeded.clone();
        let opts = SequentialOptions { order: StubOrder::Random, ..Default::default() };
        run_sequential(&mut seq_state, PartnerSource::Replay(&m), opts, &mut rng)?;
        same += (sync.fired() == seq_state.fired()) as u32;
        replay += rs.phi;

        let mut lazy = seeded;
        fly += run_sequential(&mut lazy, PartnerSource::OnTheFly, SequentialOptions::default(), &mut rng)?.phi;
    }
    println!("identical fired sets: {same}/{trials}");
    println!("mean phi: matching {:.4}, on-the-fly {:.4}", replay / trials as f64, fly / trials as f64);
    Ok(())
}
