//! One cascade on a sampled graph, with the sequential trajectory next to
//! the closed-form limit.
//!
//! cargo run --release --example simulate_cascade

use bootperc::cascade::{run_sequential, seed_initial, CascadeParams, PartnerSource, SequentialOptions};
use bootperc::degree_model::{sample_degree_sequence, DistConfig};
use bootperc::graph::build_matching;
use bootperc::rng::stream_from_seed;
use bootperc::theory::{ode_trajectory, predicted_phi};

fn main() -> bootperc::Result<()> {
    let dist = DistConfig::poisson(5.0, 40).build()?;
    let params = CascadeParams::new(2, 0.2)?;
    let n = 50_000;
    let mut rng = stream_from_seed(42);

    let seq = sample_degree_sequence(&dist, n, &mut rng)?;
    let m = build_matching(&seq, &mut rng);
    let mut state = seed_initial(&seq, &params, &mut rng);
    let opts = SequentialOptions { trajectory_stride: Some(seq.total_stubs() / 10), ..Default::default() };
    let r = run_sequential(&mut state, PartnerSource::Replay(&m), opts, &mut rng)?;

    println!("n = {n}, m = {}, seeded {}, fired {}", seq.total_stubs(), r.seeded, r.fired_final);
    println!("phi simulated {:.5}, predicted {:.5}", r.phi, predicted_phi(&dist, &params)?);
    println!("{:>8} {:>9} {:>9} {:>9} {:>9}", "t/n", "F/n", "f", "F_out/n", "f_out");
    let nf = n as f64;
    for s in r.trajectory.unwrap_or_default() {
        let tau = s.t as f64 / nf;
        if tau >= dist.lambda() {
            break;
        }
        let pt = ode_trajectory(tau, &dist, &params)?;
        println!(
            "{tau:>8.4} {:>9.5} {:>9.5} {:>9.5} {:>9.5}",
            s.fired as f64 / nf,
            pt.f_total_vertices,
            s.f_out as f64 / nf,
            pt.f_out
        );
    }
    Ok(())
}
