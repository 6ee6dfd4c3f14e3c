//! Replicated simulation of one cell against the prediction.
//!
//! cargo run --release --example compare_theory -- [alpha] [omega]

use bootperc::cascade::CascadeParams;
use bootperc::degree_model::DistConfig;
use bootperc::experiment::{compare, Engine};

fn main() -> bootperc::Result<()> {
    let mut args = std::env::args().skip(1);
    let alpha: f64 = args.next().map(|s| s.parse().expect("alpha")).unwrap_or(0.2);
    let omega: u32 = args.next().map(|s| s.parse().expect("omega")).unwrap_or(2);
    let dist = DistConfig::poisson(5.0, 40).build()?;
    let params = CascadeParams::new(omega, alpha)?;
    for engine in [Engine::Synchronous, Engine::SequentialOnTheFly] {
        let r = compare(&dist, &params, 50_000, 10, engine, 7)?;
        println!(
            "{engine:<17} theory {:.5} ({}), simulated {:.5} +- {:.5}, gap {:+.5}, {}",
            r.phi_theory,
            r.branch,
            r.phi_mean,
            r.phi_sd,
            r.gap,
            if r.pass { "within tolerance" } else { "outside tolerance" }
        );
    }
    Ok(())
}
