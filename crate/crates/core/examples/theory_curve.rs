//! Predicted final fraction as alpha varies, for one law and threshold.
//!
//! cargo run --release --example theory_curve -- [omega]

use bootperc::cascade::CascadeParams;
use bootperc::degree_model::DistConfig;
use bootperc::theory::{critical_alpha, find_y_star, RootSearch};

fn main() -> bootperc::Result<()> {
    let omega: u32 = std::env::args().nth(1).map(|s| s.parse().expect("omega")).unwrap_or(20);
    let dist = DistConfig::gaussian(50.0, 15.0).build()?;
    println!("Gaussian(50, 15), omega = {omega}, lambda = {:.4}", dist.lambda());
    println!("{:>6} {:>10} {:>10}  branch", "alpha", "y*", "phi");
    for i in 0..=30 {
        let alpha = i as f64 / 100.0;
        let out = find_y_star(&dist, &CascadeParams::new(omega, alpha)?, &RootSearch::default())?;
        println!("{alpha:>6.2} {:>10.6} {:>10.6}  {}", out.y_star, out.phi, out.branch);
    }
    match critical_alpha(&dist, omega, 0.0, 0.3, 0.5, 1e-9)? {
        Some(ac) => println!("jump at alpha_c = {ac:.6}"),
        None => println!("no jump for alpha <= 0.3"),
    }
    Ok(())
}
