//! Distance of sequential runs to the fluid limit shrinking with n.
//!
//! cargo run --release --example concentration

use bootperc::cascade::CascadeParams;
use bootperc::degree_model::DistConfig;
use bootperc::experiment::{trajectory_concentration_study, ConcentrationPlan};

fn main() -> bootperc::Result<()> {
    let dist = DistConfig::regular(3).build()?;
    let plan = ConcentrationPlan {
        params: CascadeParams::new(2, 0.3)?,
        n_list: vec![1_000, 10_000, 100_000],
        reps: 10,
        master_seed: 11,
        stride: 1,
    };
    let report = trajectory_concentration_study(&dist, &plan)?;
    println!("{:>8} {:>10} {:>10} {:>10} {:>12}", "n", "median", "q90", "max", "F_out median");
    for row in &report.rows {
        println!(
            "{:>8} {:>10.5} {:>10.5} {:>10.5} {:>12.5}",
            row.n, row.fired.median, row.fired.q90, row.fired.max, row.fired_out.median
        );
    }
    // Deviations should shrink roughly like n^(-1/2).
    for w in report.rows.windows(2) {
        println!("ratio {} -> {}: {:.2}", w[0].n, w[1].n, w[0].fired.median / w[1].fired.median);
    }
    Ok(())
}
