//! A coarse (alpha, omega) sweep printed as a table of phi_mean with the
//! predicted value, plus the located critical points.
//!
//! cargo run --release --example phase_sweep

use bootperc::degree_model::DistConfig;
use bootperc::experiment::{check_sweep, linear_grid, run_sweep, Engine, ExperimentPlan};

fn main() -> bootperc::Result<()> {
    let plan = ExperimentPlan {
        dist: DistConfig::gaussian(50.0, 15.0),
        alpha_grid: linear_grid(0.0, 0.3, 0.05)?,
        omega_grid: vec![5, 10, 15, 20, 25, 30, 35],
        n: 5_000,
        reps: 4,
        master_seed: 2024,
        engine: Engine::Synchronous,
        record_trajectories: false,
    };
    let cells = run_sweep(&plan)?;
    print!("omega\\alpha");
    for a in &plan.alpha_grid {
        print!("{a:>14.2}");
    }
    println!();
    for row in cells.chunks(plan.alpha_grid.len()) {
        print!("{:>11}", row[0].omega);
        for c in row {
            print!("   {:.3}/{:.3}", c.phi_mean, c.phi_theory);
        }
        println!();
    }
    let check = check_sweep(&plan, &cells)?;
    for p in &check.critical {
        println!("omega {:>2}: jump {:.3} at alpha_c {:.4}", p.omega, p.jump, p.alpha_c);
    }
    println!("max gap away from the jumps {:.4}, {} over tolerance", check.max_gap, check.violations.len());
    Ok(())
}
