//! Fixed-point prediction of the final fired fraction and the closed-form
//! fluid-limit trajectory.

mod binomial;
mod fixed_point;
mod trajectory;

pub use binomial::{binom_pmf, binom_tail_at_least, binom_tail_below, LINEAR_MAX_TRIALS};
pub use fixed_point::{
    critical_alpha, f_alpha, find_y_star, fired_fraction_at, predicted_phi, Branch, Diagnostics,
    RootSearch, TheoryOutcome,
};
pub use trajectory::{class_tables, ode_trajectory, trajectory_at_y, ClassPoint, TrajectoryPoint};
