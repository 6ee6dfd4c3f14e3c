mod common;

use bootperc::cascade::CascadeParams;
use bootperc::degree_model::{DiscreteLaw, JointDegreeDistribution};
use bootperc::theory::{
    binom_tail_at_least, binom_tail_below, class_tables, critical_alpha, f_alpha, find_y_star,
    ode_trajectory, predicted_phi, Branch, RootSearch,
};
use common::{enumerate_below, gaussian_masses, pascal_below_all, Law};
use proptest::prelude::*;

fn regular3() -> JointDegreeDistribution {
    JointDegreeDistribution::point_mass(3, 3).unwrap()
}

fn poisson5() -> JointDegreeDistribution {
    let law = DiscreteLaw::poisson(5.0, 40).unwrap();
    JointDegreeDistribution::product(&law, &law).unwrap()
}

fn gaussian50() -> JointDegreeDistribution {
    let law = DiscreteLaw::gaussian(50.0, 15.0, 140).unwrap();
    JointDegreeDistribution::product(&law, &law).unwrap()
}

fn params(omega: u32, alpha: f64) -> CascadeParams {
    CascadeParams::new(omega, alpha).unwrap()
}

#[test]
fn binomial_tail_matches_enumeration_and_pascal() {
    // The eight outcomes of Bin(3, 0.4): P(0) + P(1) = 0.216 + 0.432.
    assert!((enumerate_below(3, 0.4, 2) - 0.648).abs() < 1e-15);
    assert!((binom_tail_below(3, 0.4, 2).unwrap() - 0.648).abs() < 1e-15);
    for omega in [1, 5, 30, 60] {
        for &q in &[0.01, 0.3, 0.77] {
            let pascal = pascal_below_all(140, q, omega);
            for j in (0..=140).step_by(7) {
                let lib = binom_tail_below(j, q, omega).unwrap();
                assert!((lib - pascal[j as usize]).abs() < 1e-12, "j={j} q={q} omega={omega}");
            }
        }
    }
}

#[test]
fn f_alpha_point_mass_value() {
    let v = f_alpha(0.6, &regular3(), &params(2, 0.3));
    let by_hand = 3.0 * 0.6 - 0.7 * 3.0 * enumerate_below(3, 0.4, 2);
    assert!((v - 0.4392).abs() < 1e-12);
    assert!((v - by_hand).abs() < 1e-12);
}

#[test]
fn f_alpha_agrees_with_reference_on_all_laws() {
    for dist in [regular3(), poisson5(), gaussian50()] {
        let law = Law::of(&dist);
        for omega in [1, 2, 7, 30] {
            for &alpha in &[0.0, 0.15, 0.6] {
                for i in 0..=20 {
                    let y = i as f64 / 20.0;
                    let lib = f_alpha(y, &dist, &params(omega, alpha));
                    let reference = law.f(y, alpha, omega);
                    assert!((lib - reference).abs() < 1e-10, "omega={omega} alpha={alpha} y={y}");
                }
            }
        }
    }
}

#[test]
fn y_star_point_mass_matches_fine_grid() {
    let law = Law::of(&regular3());
    let search = RootSearch::default();
    // alpha = 0.3 has no root in (0, 1]; alpha = 0.05 has a regular crossing.
    for &alpha in &[0.3, 0.05, 0.1] {
        let out = find_y_star(&regular3(), &params(2, alpha), &search).unwrap();
        let oracle = law.y_star(alpha, 2, 1e-6);
        assert!((out.y_star - oracle).abs() < 10.0 * search.root_tol, "alpha={alpha}: {} vs {oracle}", out.y_star);
        assert!((out.phi - law.phi_at(oracle, alpha, 2)).abs() < 1e-8);
    }
    let out = find_y_star(&regular3(), &params(2, 0.3), &search).unwrap();
    assert_eq!((out.y_star, out.phi, out.branch), (0.0, 1.0, Branch::FullActivation));
}

#[test]
fn y_star_poisson_matches_fine_grid() {
    let law = Law::of(&poisson5());
    let out = find_y_star(&poisson5(), &params(2, 0.2), &RootSearch::default()).unwrap();
    let oracle = law.y_star(0.2, 2, 1e-6);
    assert_eq!(out.branch, Branch::RegularCrossing);
    assert!((out.y_star - oracle).abs() < 1e-8);
    assert!((out.phi - 0.96215).abs() < 5e-5, "{}", out.phi);
    assert!((out.phi - law.phi_at(oracle, 0.2, 2)).abs() < 1e-8);
}

#[test]
fn root_search_postconditions() {
    for dist in [regular3(), poisson5(), gaussian50()] {
        for omega in [1, 2, 3, 10, 25] {
            for a in 0..=10 {
                let alpha = a as f64 * 0.03;
                let p = params(omega, alpha);
                let search = RootSearch::default();
                let out = find_y_star(&dist, &p, &search).unwrap();
                assert!((0.0..=1.0).contains(&out.phi));
                assert!(out.diagnostics.f_above >= 0.0, "{p:?} {out:?}");
                if out.branch == Branch::RegularCrossing && out.y_star < 1.0 {
                    assert!(f_alpha(out.diagnostics.bracket_low, &dist, &p) < 0.0);
                    assert!(out.diagnostics.bracket_width <= search.root_tol);
                }
                if out.branch != Branch::Tangential {
                    // f stays positive on grid points above the root.
                    for i in 0..200 {
                        let y = 1.0 - i as f64 / 200.0;
                        if y > out.y_star + 1e-6 {
                            assert!(f_alpha(y, &dist, &p) > 0.0);
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn trivial_limits_on_every_law() {
    for dist in [regular3(), poisson5(), gaussian50()] {
        assert_eq!(predicted_phi(&dist, &params(2, 1.0)).unwrap(), 1.0);
        assert_eq!(find_y_star(&dist, &params(2, 1.0), &RootSearch::default()).unwrap().branch, Branch::FullActivation);
        for omega in 1..5 {
            assert_eq!(predicted_phi(&dist, &params(omega, 0.0)).unwrap(), 0.0);
        }
        assert_eq!(predicted_phi(&dist, &params(0, 0.0)).unwrap(), 1.0);
    }
}

#[test]
fn predicted_phi_is_monotone_in_alpha() {
    for dist in [regular3(), poisson5(), gaussian50()] {
        for omega in [1, 2, 3, 12, 30] {
            let mut last = 0.0;
            for a in 0..=100 {
                let out = find_y_star(&dist, &params(omega, a as f64 / 100.0), &RootSearch::default()).unwrap();
                assert!(out.phi >= last - 1e-12, "omega={omega} alpha={}", a as f64 / 100.0);
                last = out.phi;
            }
        }
    }
}

#[test]
fn gaussian_moment_by_direct_summation() {
    let masses = gaussian_masses(50.0, 15.0, 140);
    let lambda: f64 = masses.iter().enumerate().map(|(k, p)| k as f64 * p).sum();
    let below: f64 = masses[..30].iter().sum::<f64>() * lambda;
    let m = gaussian50().moments(30);
    assert!((m.lambda - lambda).abs() < 1e-9);
    assert!((m.out_mass_below - below).abs() < 1e-12);
}

#[test]
fn gaussian_jump_matches_running_minimum_scan() {
    let dist = gaussian50();
    let law = Law::of(&dist);
    for omega in [5, 10, 20, 25] {
        let (oracle, _) = law.alpha_c_scan(omega, 1e-4).unwrap();
        let lib = critical_alpha(&dist, omega, 0.0, 0.3, 0.5, 1e-9).unwrap().unwrap();
        assert!((lib - oracle).abs() < 1e-3, "omega={omega}: {lib} vs {oracle}");
    }
    // Above omega = 27 no jump is left inside alpha <= 0.3.
    assert!(critical_alpha(&dist, 35, 0.0, 0.3, 0.5, 1e-9).unwrap().is_none());
}

#[test]
fn fixed_point_identity_along_trajectory() {
    for dist in [regular3(), poisson5(), gaussian50()] {
        let lambda = dist.lambda();
        for (omega, alpha) in [(2, 0.3), (1, 0.05), (20, 0.2)] {
            let p = params(omega, alpha);
            let top = lambda * (1.0 - 1e-6);
            for i in 0..1000 {
                let tau = top * i as f64 / 999.0;
                let pt = ode_trajectory(tau, &dist, &p).unwrap();
                let gap = (pt.f_out - f_alpha(1.0 - tau / lambda, &dist, &p)).abs();
                assert!(gap < 1e-9, "tau={tau} gap={gap}");
            }
        }
    }
}

#[test]
fn trajectory_initial_conditions_and_mass() {
    for dist in [regular3(), poisson5()] {
        let p = params(2, 0.3);
        let start = ode_trajectory(0.0, &dist, &p).unwrap();
        assert!((start.f_out - dist.lambda() * 0.3).abs() < 1e-12);
        for c in class_tables(0.0, &dist, &p).unwrap() {
            assert!((c.n[0] - 0.7 * c.mass).abs() < 1e-15);
            assert!(c.n[1..].iter().all(|&x| x == 0.0));
            assert!((c.f - 0.3 * c.mass).abs() < 1e-15);
        }
        for i in 0..50 {
            let tau = dist.lambda() * i as f64 / 50.0;
            for c in class_tables(tau, &dist, &p).unwrap() {
                assert!(c.n.iter().chain([&c.f]).all(|&x| (0.0..=1.0).contains(&x)));
                let total: f64 = c.n.iter().sum::<f64>() + c.f;
                assert!((total - c.mass).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn trajectory_point_mass_value() {
    let pt = ode_trajectory(1.2, &regular3(), &params(2, 0.3)).unwrap();
    assert!((pt.f_out - 0.4392).abs() < 1e-12);
    // At alpha = 1 every vertex has fired for all tau.
    let pt = ode_trajectory(2.5, &regular3(), &params(2, 1.0)).unwrap();
    assert_eq!(pt.f_total_vertices, 1.0);
    assert!((pt.f_total_outmass - 3.0).abs() < 1e-15);
}

proptest! {
    #[test]
    fn f_at_one_is_lambda_alpha(alpha in 0.0f64..=1.0, omega in 1u32..40, which in 0usize..3) {
        let dist = [regular3(), poisson5(), gaussian50()][which].clone();
        let v = f_alpha(1.0, &dist, &params(omega, alpha));
        prop_assert!((v - dist.lambda() * alpha).abs() < 1e-12);
    }

    #[test]
    fn tails_complement(j in 0u32..3000, p in 0.0f64..=1.0, omega in 0u32..3000) {
        let s = binom_tail_below(j, p, omega).unwrap() + binom_tail_at_least(j, p, omega).unwrap();
        prop_assert!((s - 1.0).abs() < 1e-12);
    }

    #[test]
    fn predicted_phi_covers_seeds(alpha in 0.0f64..=1.0, omega in 0u32..6) {
        if let Ok(phi) = predicted_phi(&poisson5(), &params(omega, alpha)) {
            prop_assert!(phi >= alpha - 1e-12 && phi <= 1.0);
        }
    }
}
