mod common;

use common::{random_field, rng, slope};
use nls_core::oracle::plane_wave_solution;
use nls_core::schemes::{
    evolve, psi_explicit, psi_implicit, step_exp_euler, step_lie, step_lowreg1, step_strang, step_symmetric,
};
use nls_core::spectral::rough_data;
use nls_core::{Complex64, Error, Field64, Grid64, OperatorSpec, Scheme, Stepper, StepperConfig64};

fn step(scheme: Scheme, u: &Field64, tau: f64) -> Field64 {
    match scheme {
        Scheme::SymmetricLowReg => step_symmetric(u, &StepperConfig64::new(scheme, tau)).unwrap().0,
        Scheme::LowReg1 => step_lowreg1(u, tau).unwrap(),
        Scheme::LieSplit => step_lie(u, tau).unwrap(),
        Scheme::StrangSplit => step_strang(u, tau).unwrap(),
        Scheme::ExpEuler => step_exp_euler(u, tau).unwrap(),
    }
}

fn taus() -> Vec<f64> {
    (4..=10).map(|j| 2f64.powi(-j)).collect()
}

#[test]
fn zero_stays_zero() {
    let grid = Grid64::periodic(1, 32).unwrap();
    let zero = Field64::zeros(&grid);
    for scheme in Scheme::ALL {
        assert_eq!(step(scheme, &zero, 0.1), zero, "{scheme}");
    }
    let (out, report) = step_symmetric(&zero, &StepperConfig64::new(Scheme::SymmetricLowReg, 0.1)).unwrap();
    assert_eq!(out, zero);
    assert_eq!(report.iterations_used, 1);
}

#[test]
fn tiny_step_is_nearly_linear() {
    let grid = Grid64::periodic(1, 128).unwrap();
    let u = rough_data(&grid, 2.0, 4, 1.0).unwrap();
    let tau = 1e-8;
    let (out, report) = step_symmetric(&u, &StepperConfig64::new(Scheme::SymmetricLowReg, tau)).unwrap();
    let free = u.apply(OperatorSpec::Semigroup(tau));
    let cubic: Vec<Complex64> = u.to_physical().iter().map(|z| z * z.norm_sqr()).collect();
    let cubic = Field64::from_physical(&grid, &cubic).unwrap();
    // the departure from the free flow is the O(τ) nonlinear kick, and nothing more
    assert!(out.distance(&free) <= tau * cubic.l2_norm() * (1.0 + 1e-6));
    let kicked = &free + &(&cubic.apply(OperatorSpec::Semigroup(tau)) * Complex64::new(0.0, -tau));
    assert!(out.distance(&kicked) <= 1e-12);
    assert!(report.iterations_used <= 2, "{} iterations", report.iterations_used);
}

#[test]
fn symmetric_step_is_reversible() {
    let grid = Grid64::periodic(1, 256).unwrap();
    for seed in 0..4 {
        let u = rough_data(&grid, 2.0, seed, 1.0).unwrap();
        for tau in [0.1, 0.01] {
            let cfg = StepperConfig64::new(Scheme::SymmetricLowReg, tau);
            let (fwd, _) = step_symmetric(&u, &cfg).unwrap();
            let (back, _) = step_symmetric(&fwd, &cfg.with_tau(-tau)).unwrap();
            assert!(back.distance(&u) <= 100.0 * cfg.fp_tol, "seed {seed} τ {tau}: {:e}", back.distance(&u));
        }
    }
}

#[test]
fn fixed_point_result_satisfies_the_scheme() {
    let grid = Grid64::dirichlet(128).unwrap();
    let u = rough_data(&grid, 2.0, 9, 1.0).unwrap();
    let tau = 0.05;
    let cfg = StepperConfig64::new(Scheme::SymmetricLowReg, tau);
    let (out, _) = step_symmetric(&u, &cfg).unwrap();
    let rhs = &(&u.apply(OperatorSpec::Semigroup(tau)) + &psi_explicit(&u, tau)) + &psi_implicit(&out, tau);
    assert!(rhs.distance(&out) <= 2.0 * cfg.fp_tol);
}

#[test]
fn fixed_point_iteration_contracts() {
    let grid = Grid64::periodic(1, 256).unwrap();
    for seed in 0..5 {
        let u = rough_data(&grid, 2.0, seed, 1.0).unwrap();
        for tau in [0.05, 0.02, 0.005] {
            let (_, report) = step_symmetric(&u, &StepperConfig64::new(Scheme::SymmetricLowReg, tau)).unwrap();
            assert!(report.iterations_used <= 20);
            for w in report.residuals.windows(2).skip(1) {
                assert!(w[1] < w[0], "residuals {:?}", report.residuals);
            }
        }
    }
}

#[test]
fn symmetric_step_keeps_h06_norm_bounded() {
    let grid = Grid64::periodic(1, 512).unwrap();
    for seed in 0..5 {
        let u = rough_data(&grid, 1.0, seed, 1.0).unwrap();
        for tau in [0.05, 0.01] {
            let (out, _) = step_symmetric(&u, &StepperConfig64::new(Scheme::SymmetricLowReg, tau)).unwrap();
            assert!(out.sobolev_norm(0.6) <= 2.0 * u.sobolev_norm(0.6));
        }
    }
}

#[test]
fn oversized_step_reports_non_convergence() {
    let grid = Grid64::periodic(1, 64).unwrap();
    let u = rough_data(&grid, 2.0, 1, 40.0).unwrap();
    let cfg = StepperConfig64 { fp_max_iter: 10, ..StepperConfig64::new(Scheme::SymmetricLowReg, 1.0) };
    match step_symmetric(&u, &cfg) {
        // the iteration either runs out of budget or overflows first
        Err(Error::NonConvergence { iterations, .. }) => assert!((1..=10).contains(&iterations)),
        other => panic!("expected non-convergence, got {other:?}"),
    }
}

#[test]
fn baselines_reject_negative_steps() {
    let grid = Grid64::periodic(1, 16).unwrap();
    for scheme in [Scheme::LieSplit, Scheme::StrangSplit, Scheme::ExpEuler] {
        assert!(Stepper::new(&grid, StepperConfig64::new(scheme, -0.1)).is_err());
    }
    let u = Field64::single_mode(&grid, &[1], Complex64::new(1.0, 0.0)).unwrap();
    assert!(step_lie(&u, -0.1).is_err());
    assert!(step_lowreg1(&u, -0.1).is_ok());
}

#[test]
fn splittings_preserve_mass() {
    let grid = Grid64::periodic(1, 256).unwrap();
    let mut r = rng(21);
    for _ in 0..10 {
        let u = random_field(&grid, None, &mut r);
        for f in [step_lie, step_strang] {
            let v = f(&u, 0.3).unwrap();
            assert!((v.l2_norm() - u.l2_norm()).abs() <= 1e-13 * u.l2_norm());
        }
    }
}

#[test]
fn explicit_maps_agree_on_constant_fields() {
    let grid = Grid64::periodic(1, 16).unwrap();
    let c = Complex64::new(0.9, -0.3);
    let u = Field64::single_mode(&grid, &[0], c).unwrap();
    let tau = 0.1;
    let expected =
        Field64::single_mode(&grid, &[0], c - Complex64::new(0.0, tau) * c.norm_sqr() * c / grid.volume()).unwrap();
    let explicit_part = &(&u + &psi_explicit(&u, tau)) + &psi_implicit(&u, tau);
    for out in [step_lowreg1(&u, tau).unwrap(), step_exp_euler(&u, tau).unwrap(), explicit_part] {
        assert!(out.distance(&expected) <= 1e-15);
    }
}

#[test]
fn explicit_increment_has_linear_limit() {
    let grid = Grid64::periodic(1, 64).unwrap();
    let v = rough_data(&grid, 3.0, 2, 1.0).unwrap();
    let cubic = v.map_modes(|_, c| c);
    let pointwise: Vec<Complex64> = cubic.to_physical().iter().map(|z| z * z.norm_sqr()).collect();
    let cubic = Field64::from_physical(&grid, &pointwise).unwrap();
    let taus = taus();
    let errs: Vec<f64> = taus
        .iter()
        .map(|&tau| {
            let limit = &cubic.apply(OperatorSpec::Semigroup(tau)) * Complex64::new(0.0, -tau / 2.0);
            psi_explicit(&v, tau).distance(&limit)
        })
        .collect();
    let p = slope(&taus, &errs);
    assert!((p - 2.0).abs() < 0.2, "slope {p}");
}

#[test]
fn one_step_plane_wave_consistency() {
    let grid = Grid64::periodic(1, 64).unwrap();
    let (k, c) = ([3i64], Complex64::new(1.5, 0.5));
    let u0 = plane_wave_solution(&k, c, 0.0, &grid).unwrap();
    let taus = taus();
    for scheme in Scheme::ALL {
        let errs: Vec<f64> = taus
            .iter()
            .map(|&tau| step(scheme, &u0, tau).distance(&plane_wave_solution(&k, c, tau, &grid).unwrap()))
            .collect();
        match scheme {
            // the linear and nonlinear subflows commute on a plane wave, so splitting is exact
            Scheme::LieSplit | Scheme::StrangSplit => assert!(errs.iter().all(|&e| e <= 1e-13), "{scheme}: {errs:?}"),
            _ => {
                let p = slope(&taus, &errs);
                let want = (scheme.classical_order() + 1) as f64;
                assert!((p - want).abs() <= 0.2, "{scheme}: slope {p}");
            }
        }
    }
}

#[test]
fn evolve_tracks_plane_wave() {
    let grid = Grid64::periodic(1, 32).unwrap();
    let (k, c) = ([1i64], Complex64::new(1.0, 0.0));
    let u0 = plane_wave_solution(&k, c, 0.0, &grid).unwrap();
    let exact = plane_wave_solution(&k, c, 1.0, &grid).unwrap();
    let tau = 0.01;
    for scheme in Scheme::ALL {
        let traj = evolve(&u0, &StepperConfig64::new(scheme, tau), 100, 10).unwrap();
        let err = traj.final_state.distance(&exact);
        assert!(err <= tau.powi(scheme.classical_order() as i32), "{scheme}: {err:e}");
        assert_eq!(traj.samples.len(), 11);
    }
}

#[test]
fn evolve_zero_steps_returns_input() {
    let grid = Grid64::dirichlet(32).unwrap();
    let u0 = rough_data(&grid, 1.0, 3, 1.0).unwrap();
    let traj = evolve(&u0, &StepperConfig64::new(Scheme::SymmetricLowReg, 0.1), 0, 1).unwrap();
    assert_eq!(traj.final_state, u0);
    assert_eq!(traj.steps, 0);
}

#[test]
fn evolve_is_reversible() {
    let grid = Grid64::periodic(1, 128).unwrap();
    let u0 = rough_data(&grid, 2.0, 8, 1.0).unwrap();
    let cfg = StepperConfig64::new(Scheme::SymmetricLowReg, 0.05);
    let n = 20;
    let fwd = evolve(&u0, &cfg, n, n).unwrap();
    let back = evolve(&fwd.final_state, &cfg.with_tau(-0.05), n, n).unwrap();
    assert!(back.final_state.distance(&u0) <= n as f64 * 100.0 * cfg.fp_tol);
}
