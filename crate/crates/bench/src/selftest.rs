//! Numerical self-checks run by `nlsbench selftest`: oracle agreement, exact identities and
//! analytic bounds on seeded random data.

use std::fmt;

use nls_core::observables::{commutator, mass};
use nls_core::oracle::{nonlinearity_oracle, psi_explicit_oracle, psi_implicit_oracle};
use nls_core::schemes::{nonlinearity, psi_explicit, psi_implicit, step_lie, step_strang, step_symmetric};
use nls_core::spectral::rough_data;
use nls_core::{Complex64, Field64, Grid64, OperatorSpec, Scheme, StepperConfig64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// One checked property: the worst observed value against its bound.
#[derive(Clone, Debug)]
pub struct PropertyOutcome {
    pub name: &'static str,
    pub observed: f64,
    pub bound: f64,
}

impl PropertyOutcome {
    pub fn passed(&self) -> bool {
        self.observed <= self.bound
    }

    /// `bound − observed`; negative on failure.
    pub fn margin(&self) -> f64 {
        self.bound - self.observed
    }
}

impl fmt::Display for PropertyOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {:<28} observed {:.3e}  bound {:.3e}  margin {:.3e}",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.observed,
            self.bound,
            self.margin()
        )
    }
}

fn random_field(grid: &Grid64, band: Option<i64>, rng: &mut ChaCha8Rng) -> Field64 {
    Field64::from_fn(grid, |k| {
        let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        match band {
            Some(b) if k.iter().any(|x| x.abs() > b) => Complex64::new(0.0, 0.0),
            _ => c,
        }
    })
}

fn worst(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, f64::max)
}

fn grid(modes: usize) -> Grid64 {
    Grid64::periodic(1, modes).expect("valid grid")
}

fn round_trip(rng: &mut ChaCha8Rng) -> f64 {
    let grids = [grid(8), grid(64), grid(256), Grid64::dirichlet(64).unwrap(), Grid64::periodic(2, 16).unwrap()];
    worst(grids.iter().map(|g| {
        let u = random_field(g, None, rng);
        let back = Field64::from_physical(g, &u.to_physical()).unwrap();
        back.distance(&u) / u.l2_norm()
    }))
}

fn unitarity(rng: &mut ChaCha8Rng) -> f64 {
    let g = grid(128);
    worst((0..100).map(|_| {
        let u = random_field(&g, None, rng);
        let v = u.apply(OperatorSpec::Semigroup(rng.gen_range(-20.0..20.0)));
        (v.l2_norm() - u.l2_norm()).abs() / u.l2_norm()
    }))
}

fn group_law(rng: &mut ChaCha8Rng) -> f64 {
    let g = Grid64::dirichlet(64).unwrap();
    let scale = (1u64 << 30) as f64;
    worst((0..20).map(|_| {
        let u = random_field(&g, None, rng);
        let s = rng.gen_range(-(1i64 << 30)..(1i64 << 30)) as f64 / scale;
        let t = rng.gen_range(-(1i64 << 30)..(1i64 << 30)) as f64 / scale;
        let two = u.apply(OperatorSpec::Semigroup(s)).apply(OperatorSpec::Semigroup(t));
        two.distance(&u.apply(OperatorSpec::Semigroup(s + t))) / u.l2_norm()
    }))
}

/// Largest `‖(e^{itΔ}−1)/(tΔ)^γ u‖ / (2^{1−γ}‖u‖)` over 1000 samples.
fn fractional_estimate(rng: &mut ChaCha8Rng) -> f64 {
    let g = grid(64);
    worst((0..1000).map(|_| {
        let u = random_field(&g, None, rng);
        let t = rng.gen_range(1e-9..=10.0);
        let gamma = rng.gen_range(0.0..=1.0);
        let v = u.apply(OperatorSpec::FracSemigroupDiff { t, gamma });
        v.l2_norm() / (2f64.powf(1.0 - gamma) * u.l2_norm())
    }))
}

fn oracle_gap(rng: &mut ChaCha8Rng, which: usize) -> f64 {
    let g = grid(32);
    worst((0..50).map(|_| {
        let v = random_field(&g, Some(5), rng);
        let tau = rng.gen_range(1e-3..0.5);
        let gap = match which {
            0 => nonlinearity(&v).distance(&nonlinearity_oracle(&v).unwrap()),
            1 => psi_explicit(&v, tau).distance(&psi_explicit_oracle(&v, tau).unwrap()),
            _ => psi_implicit(&v, tau).distance(&psi_implicit_oracle(&v, tau).unwrap()),
        };
        gap / v.l2_norm().powi(3)
    }))
}

fn commutator_identity(rng: &mut ChaCha8Rng) -> f64 {
    let grids = [grid(128), Grid64::dirichlet(128).unwrap()];
    worst(grids.iter().flat_map(|g| {
        (0..5)
            .map(|_| {
                let v1 = random_field(g, Some(16), rng);
                let v2 = random_field(g, Some(16), rng);
                let (a, b) = commutator(&v1, &v2);
                a.distance(&b) / a.l2_norm()
            })
            .collect::<Vec<_>>()
    }))
}

/// Worst `‖φ^{−τ}(φ^τ(u)) − u‖` in units of `fp_tol`.
fn step_symmetry() -> f64 {
    let g = grid(256);
    worst((0..4).flat_map(|seed| {
        let u = rough_data(&g, 2.0, seed, 1.0).unwrap();
        [0.1, 0.01].map(|tau| {
            let cfg = StepperConfig64::new(Scheme::SymmetricLowReg, tau);
            let (fwd, _) = step_symmetric(&u, &cfg).unwrap();
            let (back, _) = step_symmetric(&fwd, &cfg.with_tau(-tau)).unwrap();
            back.distance(&u) / cfg.fp_tol
        })
    }))
}

fn mass_quadrature(rng: &mut ChaCha8Rng) -> f64 {
    let grids = [grid(64), Grid64::dirichlet(64).unwrap()];
    worst(grids.iter().map(|g| {
        let u = random_field(g, None, rng);
        let quad = (u.to_physical().iter().map(|v| v.norm_sqr()).sum::<f64>() * g.quadrature_weight()).sqrt();
        (mass(&u) - quad).abs() / quad
    }))
}

fn splitting_mass(rng: &mut ChaCha8Rng) -> f64 {
    let g = grid(256);
    worst((0..10).flat_map(|_| {
        let u = random_field(&g, None, rng);
        [step_lie(&u, 0.3).unwrap(), step_strang(&u, 0.3).unwrap()]
            .map(|v| (v.l2_norm() - u.l2_norm()).abs() / u.l2_norm())
    }))
}

/// Runs every property on fixed seeds.
pub fn run_selftest() -> Vec<PropertyOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_601);
    vec![
        PropertyOutcome { name: "transform_round_trip", observed: round_trip(&mut rng), bound: 1e-13 },
        PropertyOutcome { name: "semigroup_unitarity", observed: unitarity(&mut rng), bound: 1e-13 },
        PropertyOutcome { name: "semigroup_group_law", observed: group_law(&mut rng), bound: 1e-13 },
        PropertyOutcome {
            name: "fractional_semigroup_bound",
            observed: fractional_estimate(&mut rng),
            bound: 1.0 + 1e-14,
        },
        PropertyOutcome { name: "oracle_nonlinearity", observed: oracle_gap(&mut rng, 0), bound: 1e-12 },
        PropertyOutcome { name: "oracle_psi_explicit", observed: oracle_gap(&mut rng, 1), bound: 1e-12 },
        PropertyOutcome { name: "oracle_psi_implicit", observed: oracle_gap(&mut rng, 2), bound: 1e-12 },
        PropertyOutcome { name: "commutator_identity", observed: commutator_identity(&mut rng), bound: 1e-8 },
        PropertyOutcome { name: "symmetric_step_reversibility", observed: step_symmetry(), bound: 100.0 },
        PropertyOutcome { name: "mass_quadrature", observed: mass_quadrature(&mut rng), bound: 1e-12 },
        PropertyOutcome { name: "splitting_mass_conservation", observed: splitting_mass(&mut rng), bound: 1e-13 },
    ]
}
