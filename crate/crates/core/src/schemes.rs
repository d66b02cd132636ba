//! One-step maps for the cubic NLS and trajectory driver.
//!
//! With `f(u) = -i|u|²u`, the schemes are
//!
//! * symmetric low-regularity: `u⁺ = e^{iτΔ}u + ψ_E(u) + ψ_I(u⁺)` with
//!   `ψ_E(v) = -i(τ/2) e^{iτΔ}(v² φ₁(-iτΔ) v̄)` and `ψ_I(z) = -i(τ/2)(z² φ₁(iτΔ) z̄)`, the implicit
//!   part resolved by fixed-point iteration started from `e^{iτΔ}u`;
//! * first-order low-regularity: `u⁺ = e^{iτΔ}(u - iτ u² φ₁(-2iτΔ) ū)`;
//! * Lie and Strang splitting, using the exact nonlinear subflow `u ↦ e^{-iτ|u|²}u`;
//! * exponential Euler: `u⁺ = e^{iτΔ}u + τ φ₁(iτΔ) f(u)`.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::observables::ObservableSample;
use crate::scalar::{cis, Cplx, Real};
use crate::spectral::transform;
use crate::spectral::{Grid, OperatorSpec, SpectralField};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    SymmetricLowReg,
    LowReg1,
    LieSplit,
    StrangSplit,
    ExpEuler,
}

impl Scheme {
    pub const ALL: [Scheme; 5] =
        [Scheme::SymmetricLowReg, Scheme::LowReg1, Scheme::LieSplit, Scheme::StrangSplit, Scheme::ExpEuler];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::SymmetricLowReg => "symmetric",
            Scheme::LowReg1 => "lowreg1",
            Scheme::LieSplit => "lie",
            Scheme::StrangSplit => "strang",
            Scheme::ExpEuler => "expeuler",
        }
    }

    /// Classical convergence order on smooth solutions.
    pub fn classical_order(self) -> u32 {
        match self {
            Scheme::SymmetricLowReg | Scheme::StrangSplit => 2,
            Scheme::LowReg1 | Scheme::LieSplit | Scheme::ExpEuler => 1,
        }
    }

    /// Whether the scheme accepts negative steps (used for reversibility checks).
    pub fn allows_negative_step(self) -> bool {
        matches!(self, Scheme::SymmetricLowReg | Scheme::LowReg1)
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "symmetric" | "symmetriclowreg" | "sym" => Ok(Scheme::SymmetricLowReg),
            "lowreg1" | "lowreg" => Ok(Scheme::LowReg1),
            "lie" | "liesplit" => Ok(Scheme::LieSplit),
            "strang" | "strangsplit" => Ok(Scheme::StrangSplit),
            "expeuler" | "exponentialeuler" => Ok(Scheme::ExpEuler),
            _ => Err(Error::InvalidParameter(format!("unknown scheme '{s}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepperConfig<T: Real> {
    pub scheme: Scheme,
    pub tau: T,
    /// Relative increment at which the fixed-point iteration stops.
    pub fp_tol: T,
    pub fp_max_iter: usize,
    /// Apply the 2/3 rule to every pseudo-spectral cubic product.
    pub dealias: bool,
}

impl<T: Real> StepperConfig<T> {
    pub const DEFAULT_FP_TOL: f64 = 1e-12;
    pub const DEFAULT_FP_MAX_ITER: usize = 50;

    pub fn new(scheme: Scheme, tau: T) -> Self {
        StepperConfig {
            scheme,
            tau,
            fp_tol: T::lit(Self::DEFAULT_FP_TOL),
            fp_max_iter: Self::DEFAULT_FP_MAX_ITER,
            dealias: false,
        }
    }

    pub fn with_tau(self, tau: T) -> Self {
        StepperConfig { tau, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.tau.is_finite() || self.tau == T::zero() {
            return Err(Error::InvalidParameter(format!("time step must be finite and nonzero, got {}", self.tau)));
        }
        if self.tau < T::zero() && !self.scheme.allows_negative_step() {
            return Err(Error::InvalidParameter(format!(
                "{} requires a positive time step, got {}",
                self.scheme, self.tau
            )));
        }
        if self.fp_tol.is_nan() || self.fp_tol <= T::zero() {
            return Err(Error::InvalidParameter("fixed-point tolerance must be positive".into()));
        }
        if self.fp_max_iter == 0 {
            return Err(Error::InvalidParameter("fixed-point iteration limit must be at least 1".into()));
        }
        Ok(())
    }
}

/// Diagnostics of one step.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct StepReport<T> {
    /// Applications of the fixed-point map (0 for explicit schemes).
    pub iterations_used: usize,
    /// Last fixed-point increment `‖x_{j+1} - x_j‖`.
    pub final_residual: T,
    /// Every increment, in order.
    pub residuals: Vec<T>,
    pub wall_time: Duration,
}

fn minus_i<T: Real>(scale: T) -> Cplx<T> {
    Cplx::new(T::zero(), -scale)
}

/// `u² · (m ⊙ ū)` evaluated pseudo-spectrally; `m = None` gives `|u|²u`.
fn cubic<T: Real>(u: &SpectralField<T>, conj_weights: Option<&[Cplx<T>]>, dealias: bool) -> SpectralField<T> {
    let grid = u.grid();
    let samples = u.to_physical();
    let product: Vec<Cplx<T>> = match conj_weights {
        None => samples.iter().map(|v| *v * v.norm_sqr()).collect(),
        Some(weights) => {
            let weighted: Vec<Cplx<T>> = u.conj().coeffs().iter().zip(weights).map(|(c, m)| c * m).collect();
            let conj_samples = transform::to_physical(grid, &weighted).expect("length matches grid");
            samples.iter().zip(&conj_samples).map(|(a, b)| a * a * b).collect()
        }
    };
    let out = SpectralField::from_physical(grid, &product).expect("length matches grid");
    if dealias {
        out.dealias()
    } else {
        out
    }
}

fn weights<T: Real>(grid: &Grid<T>, op: OperatorSpec<T>) -> Vec<Cplx<T>> {
    grid.eigenvalues().iter().map(|&lam| op.multiplier(lam)).collect()
}

fn hadamard<T: Real>(u: &SpectralField<T>, m: &[Cplx<T>]) -> SpectralField<T> {
    u.map_modes(|i, c| c * m[i])
}

/// The cubic nonlinearity `f(u) = -i u² ū`.
pub fn nonlinearity<T: Real>(u: &SpectralField<T>) -> SpectralField<T> {
    &cubic(u, None, false) * minus_i(T::one())
}

/// Explicit increment `ψ_E(v) = -i(τ/2) e^{iτΔ}(v² φ₁(-iτΔ) v̄)` for step `tau`.
pub fn psi_explicit<T: Real>(v: &SpectralField<T>, tau: T) -> SpectralField<T> {
    let grid = v.grid();
    let product = cubic(v, Some(&weights(grid, OperatorSpec::Phi1(Cplx::new(T::zero(), -tau)))), false);
    &product.apply(OperatorSpec::Semigroup(tau)) * minus_i(tau * T::lit(0.5))
}

/// Implicit increment `ψ_I(z) = -i(τ/2)(z² φ₁(iτΔ) z̄)` for step `tau`.
pub fn psi_implicit<T: Real>(z: &SpectralField<T>, tau: T) -> SpectralField<T> {
    let grid = z.grid();
    let product = cubic(z, Some(&weights(grid, OperatorSpec::Phi1(Cplx::new(T::zero(), tau)))), false);
    &product * minus_i(tau * T::lit(0.5))
}

/// A configured one-step map with its mode multipliers precomputed for one grid.
#[derive(Clone, Debug)]
pub struct Stepper<T: Real> {
    cfg: StepperConfig<T>,
    grid: Grid<T>,
    /// `exp(-iτλ)`.
    propagator: Vec<Cplx<T>>,
    /// Weights on `ū` in the explicit cubic term (symmetric: `φ₁(iτλ)`, first order:
    /// `φ₁(2iτλ)`), or on `f(u)` for exponential Euler (`τ φ₁(-iτλ)`).
    explicit: Vec<Cplx<T>>,
    /// Weights on `z̄` in the implicit term, `φ₁(-iτλ)` (symmetric only).
    implicit: Vec<Cplx<T>>,
}

impl<T: Real> Stepper<T> {
    pub fn new(grid: &Grid<T>, cfg: StepperConfig<T>) -> Result<Self> {
        cfg.validate()?;
        let tau = cfg.tau;
        let i_tau = Cplx::new(T::zero(), tau);
        let propagator = weights(grid, OperatorSpec::Semigroup(tau));
        let (explicit, implicit) = match cfg.scheme {
            Scheme::SymmetricLowReg => {
                (weights(grid, OperatorSpec::Phi1(-i_tau)), weights(grid, OperatorSpec::Phi1(i_tau)))
            }
            Scheme::LowReg1 => (weights(grid, OperatorSpec::Phi1(-i_tau * T::lit(2.0))), Vec::new()),
            Scheme::ExpEuler => {
                let w = weights(grid, OperatorSpec::Phi1(i_tau)).into_iter().map(|m| m * tau).collect();
                (w, Vec::new())
            }
            Scheme::LieSplit | Scheme::StrangSplit => (Vec::new(), Vec::new()),
        };
        Ok(Stepper { cfg, grid: grid.clone(), propagator, explicit, implicit })
    }

    pub fn config(&self) -> &StepperConfig<T> {
        &self.cfg
    }

    pub fn grid(&self) -> &Grid<T> {
        &self.grid
    }

    pub fn step(&self, u: &SpectralField<T>) -> Result<(SpectralField<T>, StepReport<T>)> {
        if u.grid() != &self.grid {
            return Err(Error::GridMismatch);
        }
        let start = Instant::now();
        let (next, mut report) = match self.cfg.scheme {
            Scheme::SymmetricLowReg => self.symmetric(u)?,
            Scheme::LowReg1 => (self.lowreg1(u), StepReport::default()),
            Scheme::LieSplit => (self.lie(u), StepReport::default()),
            Scheme::StrangSplit => (self.strang(u), StepReport::default()),
            Scheme::ExpEuler => (self.exp_euler(u), StepReport::default()),
        };
        report.wall_time = start.elapsed();
        Ok((next, report))
    }

    fn symmetric(&self, u: &SpectralField<T>) -> Result<(SpectralField<T>, StepReport<T>)> {
        let half = minus_i(self.cfg.tau * T::lit(0.5));
        let free = hadamard(u, &self.propagator);
        let explicit = &hadamard(&cubic(u, Some(&self.explicit), self.cfg.dealias), &self.propagator) * half;
        let base = &free + &explicit;

        let mut x = free;
        let mut residuals = Vec::new();
        for iteration in 1..=self.cfg.fp_max_iter {
            let implicit = &cubic(&x, Some(&self.implicit), self.cfg.dealias) * half;
            let next = &base + &implicit;
            let increment = next.distance(&x);
            residuals.push(increment);
            let scale = x.l2_norm().max(T::one());
            x = next;
            if !increment.is_finite() {
                break;
            }
            if increment <= self.cfg.fp_tol * scale {
                let report = StepReport {
                    iterations_used: iteration,
                    final_residual: increment,
                    residuals,
                    wall_time: Duration::ZERO,
                };
                return Ok((x, report));
            }
        }
        Err(Error::NonConvergence {
            iterations: residuals.len(),
            residual: residuals.last().map_or(f64::NAN, |r| r.as_f64()),
        })
    }

    fn lowreg1(&self, u: &SpectralField<T>) -> SpectralField<T> {
        let correction = &cubic(u, Some(&self.explicit), self.cfg.dealias) * minus_i(self.cfg.tau);
        hadamard(&(u + &correction), &self.propagator)
    }

    /// `v ↦ e^{-i t |v|²} v` pointwise.
    fn nonlinear_flow(&self, samples: &mut [Cplx<T>], t: T) {
        for v in samples.iter_mut() {
            *v = *v * cis(-t * v.norm_sqr());
        }
    }

    fn to_field(&self, samples: &[Cplx<T>]) -> SpectralField<T> {
        SpectralField::from_physical(&self.grid, samples).expect("length matches grid")
    }

    fn lie(&self, u: &SpectralField<T>) -> SpectralField<T> {
        let mut samples = u.to_physical();
        self.nonlinear_flow(&mut samples, self.cfg.tau);
        hadamard(&self.to_field(&samples), &self.propagator)
    }

    fn strang(&self, u: &SpectralField<T>) -> SpectralField<T> {
        let half = self.cfg.tau * T::lit(0.5);
        let mut samples = u.to_physical();
        self.nonlinear_flow(&mut samples, half);
        let w = hadamard(&self.to_field(&samples), &self.propagator);
        let mut samples = w.to_physical();
        self.nonlinear_flow(&mut samples, half);
        self.to_field(&samples)
    }

    fn exp_euler(&self, u: &SpectralField<T>) -> SpectralField<T> {
        let f = &cubic(u, None, self.cfg.dealias) * minus_i(T::one());
        &hadamard(u, &self.propagator) + &hadamard(&f, &self.explicit)
    }
}

fn step_with<T: Real>(u: &SpectralField<T>, scheme: Scheme, tau: T) -> Result<SpectralField<T>> {
    let stepper = Stepper::new(u.grid(), StepperConfig::new(scheme, tau))?;
    Ok(stepper.step(u)?.0)
}

/// One step of the symmetric low-regularity scheme.
pub fn step_symmetric<T: Real>(
    u: &SpectralField<T>,
    cfg: &StepperConfig<T>,
) -> Result<(SpectralField<T>, StepReport<T>)> {
    if cfg.scheme != Scheme::SymmetricLowReg {
        return Err(Error::InvalidParameter(format!("expected the symmetric scheme, got {}", cfg.scheme)));
    }
    Stepper::new(u.grid(), *cfg)?.step(u)
}

/// One step of the first-order low-regularity scheme; negative `tau` is allowed.
pub fn step_lowreg1<T: Real>(u: &SpectralField<T>, tau: T) -> Result<SpectralField<T>> {
    step_with(u, Scheme::LowReg1, tau)
}

pub fn step_lie<T: Real>(u: &SpectralField<T>, tau: T) -> Result<SpectralField<T>> {
    step_with(u, Scheme::LieSplit, tau)
}

pub fn step_strang<T: Real>(u: &SpectralField<T>, tau: T) -> Result<SpectralField<T>> {
    step_with(u, Scheme::StrangSplit, tau)
}

pub fn step_exp_euler<T: Real>(u: &SpectralField<T>, tau: T) -> Result<SpectralField<T>> {
    step_with(u, Scheme::ExpEuler, tau)
}

/// What [`evolve_with`] hands to its hook after every step.
pub struct StepEvent<'a, T: Real> {
    /// 1-based index of the step just taken.
    pub index: usize,
    pub before: &'a SpectralField<T>,
    pub after: &'a SpectralField<T>,
    pub report: &'a StepReport<T>,
}

#[derive(Clone, Debug)]
pub struct Trajectory<T: Real> {
    /// Observables at steps `0, stride, 2·stride, …`.
    pub samples: Vec<ObservableSample<T>>,
    pub final_state: SpectralField<T>,
    pub steps: usize,
    pub total_iterations: usize,
    pub max_iterations: usize,
    pub wall_time: Duration,
}

/// Applies the configured stepper `n_steps` times, sampling observables every
/// `observer_stride` steps.
pub fn evolve<T: Real>(
    u0: &SpectralField<T>,
    cfg: &StepperConfig<T>,
    n_steps: usize,
    observer_stride: usize,
) -> Result<Trajectory<T>> {
    evolve_with(u0, cfg, n_steps, observer_stride, &[], |_| {})
}

/// [`evolve`] with Sobolev orders to sample and a per-step hook.
pub fn evolve_with<T: Real>(
    u0: &SpectralField<T>,
    cfg: &StepperConfig<T>,
    n_steps: usize,
    observer_stride: usize,
    sobolev_orders: &[T],
    mut hook: impl FnMut(StepEvent<'_, T>),
) -> Result<Trajectory<T>> {
    if observer_stride == 0 {
        return Err(Error::InvalidParameter("observer stride must be at least 1".into()));
    }
    let stepper = Stepper::new(u0.grid(), *cfg)?;
    let start = Instant::now();
    let mut samples = vec![ObservableSample::capture(T::zero(), u0, sobolev_orders)];
    let mut state = u0.clone();
    let mut total_iterations = 0;
    let mut max_iterations = 0;
    for index in 1..=n_steps {
        let (next, report) = stepper.step(&state)?;
        total_iterations += report.iterations_used;
        max_iterations = max_iterations.max(report.iterations_used);
        hook(StepEvent { index, before: &state, after: &next, report: &report });
        state = next;
        if index % observer_stride == 0 {
            let time = cfg.tau * T::from_usize_lossy(index);
            samples.push(ObservableSample::capture(time, &state, sobolev_orders));
        }
    }
    Ok(Trajectory {
        samples,
        final_state: state,
        steps: n_steps,
        total_iterations,
        max_iterations,
        wall_time: start.elapsed(),
    })
}
