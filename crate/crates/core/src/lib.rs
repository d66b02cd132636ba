//! Spectral solvers for the cubic nonlinear Schrödinger equation
//! `i ∂_t u = -Δu + |u|²u` on periodic boxes and Dirichlet intervals.
//!
//! The crate provides eigenbasis grids and transforms ([`spectral`]), the symmetric
//! low-regularity integrator together with first-order and classical baselines ([`schemes`]),
//! conserved quantities and the commutator diagnostic ([`observables`]), and slow
//! coefficient-space reference evaluations ([`oracle`]).
//!
//! Everything numeric is generic over [`Real`] (`f32` or `f64`); the aliases below fix the
//! scalar for the common cases.

pub mod error;
pub mod observables;
pub mod oracle;
mod scalar;
pub mod schemes;
pub mod spectral;

pub use error::{Error, Result};
pub use scalar::{Cplx, Real};
pub use schemes::{Scheme, StepReport, Stepper, StepperConfig, Trajectory};
pub use spectral::{Boundary, Grid, OperatorSpec, SpectralField};

pub type Grid64 = Grid<f64>;
pub type Grid32 = Grid<f32>;
pub type Field64 = SpectralField<f64>;
pub type Field32 = SpectralField<f32>;
pub type Complex64 = Cplx<f64>;
pub type StepperConfig64 = StepperConfig<f64>;
