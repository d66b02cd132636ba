//! Conserved quantities of the NLS flow and the commutator diagnostic.

use crate::error::Result;
use crate::scalar::{Cplx, Real};
use crate::spectral::transform;
use crate::spectral::{Boundary, Grid, SpectralField};

#[derive(Clone, Debug, PartialEq)]
pub struct ObservableSample<T> {
    pub time: T,
    /// `‖u‖_{L²}`.
    pub mass: T,
    pub energy: T,
    /// `(s, ‖u‖_s)` pairs.
    pub sobolev_norms: Vec<(T, T)>,
}

impl<T: Real> ObservableSample<T> {
    pub fn capture(time: T, u: &SpectralField<T>, sobolev_orders: &[T]) -> Self {
        ObservableSample {
            time,
            mass: mass(u),
            energy: energy(u),
            sobolev_norms: sobolev_orders.iter().map(|&s| (s, u.sobolev_norm(s))).collect(),
        }
    }
}

pub fn mass<T: Real>(u: &SpectralField<T>) -> T {
    u.l2_norm()
}

/// `E = ½∫|∇u|² + ¼∫|u|⁴`, the gradient part spectrally and the quartic part by the
/// rectangle rule on the collocation grid.
pub fn energy<T: Real>(u: &SpectralField<T>) -> T {
    let kinetic =
        u.coeffs().iter().zip(u.grid().eigenvalues()).fold(T::zero(), |acc, (c, &lam)| acc + lam * c.norm_sqr());
    let quartic = u.to_physical().iter().fold(T::zero(), |acc, v| {
        let m = v.norm_sqr();
        acc + m * m
    });
    T::lit(0.5) * kinetic + T::lit(0.25) * quartic * u.grid().quadrature_weight()
}

/// Samples of `∂_{x_a} u`.
pub fn gradient_samples<T: Real>(u: &SpectralField<T>, axis: usize) -> Vec<Cplx<T>> {
    let grid = u.grid();
    assert!(axis < grid.dim(), "axis out of range");
    match grid.boundary() {
        Boundary::Periodic => {
            let half = (grid.modes_per_axis() / 2) as i64;
            let scale = grid.wavenumber_scale(axis);
            let d = u.map_modes(|i, c| {
                let k = grid.wavevector(i)[axis];
                // the Nyquist mode has no conjugate partner; its derivative is dropped
                if k == -half {
                    Cplx::new(T::zero(), T::zero())
                } else {
                    c * Cplx::new(T::zero(), T::lit(k as f64) * scale)
                }
            });
            d.to_physical()
        }
        Boundary::Dirichlet => transform::dirichlet_derivative_samples(grid, u.coeffs()),
    }
}

fn laplacian<T: Real>(u: &SpectralField<T>) -> SpectralField<T> {
    u.map_eigen(|lam| Cplx::new(-lam, T::zero()))
}

/// Both sides of the commutator identity for `f(v₁, v₂) = -i v₁² v₂` and `L = iΔ`:
///
/// * `-Δ(v₁²v₂) + 2v₁v₂Δv₁ + v₁²Δv₂`
/// * `-2((∇v₁·∇v₁) v₂ + 2 v₁ ∇v₁·∇v₂)`
///
/// The gradient square carries no conjugation. The two agree for band-limited inputs whose
/// triple products are resolved by the grid.
pub fn commutator<T: Real>(v1: &SpectralField<T>, v2: &SpectralField<T>) -> (SpectralField<T>, SpectralField<T>) {
    assert_eq!(v1.grid(), v2.grid(), "fields live on different grids");
    let grid = v1.grid();
    let a = v1.to_physical();
    let b = v2.to_physical();
    let lap_a = laplacian(v1).to_physical();
    let lap_b = laplacian(v2).to_physical();
    let to_field = |values: &[Cplx<T>]| SpectralField::from_physical(grid, values).expect("length matches grid");

    let cubic: Vec<Cplx<T>> = a.iter().zip(&b).map(|(x, y)| x * x * y).collect();
    let two = T::lit(2.0);
    let rest: Vec<Cplx<T>> = (0..a.len()).map(|j| a[j] * b[j] * lap_a[j] * two + a[j] * a[j] * lap_b[j]).collect();
    let first = &(-&laplacian(&to_field(&cubic))) + &to_field(&rest);

    let mut grad_sq = vec![Cplx::new(T::zero(), T::zero()); a.len()];
    let mut grad_dot = grad_sq.clone();
    for axis in 0..grid.dim() {
        let ga = gradient_samples(v1, axis);
        let gb = gradient_samples(v2, axis);
        for j in 0..a.len() {
            grad_sq[j] = grad_sq[j] + ga[j] * ga[j];
            grad_dot[j] = grad_dot[j] + ga[j] * gb[j];
        }
    }
    let second: Vec<Cplx<T>> = (0..a.len()).map(|j| -(grad_sq[j] * b[j] + a[j] * grad_dot[j] * two) * two).collect();
    (first, to_field(&second))
}

/// [`commutator`] evaluated on a grid refined by `factor` and truncated back (periodic only).
pub fn commutator_oversampled<T: Real>(
    v1: &SpectralField<T>,
    v2: &SpectralField<T>,
    factor: usize,
) -> Result<(SpectralField<T>, SpectralField<T>)> {
    let fine: Grid<T> = v1.grid().refined(factor)?;
    let (a, b) = commutator(&v1.resample(&fine)?, &v2.resample(&fine)?);
    Ok((a.resample(v1.grid())?, b.resample(v1.grid())?))
}
