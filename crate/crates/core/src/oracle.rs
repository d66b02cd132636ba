//! Slow reference evaluations in coefficient space.
//!
//! Everything here is written from the Fourier-series definitions directly and shares no code
//! path with the pseudo-spectral products in [`crate::schemes`]. The triple sums cost `O(K³)`
//! and are restricted to one-dimensional periodic grids with `K ≤ 32`.

use crate::error::{Error, Result};
use crate::scalar::{Cplx, Real};
use crate::spectral::{Boundary, Grid, SpectralField};

pub const MAX_ORACLE_MODES: usize = 32;

/// Coefficients on the wavenumber band `min_k ..= min_k + len - 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtendedSpectrum<T: Real> {
    pub min_k: i64,
    pub coeffs: Vec<Cplx<T>>,
}

impl<T: Real> ExtendedSpectrum<T> {
    pub fn coeff(&self, k: i64) -> Cplx<T> {
        let i = k - self.min_k;
        if i < 0 || i as usize >= self.coeffs.len() {
            Cplx::new(T::zero(), T::zero())
        } else {
            self.coeffs[i as usize]
        }
    }

    /// Restricts to the grid band; any nonzero coefficient outside it is a band overflow.
    pub fn to_field(&self, grid: &Grid<T>) -> Result<SpectralField<T>> {
        let mut out = SpectralField::zeros(grid);
        for (i, c) in self.coeffs.iter().enumerate() {
            let k = self.min_k + i as i64;
            match grid.index_of(&[k]) {
                Some(j) => out.coeffs_mut()[j] = *c,
                None if c.norm_sqr() > T::zero() => return Err(Error::BandOverflow { wavenumber: k }),
                None => {}
            }
        }
        Ok(out)
    }
}

fn check_oracle_grid<T: Real>(grid: &Grid<T>) {
    assert!(
        grid.dim() == 1 && grid.boundary() == Boundary::Periodic,
        "coefficient oracles are one-dimensional periodic"
    );
    assert!(grid.modes_per_axis() <= MAX_ORACLE_MODES, "oracle grids are capped at {MAX_ORACLE_MODES} modes");
}

fn modes<T: Real>(u: &SpectralField<T>) -> Vec<(i64, Cplx<T>)> {
    u.grid().wavevectors().zip(u.coeffs()).filter(|(_, c)| c.norm_sqr() > T::zero()).map(|(k, c)| (k[0], *c)).collect()
}

/// `Σ_{k = k₂ + k₃ - k₁} w(k₁) · a_{k₂} b_{k₃} c̄_{k₁} / L` over the extended band.
fn weighted_triple_sum<T: Real>(
    a: &SpectralField<T>,
    b: &SpectralField<T>,
    c: &SpectralField<T>,
    weight: impl Fn(i64) -> Cplx<T>,
) -> ExtendedSpectrum<T> {
    let grid = a.grid();
    check_oracle_grid(grid);
    assert!(b.grid() == grid && c.grid() == grid, "fields live on different grids");
    let half = (grid.modes_per_axis() / 2) as i64;
    let min_k = -3 * half;
    let mut coeffs = vec![Cplx::new(T::zero(), T::zero()); (6 * half + 1) as usize];
    let inv_length = T::one() / grid.lengths()[0];
    let (ma, mb, mc) = (modes(a), modes(b), modes(c));
    for &(k1, c1) in &mc {
        let w = weight(k1) * c1.conj() * inv_length;
        for &(k2, a2) in &ma {
            for &(k3, b3) in &mb {
                let k = k2 + k3 - k1;
                coeffs[(k - min_k) as usize] = coeffs[(k - min_k) as usize] + w * a2 * b3;
            }
        }
    }
    ExtendedSpectrum { min_k, coeffs }
}

/// Exact coefficients of the product `a · b · c̄`.
///
/// # Panics
/// On grids other than 1-D periodic with at most 32 modes.
pub fn convolution_cubic<T: Real>(
    a: &SpectralField<T>,
    b: &SpectralField<T>,
    c: &SpectralField<T>,
) -> ExtendedSpectrum<T> {
    weighted_triple_sum(a, b, c, |_| Cplx::new(T::one(), T::zero()))
}

/// `f(u) = -i u² ū` from the triple sum, restricted to the grid band.
pub fn nonlinearity_oracle<T: Real>(u: &SpectralField<T>) -> Result<SpectralField<T>> {
    let f = convolution_cubic(u, u, u).to_field(u.grid())?;
    Ok(&f * Cplx::new(T::zero(), -T::one()))
}

/// `(e^{iθ} - 1)/(iθ)` straight from the definition, with a short series near zero.
fn phi1_of_i_theta<T: Real>(theta: T) -> Cplx<T> {
    let z = Cplx::new(T::zero(), theta);
    if theta.abs() < T::lit(1e-3) {
        Cplx::new(T::one(), T::zero()) + z / T::lit(2.0) + z * z / T::lit(6.0) + z * z * z / T::lit(24.0)
    } else {
        (z.exp() - Cplx::new(T::one(), T::zero())) / z
    }
}

fn squared_frequency<T: Real>(grid: &Grid<T>, k: i64) -> T {
    let w = T::lit(k as f64) * (T::PI() + T::PI()) / grid.lengths()[0];
    w * w
}

/// Mode-wise explicit increment: the oscillation `e^{2iλ_{k₁}s}` of the conjugated mode is
/// integrated exactly over `[0, τ/2]`, which attaches `(τ/2) φ₁(iτλ_{k₁})` to `v̄_{k₁}`; the
/// result is mapped back from the twisted variable by `e^{-iτλ_k}` (step starting at `t = 0`).
pub fn psi_explicit_oracle<T: Real>(v: &SpectralField<T>, tau: T) -> Result<SpectralField<T>> {
    let grid = v.grid();
    let sum = weighted_triple_sum(v, v, v, |k1| phi1_of_i_theta(tau * squared_frequency(grid, k1)));
    let half = tau * T::lit(0.5);
    let twisted = ExtendedSpectrum {
        min_k: sum.min_k,
        coeffs: sum
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let lam = squared_frequency(grid, sum.min_k + i as i64);
                let untwist = Cplx::new(T::zero(), -tau * lam).exp();
                *c * Cplx::new(T::zero(), -half) * untwist
            })
            .collect(),
    };
    twisted.to_field(grid)
}

/// Mode-wise implicit increment: `(τ/2) φ₁(-iτλ_{k₁})` attached to `z̄_{k₁}`, no outer phase.
pub fn psi_implicit_oracle<T: Real>(z: &SpectralField<T>, tau: T) -> Result<SpectralField<T>> {
    let grid = z.grid();
    let sum = weighted_triple_sum(z, z, z, |k1| phi1_of_i_theta(-tau * squared_frequency(grid, k1)));
    let half = tau * T::lit(0.5);
    let scaled = ExtendedSpectrum {
        min_k: sum.min_k,
        coeffs: sum.coeffs.iter().map(|c| *c * Cplx::new(T::zero(), -half)).collect(),
    };
    scaled.to_field(grid)
}

/// Exact plane-wave solution `c e^{ik·x} e^{-i(λ_k + |c|²/|Ω|)t}` of the NLS.
pub fn plane_wave_solution<T: Real>(k: &[i64], c: Cplx<T>, t: T, grid: &Grid<T>) -> Result<SpectralField<T>> {
    if grid.boundary() != Boundary::Periodic {
        return Err(Error::Unsupported("plane waves need a periodic grid".into()));
    }
    let index = grid
        .index_of(k)
        .ok_or_else(|| Error::InvalidParameter(format!("wavevector {k:?} is outside the grid band")))?;
    let frequency = grid.eigenvalues()[index] + c.norm_sqr() / grid.volume();
    let phase = Cplx::new(T::zero(), -frequency * t).exp();
    SpectralField::single_mode(grid, k, c * phase)
}
