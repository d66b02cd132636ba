use std::ops::{Add, Mul, Neg, Sub};

use super::grid::{Boundary, Grid, Wavevector};
use super::transform;
use crate::error::{Error, Result};
use crate::scalar::{norm_sqr, Cplx, Real};

/// A state expanded in the orthonormal eigenbasis of a [`Grid`].
///
/// Periodic basis functions are `e^{i k.x}/√|Ω|`, Dirichlet ones `√(2/L) sin(kπx/L)`, so the
/// coefficient ℓ² norm equals the L² norm of the represented function.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralField<T: Real> {
    grid: Grid<T>,
    coeffs: Vec<Cplx<T>>,
}

impl<T: Real> SpectralField<T> {
    pub fn new(grid: Grid<T>, coeffs: Vec<Cplx<T>>) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(Error::SizeMismatch { expected: grid.len(), actual: coeffs.len() });
        }
        Ok(SpectralField { grid, coeffs })
    }

    pub fn zeros(grid: &Grid<T>) -> Self {
        SpectralField { grid: grid.clone(), coeffs: vec![Cplx::new(T::zero(), T::zero()); grid.len()] }
    }

    pub fn from_fn(grid: &Grid<T>, mut f: impl FnMut(Wavevector) -> Cplx<T>) -> Self {
        let coeffs = grid.wavevectors().map(&mut f).collect();
        SpectralField { grid: grid.clone(), coeffs }
    }

    /// A single basis function with the given coefficient.
    pub fn single_mode(grid: &Grid<T>, k: &[i64], coeff: Cplx<T>) -> Result<Self> {
        let index = grid
            .index_of(k)
            .ok_or_else(|| Error::InvalidParameter(format!("wavevector {k:?} is outside the grid band")))?;
        let mut field = Self::zeros(grid);
        field.coeffs[index] = coeff;
        Ok(field)
    }

    /// Expands collocation samples (forward transform).
    pub fn from_physical(grid: &Grid<T>, values: &[Cplx<T>]) -> Result<Self> {
        Ok(SpectralField { grid: grid.clone(), coeffs: transform::to_spectral(grid, values)? })
    }

    /// Collocation samples (inverse transform).
    pub fn to_physical(&self) -> Vec<Cplx<T>> {
        transform::to_physical(&self.grid, &self.coeffs).expect("field length matches its grid")
    }

    pub fn grid(&self) -> &Grid<T> {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Cplx<T>] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Cplx<T>] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Cplx<T>> {
        self.coeffs
    }

    pub fn coeff(&self, k: &[i64]) -> Option<Cplx<T>> {
        self.grid.index_of(k).map(|i| self.coeffs[i])
    }

    /// Coefficients of the complex conjugate function `ū`.
    pub fn conj(&self) -> Self {
        let coeffs = match self.grid.boundary() {
            Boundary::Dirichlet => self.coeffs.iter().map(|c| c.conj()).collect(),
            Boundary::Periodic => self.grid.conj_index().iter().map(|&j| self.coeffs[j].conj()).collect(),
        };
        SpectralField { grid: self.grid.clone(), coeffs }
    }

    pub fn map_modes(&self, mut f: impl FnMut(usize, Cplx<T>) -> Cplx<T>) -> Self {
        let coeffs = self.coeffs.iter().enumerate().map(|(i, c)| f(i, *c)).collect();
        SpectralField { grid: self.grid.clone(), coeffs }
    }

    /// Multiplies each mode by `multiplier(λ_k)`.
    pub fn map_eigen(&self, mut multiplier: impl FnMut(T) -> Cplx<T>) -> Self {
        let lambdas = self.grid.eigenvalues();
        self.map_modes(|i, c| c * multiplier(lambdas[i]))
    }

    pub fn l2_norm(&self) -> T {
        norm_sqr(&self.coeffs).sqrt()
    }

    /// Graph norm `√(Σ (1 + λ_k^s)|u_k|²)`; `s = 0` gives the plain L² norm.
    pub fn sobolev_norm(&self, s: T) -> T {
        assert!(s >= T::zero(), "Sobolev order must be non-negative");
        if s == T::zero() {
            return self.l2_norm();
        }
        self.coeffs
            .iter()
            .zip(self.grid.eigenvalues())
            .fold(T::zero(), |acc, (c, &lam)| acc + (T::one() + lam.powf(s)) * c.norm_sqr())
            .sqrt()
    }

    pub fn distance(&self, other: &Self) -> T {
        assert_eq!(self.grid, other.grid, "fields live on different grids");
        self.coeffs.iter().zip(&other.coeffs).fold(T::zero(), |acc, (a, b)| acc + (a - b).norm_sqr()).sqrt()
    }

    pub fn max_abs_coeff(&self) -> T {
        self.coeffs.iter().fold(T::zero(), |m, c| m.max(c.norm()))
    }

    /// Whether every mode of the field is retained by the 2/3 rule.
    pub fn in_dealiased_band(&self, k: &Wavevector) -> bool {
        let modes = self.grid.modes_per_axis() as i64;
        match self.grid.boundary() {
            Boundary::Periodic => k.iter().all(|&x| 3 * x.abs() <= modes),
            Boundary::Dirichlet => 3 * k[0] <= 2 * modes,
        }
    }

    /// 2/3-rule projection: zeroes modes with some `|k_a| > K/3` (periodic) or `k > 2K/3` (Dirichlet).
    pub fn dealias(&self) -> Self {
        let zero = Cplx::new(T::zero(), T::zero());
        self.map_modes(|i, c| if self.in_dealiased_band(&self.grid.wavevector(i)) { c } else { zero })
    }

    /// Largest `max_a |k_a|` over modes with a nonzero coefficient (0 for the zero field).
    pub fn spectral_radius(&self) -> i64 {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.norm_sqr() > T::zero())
            .map(|(i, _)| self.grid.wavevector(i).iter().map(|x| x.abs()).max().unwrap_or(0))
            .max()
            .unwrap_or(0)
    }

    /// Copies the field onto another periodic grid over the same box, zero-padding or
    /// truncating the spectrum.
    pub fn resample(&self, target: &Grid<T>) -> Result<Self> {
        if self.grid.boundary() != target.boundary()
            || self.grid.dim() != target.dim()
            || self.grid.lengths() != target.lengths()
        {
            return Err(Error::GridMismatch);
        }
        let mut out = Self::zeros(target);
        for (i, c) in self.coeffs.iter().enumerate() {
            if let Some(j) = target.index_of(&self.grid.wavevector(i)) {
                out.coeffs[j] = *c;
            }
        }
        Ok(out)
    }

    pub(crate) fn zip_with(&self, other: &Self, f: impl Fn(Cplx<T>, Cplx<T>) -> Cplx<T>) -> Self {
        assert_eq!(self.grid, other.grid, "fields live on different grids");
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| f(*a, *b)).collect();
        SpectralField { grid: self.grid.clone(), coeffs }
    }
}

/// Expands physical samples into eigenbasis coefficients.
pub fn forward_transform<T: Real>(values: &[Cplx<T>], grid: &Grid<T>) -> Result<SpectralField<T>> {
    SpectralField::from_physical(grid, values)
}

/// Evaluates a field at the collocation points.
pub fn inverse_transform<T: Real>(field: &SpectralField<T>) -> Vec<Cplx<T>> {
    field.to_physical()
}

/// Graph norm of order `s`; see [`SpectralField::sobolev_norm`].
pub fn sobolev_norm<T: Real>(field: &SpectralField<T>, s: T) -> T {
    field.sobolev_norm(s)
}

pub fn dealias<T: Real>(field: &SpectralField<T>) -> SpectralField<T> {
    field.dealias()
}

impl<T: Real> Add for &SpectralField<T> {
    type Output = SpectralField<T>;
    fn add(self, rhs: Self) -> SpectralField<T> {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl<T: Real> Sub for &SpectralField<T> {
    type Output = SpectralField<T>;
    fn sub(self, rhs: Self) -> SpectralField<T> {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl<T: Real> Neg for &SpectralField<T> {
    type Output = SpectralField<T>;
    fn neg(self) -> SpectralField<T> {
        self.map_modes(|_, c| -c)
    }
}

impl<T: Real> Mul<Cplx<T>> for &SpectralField<T> {
    type Output = SpectralField<T>;
    fn mul(self, rhs: Cplx<T>) -> SpectralField<T> {
        self.map_modes(|_, c| c * rhs)
    }
}

impl<T: Real> Mul<T> for &SpectralField<T> {
    type Output = SpectralField<T>;
    fn mul(self, rhs: T) -> SpectralField<T> {
        self.map_modes(|_, c| c * rhs)
    }
}
