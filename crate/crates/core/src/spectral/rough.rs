use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::field::SpectralField;
use super::grid::Grid;
use crate::error::{Error, Result};
use crate::scalar::{Cplx, Real};

/// Excess decay beyond the borderline `H^α` rate.
pub const ROUGHNESS_MARGIN: f64 = 0.05;

/// Random data that lies in `H^α` with little room to spare.
///
/// Coefficients are `η_k (1 + λ_k)^{-(α + d/2 + ε)/2}` with `η_k` uniform in the complex unit
/// square `[0,1) × [0,1)` and `ε = 0.05`, then rescaled to `‖u‖_α = target_norm`. Draws come
/// from ChaCha8 seeded with `seed`, consumed in storage order (real part, then imaginary part).
pub fn rough_data<T: Real>(grid: &Grid<T>, alpha: T, seed: u64, target_norm: T) -> Result<SpectralField<T>> {
    if !(alpha >= T::zero() && alpha.is_finite()) {
        return Err(Error::InvalidParameter(format!("regularity must be non-negative, got {alpha}")));
    }
    if !(target_norm > T::zero() && target_norm.is_finite()) {
        return Err(Error::InvalidParameter(format!("target norm must be positive, got {target_norm}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let half_dim = T::lit(grid.dim() as f64 * 0.5);
    let exponent = -(alpha + half_dim + T::lit(ROUGHNESS_MARGIN)) * T::lit(0.5);
    let coeffs: Vec<Cplx<T>> = grid
        .eigenvalues()
        .iter()
        .map(|&lam| {
            let re: f64 = rng.gen();
            let im: f64 = rng.gen();
            Cplx::new(T::lit(re), T::lit(im)) * (T::one() + lam).powf(exponent)
        })
        .collect();
    let field = SpectralField::new(grid.clone(), coeffs)?;
    let norm = field.sobolev_norm(alpha);
    Ok(&field * (target_norm / norm))
}
