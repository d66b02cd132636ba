//! Raw transforms between collocation samples and orthonormal-basis coefficients.

use rustfft::Fft;

use super::grid::{Boundary, Grid};
use crate::error::{Error, Result};
use crate::scalar::{Cplx, Real};

fn check_len<T: Real>(grid: &Grid<T>, n: usize) -> Result<()> {
    if n != grid.len() {
        return Err(Error::SizeMismatch { expected: grid.len(), actual: n });
    }
    Ok(())
}

/// Applies a 1-D FFT along every axis of a row-major `modes^dim` array.
fn fft_all_axes<T: Real>(fft: &dyn Fft<T>, data: &mut [Cplx<T>], modes: usize, dim: usize) {
    if dim == 1 {
        fft.process(data);
        return;
    }
    let mut line = vec![Cplx::new(T::zero(), T::zero()); modes];
    let mut scratch = vec![Cplx::new(T::zero(), T::zero()); fft.get_inplace_scratch_len()];
    let total = data.len();
    for axis in 0..dim {
        let stride = modes.pow((dim - 1 - axis) as u32);
        for start in 0..total {
            // visit each line once: its first element has zero coordinate along `axis`
            if !(start / stride).is_multiple_of(modes) {
                continue;
            }
            for (j, slot) in line.iter_mut().enumerate() {
                *slot = data[start + j * stride];
            }
            fft.process_with_scratch(&mut line, &mut scratch);
            for (j, v) in line.iter().enumerate() {
                data[start + j * stride] = *v;
            }
        }
    }
}

/// `S_k = Σ_{j=1}^{K} v_j sin(π j k / (K+1))` for `k = 1..=K`, through an odd extension.
pub(crate) fn sine_sum<T: Real>(grid: &Grid<T>, values: &[Cplx<T>]) -> Vec<Cplx<T>> {
    let k = values.len();
    let m = 2 * (k + 1);
    let mut ext = vec![Cplx::new(T::zero(), T::zero()); m];
    for (j, v) in values.iter().enumerate() {
        ext[j + 1] = *v;
        ext[m - j - 1] = -*v;
    }
    grid.plans().forward().process(&mut ext);
    // FFT(ext)_k = -2i S_k
    let half_i = Cplx::new(T::zero(), T::lit(0.5));
    ext[1..=k].iter().map(|z| *z * half_i).collect()
}

/// `C_j = Σ_{k=1}^{K} a_k cos(π j k / (K+1))` for `j = 1..=K`, through an even extension.
pub(crate) fn cosine_sum<T: Real>(grid: &Grid<T>, values: &[Cplx<T>]) -> Vec<Cplx<T>> {
    let k = values.len();
    let m = 2 * (k + 1);
    let mut ext = vec![Cplx::new(T::zero(), T::zero()); m];
    for (j, v) in values.iter().enumerate() {
        ext[j + 1] = *v;
        ext[m - j - 1] = *v;
    }
    grid.plans().forward().process(&mut ext);
    let half = T::lit(0.5);
    ext[1..=k].iter().map(|z| *z * half).collect()
}

/// Samples to coefficients of the orthonormal eigenbasis.
pub fn to_spectral<T: Real>(grid: &Grid<T>, values: &[Cplx<T>]) -> Result<Vec<Cplx<T>>> {
    check_len(grid, values.len())?;
    Ok(match grid.boundary() {
        Boundary::Periodic => {
            let mut data = values.to_vec();
            fft_all_axes(grid.plans().forward(), &mut data, grid.modes_per_axis(), grid.dim());
            let scale = grid.volume().sqrt() / T::from_usize_lossy(grid.len());
            data.iter_mut().for_each(|c| *c = *c * scale);
            data
        }
        Boundary::Dirichlet => {
            let l = grid.lengths()[0];
            let scale = grid.quadrature_weight() * (T::lit(2.0) / l).sqrt();
            sine_sum(grid, values).into_iter().map(|c| c * scale).collect()
        }
    })
}

/// Coefficients to collocation samples.
pub fn to_physical<T: Real>(grid: &Grid<T>, coeffs: &[Cplx<T>]) -> Result<Vec<Cplx<T>>> {
    check_len(grid, coeffs.len())?;
    Ok(match grid.boundary() {
        Boundary::Periodic => {
            let mut data = coeffs.to_vec();
            fft_all_axes(grid.plans().inverse(), &mut data, grid.modes_per_axis(), grid.dim());
            let scale = T::one() / grid.volume().sqrt();
            data.iter_mut().for_each(|c| *c = *c * scale);
            data
        }
        Boundary::Dirichlet => {
            let scale = (T::lit(2.0) / grid.lengths()[0]).sqrt();
            sine_sum(grid, coeffs).into_iter().map(|c| c * scale).collect()
        }
    })
}

/// Samples of `∂_x u` for a Dirichlet sine series, evaluated through the cosine series.
pub(crate) fn dirichlet_derivative_samples<T: Real>(grid: &Grid<T>, coeffs: &[Cplx<T>]) -> Vec<Cplx<T>> {
    let l = grid.lengths()[0];
    let norm = (T::lit(2.0) / l).sqrt();
    let scale = grid.wavenumber_scale(0);
    let weighted: Vec<Cplx<T>> =
        coeffs.iter().enumerate().map(|(i, c)| *c * (norm * scale * T::from_usize_lossy(i + 1))).collect();
    cosine_sum(grid, &weighted)
}
