use std::fmt;
use std::sync::Arc;

use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::scalar::{Cplx, Real};

/// Boundary condition encoded by the eigenbasis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Boundary {
    /// Fourier modes `e^{i k.x}` on the torus.
    Periodic,
    /// Sine modes on an interval with homogeneous Dirichlet conditions (one dimension only).
    Dirichlet,
}

impl Boundary {
    pub fn code(self) -> u32 {
        match self {
            Boundary::Periodic => 0,
            Boundary::Dirichlet => 1,
        }
    }

    pub fn from_code(code: u32) -> Option<Self> {
        match code {
            0 => Some(Boundary::Periodic),
            1 => Some(Boundary::Dirichlet),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Boundary::Periodic => "periodic",
            Boundary::Dirichlet => "dirichlet",
        }
    }
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Integer wavevector. Unused trailing axes are zero; Dirichlet modes use `k[0] ∈ 1..=K`.
pub type Wavevector = [i64; 3];

pub(crate) struct Plans<T: Real> {
    forward: Arc<dyn Fft<T>>,
    inverse: Arc<dyn Fft<T>>,
}

/// Discrete eigenbasis of `-Δ` on a periodic box or a Dirichlet interval.
///
/// Coefficients are stored in FFT order along each axis (non-negative wavenumbers first),
/// row-major with the last axis fastest. Cloning is cheap: eigenvalues and transform plans
/// are shared.
#[derive(Clone)]
pub struct Grid<T: Real> {
    dim: usize,
    modes: usize,
    boundary: Boundary,
    lengths: Vec<T>,
    eigenvalues: Arc<[T]>,
    conj_index: Arc<[usize]>,
    plans: Arc<Plans<T>>,
}

impl<T: Real> fmt::Debug for Grid<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid")
            .field("dim", &self.dim)
            .field("modes", &self.modes)
            .field("boundary", &self.boundary)
            .field("lengths", &self.lengths)
            .finish()
    }
}

impl<T: Real> PartialEq for Grid<T> {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.eigenvalues, &other.eigenvalues)
            || (self.dim == other.dim
                && self.modes == other.modes
                && self.boundary == other.boundary
                && self.lengths == other.lengths)
    }
}

impl<T: Real> Grid<T> {
    pub fn new(dim: usize, modes: usize, boundary: Boundary, lengths: &[T]) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::InvalidParameter(format!("dimension must be 1, 2 or 3, got {dim}")));
        }
        if modes < 2 || !modes.is_power_of_two() {
            return Err(Error::InvalidParameter(format!("modes per axis must be a power of two >= 2, got {modes}")));
        }
        if boundary == Boundary::Dirichlet && dim != 1 {
            return Err(Error::Unsupported("Dirichlet grids are one-dimensional".into()));
        }
        if lengths.len() != dim {
            return Err(Error::SizeMismatch { expected: dim, actual: lengths.len() });
        }
        if lengths.iter().any(|l| !(l.is_finite() && *l > T::zero())) {
            return Err(Error::InvalidParameter("domain lengths must be positive and finite".into()));
        }

        let mut planner = FftPlanner::new();
        let fft_len = match boundary {
            Boundary::Periodic => modes,
            Boundary::Dirichlet => 2 * (modes + 1),
        };
        let plans = Plans { forward: planner.plan_fft_forward(fft_len), inverse: planner.plan_fft_inverse(fft_len) };

        let total = modes.pow(dim as u32);
        let mut grid = Grid {
            dim,
            modes,
            boundary,
            lengths: lengths.to_vec(),
            eigenvalues: Arc::from(Vec::new()),
            conj_index: Arc::from(Vec::new()),
            plans: Arc::new(plans),
        };
        let eigenvalues: Vec<T> = (0..total).map(|i| grid.eigenvalue_of(&grid.wavevector(i))).collect();
        grid.eigenvalues = Arc::from(eigenvalues);
        let conj_index: Vec<usize> = (0..total).map(|i| grid.conjugate_partner(i)).collect();
        grid.conj_index = Arc::from(conj_index);
        Ok(grid)
    }

    /// Periodic box `[0, 2π)^d`.
    pub fn periodic(dim: usize, modes: usize) -> Result<Self> {
        let two_pi = T::PI() + T::PI();
        Self::new(dim, modes, Boundary::Periodic, &vec![two_pi; dim])
    }

    /// Dirichlet interval `[0, 1]` with `modes` sine modes and as many interior points.
    pub fn dirichlet(modes: usize) -> Result<Self> {
        Self::new(1, modes, Boundary::Dirichlet, &[T::one()])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn modes_per_axis(&self) -> usize {
        self.modes
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn lengths(&self) -> &[T] {
        &self.lengths
    }

    /// Number of modes, equal to the number of physical sample points.
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// Eigenvalues `λ_k ≥ 0` of `-Δ` in storage order.
    pub fn eigenvalues(&self) -> &[T] {
        &self.eigenvalues
    }

    pub fn volume(&self) -> T {
        self.lengths.iter().fold(T::one(), |acc, &l| acc * l)
    }

    /// Rectangle-rule weight of one collocation point.
    pub fn quadrature_weight(&self) -> T {
        match self.boundary {
            Boundary::Periodic => self.volume() / T::from_usize_lossy(self.len()),
            Boundary::Dirichlet => self.lengths[0] / T::from_usize_lossy(self.modes + 1),
        }
    }

    /// Wavenumber stored at position `i` along one axis.
    pub fn axis_wavenumber(&self, i: usize) -> i64 {
        match self.boundary {
            Boundary::Periodic => {
                if i < self.modes / 2 {
                    i as i64
                } else {
                    i as i64 - self.modes as i64
                }
            }
            Boundary::Dirichlet => i as i64 + 1,
        }
    }

    fn axis_index(&self, k: i64) -> Option<usize> {
        let m = self.modes as i64;
        match self.boundary {
            Boundary::Periodic => {
                if k >= -m / 2 && k < m / 2 {
                    Some(k.rem_euclid(m) as usize)
                } else {
                    None
                }
            }
            Boundary::Dirichlet => (1..=m).contains(&k).then(|| (k - 1) as usize),
        }
    }

    pub fn wavevector(&self, index: usize) -> Wavevector {
        let mut k = [0i64; 3];
        let mut rest = index;
        for axis in (0..self.dim).rev() {
            k[axis] = self.axis_wavenumber(rest % self.modes);
            rest /= self.modes;
        }
        k
    }

    /// Storage index of a wavevector, or `None` when it lies outside the band.
    pub fn index_of(&self, k: &[i64]) -> Option<usize> {
        if k.len() < self.dim || k[self.dim..].iter().any(|&x| x != 0) {
            return None;
        }
        k[..self.dim].iter().try_fold(0usize, |acc, &ka| Some(acc * self.modes + self.axis_index(ka)?))
    }

    pub fn wavevectors(&self) -> impl Iterator<Item = Wavevector> + '_ {
        (0..self.len()).map(move |i| self.wavevector(i))
    }

    /// Physical wavenumber scaling `2π/L` (periodic) or `π/L` (Dirichlet) of one axis.
    pub fn wavenumber_scale(&self, axis: usize) -> T {
        match self.boundary {
            Boundary::Periodic => (T::PI() + T::PI()) / self.lengths[axis],
            Boundary::Dirichlet => T::PI() / self.lengths[axis],
        }
    }

    fn eigenvalue_of(&self, k: &Wavevector) -> T {
        (0..self.dim).fold(T::zero(), |acc, axis| {
            let w = T::lit(k[axis] as f64) * self.wavenumber_scale(axis);
            acc + w * w
        })
    }

    /// Collocation coordinates along one axis.
    pub fn axis_points(&self, axis: usize) -> Vec<T> {
        let l = self.lengths[axis];
        match self.boundary {
            Boundary::Periodic => {
                let h = l / T::from_usize_lossy(self.modes);
                (0..self.modes).map(|j| h * T::from_usize_lossy(j)).collect()
            }
            Boundary::Dirichlet => {
                let h = l / T::from_usize_lossy(self.modes + 1);
                (1..=self.modes).map(|j| h * T::from_usize_lossy(j)).collect()
            }
        }
    }

    /// Coordinates of physical sample `index` (row-major, last axis fastest).
    pub fn point(&self, index: usize) -> [T; 3] {
        let mut x = [T::zero(); 3];
        let mut rest = index;
        let h: Vec<T> = (0..self.dim)
            .map(|a| match self.boundary {
                Boundary::Periodic => self.lengths[a] / T::from_usize_lossy(self.modes),
                Boundary::Dirichlet => self.lengths[a] / T::from_usize_lossy(self.modes + 1),
            })
            .collect();
        for axis in (0..self.dim).rev() {
            let j = rest % self.modes;
            rest /= self.modes;
            let j = match self.boundary {
                Boundary::Periodic => j,
                Boundary::Dirichlet => j + 1,
            };
            x[axis] = h[axis] * T::from_usize_lossy(j);
        }
        x
    }

    /// Value of the orthonormal basis function of mode `index` at `x`.
    pub fn basis_value(&self, index: usize, x: &[T; 3]) -> Cplx<T> {
        let k = self.wavevector(index);
        match self.boundary {
            Boundary::Periodic => {
                let phase =
                    (0..self.dim).fold(T::zero(), |acc, a| acc + T::lit(k[a] as f64) * self.wavenumber_scale(a) * x[a]);
                Cplx::new(phase.cos(), phase.sin()) / self.volume().sqrt()
            }
            Boundary::Dirichlet => {
                let l = self.lengths[0];
                let arg = T::lit(k[0] as f64) * self.wavenumber_scale(0) * x[0];
                Cplx::new(((T::lit(2.0) / l).sqrt()) * arg.sin(), T::zero())
            }
        }
    }

    /// Storage index holding `-k` for the mode stored at `index` (identity for sine modes).
    /// The periodic Nyquist wavenumber `-K/2` is its own partner on the collocation grid.
    fn conjugate_partner(&self, index: usize) -> usize {
        match self.boundary {
            Boundary::Dirichlet => index,
            Boundary::Periodic => {
                let half = (self.modes / 2) as i64;
                let k = self.wavevector(index);
                let neg: Vec<i64> = k.iter().map(|&x| if x == -half { x } else { -x }).collect();
                self.index_of(&neg).expect("negated wavevector is in band")
            }
        }
    }

    pub(crate) fn conj_index(&self) -> &[usize] {
        &self.conj_index
    }

    /// Same box with `factor` times as many modes per axis (periodic only).
    pub fn refined(&self, factor: usize) -> Result<Self> {
        if self.boundary != Boundary::Periodic {
            return Err(Error::Unsupported("refinement is implemented for periodic grids".into()));
        }
        Self::new(self.dim, self.modes * factor, self.boundary, &self.lengths)
    }

    pub(crate) fn plans(&self) -> &Plans<T> {
        &self.plans
    }
}

impl<T: Real> Plans<T> {
    pub(crate) fn forward(&self) -> &dyn Fft<T> {
        self.forward.as_ref()
    }

    pub(crate) fn inverse(&self) -> &dyn Fft<T> {
        self.inverse.as_ref()
    }
}
