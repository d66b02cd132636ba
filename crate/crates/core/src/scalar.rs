//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use rustfft::FftNum;

/// Real floating-point type the solvers are generic over (`f32` or `f64`).
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + FftNum + Default + Debug + Display + Send + Sync + 'static
{
    /// Converts an `f64` literal. Every `Real` represents all finite `f64` values up to rounding.
    #[inline]
    fn lit(x: f64) -> Self {
        <Self as FromPrimitive>::from_f64(x).expect("f64 literal must convert")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        <Self as FromPrimitive>::from_usize(n).expect("usize must convert")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        ToPrimitive::to_f64(&self).expect("real must convert to f64")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex number over a [`Real`].
pub type Cplx<T> = Complex<T>;

#[inline]
pub(crate) fn cis<T: Real>(theta: T) -> Cplx<T> {
    Cplx::new(theta.cos(), theta.sin())
}

/// `exp(-i t λ)` with the rounding error of the product `t λ` carried as a first-order correction,
/// so that large phases stay accurate to a few ulps.
pub(crate) fn cis_neg_product<T: Real>(t: T, lambda: T) -> Cplx<T> {
    let p = t * lambda;
    let err = t.mul_add(lambda, -p);
    cis(-p) * Cplx::new(T::one(), -err)
}

/// Squared Euclidean norm of a coefficient slice.
pub(crate) fn norm_sqr<T: Real>(values: &[Cplx<T>]) -> T {
    values.iter().fold(T::zero(), |acc, c| acc + c.norm_sqr())
}
