use super::field::SpectralField;
use crate::error::{Error, Result};
use crate::scalar::{cis, cis_neg_product, Cplx, Real};

/// Diagonal functions of `Δ`, each acting as one scalar multiplier per eigenmode.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum OperatorSpec<T: Real> {
    /// `e^{itΔ}`: multiplier `exp(-i t λ)`.
    Semigroup(T),
    /// `φ₁(aΔ)`: multiplier `φ₁(-a λ)`.
    Phi1(Cplx<T>),
    /// `(-Δ)^γ`: multiplier `λ^γ`.
    FracLaplacian(T),
    /// `(e^{itΔ} - 1)(-tΔ)^{-γ}`: multiplier `(exp(-itλ) - 1)/(tλ)^γ`, zero on the kernel.
    FracSemigroupDiff { t: T, gamma: T },
}

fn taylor_threshold<T: Real>() -> T {
    if T::epsilon() < T::lit(1e-10) {
        T::lit(1e-4)
    } else {
        T::epsilon().powf(T::lit(0.2))
    }
}

/// `φ₁(z) = (e^z - 1)/z` with `φ₁(0) = 1`.
pub fn phi1<T: Real>(z: Cplx<T>) -> Cplx<T> {
    if z.re == T::zero() {
        return phi1_imag(z.im);
    }
    if z.norm() < taylor_threshold() {
        let c = |x: f64| Cplx::new(T::lit(x), T::zero());
        return c(1.0) + z * (c(0.5) + z * (c(1.0 / 6.0) + z * c(1.0 / 24.0)));
    }
    (z.exp() - Cplx::new(T::one(), T::zero())) / z
}

/// `φ₁(iθ) = e^{iθ/2} sin(θ/2)/(θ/2)`, free of cancellation.
pub fn phi1_imag<T: Real>(theta: T) -> Cplx<T> {
    let half = theta * T::lit(0.5);
    let sinc = if half.abs() < taylor_threshold() { T::one() - half * half / T::lit(6.0) } else { half.sin() / half };
    cis(half) * sinc
}

/// `exp(-iθ) - 1` evaluated as `-2i sin(θ/2) e^{-iθ/2}`.
pub(crate) fn expm1_neg_i<T: Real>(theta: T) -> Cplx<T> {
    let half = theta * T::lit(0.5);
    Cplx::new(T::zero(), -(half.sin() + half.sin())) * cis(-half)
}

impl<T: Real> OperatorSpec<T> {
    pub fn validate(&self) -> Result<()> {
        let finite = match *self {
            OperatorSpec::Semigroup(t) => t.is_finite(),
            OperatorSpec::Phi1(a) => a.re.is_finite() && a.im.is_finite(),
            OperatorSpec::FracLaplacian(g) => g.is_finite(),
            OperatorSpec::FracSemigroupDiff { t, gamma } => t.is_finite() && gamma.is_finite(),
        };
        if !finite {
            return Err(Error::InvalidParameter(format!("operator parameter is not finite: {self:?}")));
        }
        match *self {
            OperatorSpec::FracLaplacian(g) | OperatorSpec::FracSemigroupDiff { gamma: g, .. }
                if g < T::zero() || g > T::one() =>
            {
                Err(Error::InvalidParameter(format!("fractional exponent must lie in [0, 1], got {g}")))
            }
            _ => Ok(()),
        }
    }

    /// Scalar multiplier at eigenvalue `λ ≥ 0`.
    pub fn multiplier(&self, lambda: T) -> Cplx<T> {
        match *self {
            OperatorSpec::Semigroup(t) => cis_neg_product(t, lambda),
            OperatorSpec::Phi1(a) => phi1(-a * lambda),
            OperatorSpec::FracLaplacian(g) => Cplx::new(lambda.powf(g), T::zero()),
            OperatorSpec::FracSemigroupDiff { t, gamma } => {
                if lambda == T::zero() {
                    Cplx::new(T::zero(), T::zero())
                } else {
                    expm1_neg_i(t * lambda) / (t.abs() * lambda).powf(gamma)
                }
            }
        }
    }
}

/// Applies a diagonal operator mode by mode.
pub fn apply_operator<T: Real>(field: &SpectralField<T>, op: OperatorSpec<T>) -> Result<SpectralField<T>> {
    op.validate()?;
    Ok(field.map_eigen(|lambda| op.multiplier(lambda)))
}

impl<T: Real> SpectralField<T> {
    /// [`apply_operator`] for already-validated operators. Panics on invalid parameters.
    pub fn apply(&self, op: OperatorSpec<T>) -> SpectralField<T> {
        apply_operator(self, op).expect("invalid operator parameter")
    }
}
