use crate::error::{BenchError, Result};

/// Ordinary least-squares slope of `ln(error)` against `ln(τ)`.
///
/// Points outside `window` (inclusive τ bounds) are dropped first; non-finite or
/// non-positive errors are never usable.
pub fn fit_order(points: &[(f64, f64)], window: Option<[f64; 2]>) -> Result<f64> {
    let usable: Vec<(f64, f64)> = points
        .iter()
        .copied()
        .filter(|&(tau, err)| tau > 0.0 && err.is_finite() && err > 0.0)
        .filter(|&(tau, _)| window.is_none_or(|[lo, hi]| tau >= lo && tau <= hi))
        .map(|(tau, err)| (tau.ln(), err.ln()))
        .collect();
    if usable.len() < 3 {
        return Err(BenchError::InsufficientData { points: usable.len() });
    }
    let n = usable.len() as f64;
    let mx = usable.iter().map(|p| p.0).sum::<f64>() / n;
    let my = usable.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = usable.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = usable.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(BenchError::InsufficientData { points: 1 });
    }
    Ok(sxy / sxx)
}
