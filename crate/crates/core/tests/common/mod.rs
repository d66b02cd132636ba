#![allow(dead_code)]

use nls_core::{Complex64, Field64, Grid64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform complex coefficients in `[-1, 1]²` on modes with `max |k_a| <= band` (all modes when `band` is `None`).
pub fn random_field(grid: &Grid64, band: Option<i64>, rng: &mut ChaCha8Rng) -> Field64 {
    Field64::from_fn(grid, |k| {
        let re = rng.gen_range(-1.0..1.0);
        let im = rng.gen_range(-1.0..1.0);
        match band {
            Some(b) if k.iter().any(|x| x.abs() > b) => Complex64::new(0.0, 0.0),
            _ => Complex64::new(re, im),
        }
    })
}

/// Least-squares slope of `ln(err)` against `ln(tau)`.
pub fn slope(taus: &[f64], errs: &[f64]) -> f64 {
    let n = taus.len() as f64;
    let xs: Vec<f64> = taus.iter().map(|t| t.ln()).collect();
    let ys: Vec<f64> = errs.iter().map(|e| e.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}
