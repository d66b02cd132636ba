//! CSV rows and the metadata sidecar.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::{Profile, StudyConfig};
use crate::error::{BenchError, Result};

pub const CSV_HEADER: &str = "study,scheme,boundary,d,K,alpha,seed,tau,t,metric,value";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    L2Error,
    Mass,
    RelEnergy,
    WallMs,
    FittedOrder,
    FpIters,
}

/// One CSV line. `tau` and `t` are empty for per-scheme summaries.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Row {
    pub study: &'static str,
    pub scheme: &'static str,
    pub boundary: &'static str,
    pub d: usize,
    #[serde(rename = "K")]
    pub modes: usize,
    pub alpha: f64,
    pub seed: u64,
    pub tau: Option<f64>,
    pub t: Option<f64>,
    pub metric: Metric,
    pub value: f64,
}

impl Row {
    pub fn new(cfg: &StudyConfig, scheme: nls_core::Scheme, metric: Metric, value: f64) -> Self {
        Row {
            study: cfg.kind.name(),
            scheme: scheme.name(),
            boundary: cfg.boundary.name(),
            d: cfg.d,
            modes: cfg.modes,
            alpha: cfg.alpha,
            seed: cfg.seed,
            tau: None,
            t: None,
            metric,
            value,
        }
    }

    pub fn at(mut self, tau: f64, t: f64) -> Self {
        self.tau = Some(tau);
        self.t = Some(t);
        self
    }
}

pub fn write_csv(rows: &[Row], path: &Path) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| BenchError::io(dir, e))?;
    }
    let file = fs::File::create(path).map_err(|e| BenchError::io(path, e))?;
    let mut w = csv::Writer::from_writer(file);
    if rows.is_empty() {
        w.write_record(CSV_HEADER.split(','))?;
    }
    for row in rows {
        w.serialize(row)?;
    }
    w.flush().map_err(|e| BenchError::io(path, e))?;
    Ok(())
}

/// `results/x.csv` → `results/x.meta.toml`.
pub fn sidecar_path(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("meta.toml")
}

pub fn write_sidecar(cfg: &StudyConfig, profile: Profile, overrides: &[String], csv_path: &Path) -> Result<PathBuf> {
    let path = sidecar_path(csv_path);
    fs::write(&path, cfg.echo(profile, overrides)).map_err(|e| BenchError::io(&path, e))?;
    Ok(path)
}
