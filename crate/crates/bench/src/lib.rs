//! Study harness around `nls-core`: convergence ladders with fitted orders, long-time
//! conservation and timing runs, written as CSV with a TOML metadata sidecar.

pub mod config;
pub mod error;
pub mod fit;
pub mod output;
pub mod selftest;
pub mod studies;

pub use config::{resolve, ConfigSources, EvolveConfig, Profile, SolverConfig, StudyConfig, StudyKind};
pub use error::{BenchError, Result};
pub use fit::fit_order;
pub use output::{sidecar_path, write_csv, write_sidecar, Metric, Row, CSV_HEADER};
pub use selftest::{run_selftest, PropertyOutcome};
pub use studies::{
    initial_data, run_conservation, run_convergence, run_evolve, run_study, run_timing, Cell, StudyReport,
};
