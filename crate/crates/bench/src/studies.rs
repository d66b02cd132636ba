//! The three study drivers and the single-trajectory `evolve` run.

use std::time::Instant;

use nls_core::observables::ObservableSample;
use nls_core::schemes::{evolve, evolve_with, Trajectory};
use nls_core::spectral::{load_snapshot, rough_data};
use nls_core::{Field64, Scheme, StepperConfig64};
use rayon::prelude::*;

use crate::config::{StudyConfig, StudyKind};
use crate::error::{BenchError, Result};
use crate::fit::fit_order;
use crate::output::{Metric, Row};

/// Outcome of one `(scheme, τ)` trajectory.
#[derive(Clone, Debug)]
pub struct Cell {
    pub scheme: Scheme,
    pub tau: f64,
    pub steps: usize,
    /// Solver failure message; failed cells carry NaN metrics and stay out of fits.
    pub failure: Option<String>,
    /// L² distance to the reference at `T` (NaN when there is no reference).
    pub l2_error: f64,
    pub max_fp_iterations: usize,
    /// Largest `‖φ(u)‖_σ / ‖u‖_σ` over the steps taken, `σ = d/2 + 0.1` (symmetric scheme only).
    pub apriori_ratio: Option<f64>,
    pub wall_ms: f64,
    pub samples: Vec<ObservableSample<f64>>,
}

impl Cell {
    pub fn failed(&self) -> bool {
        self.failure.is_some()
    }

    /// Largest relative deviation of the mass from its initial value.
    pub fn mass_drift(&self) -> f64 {
        let m0 = self.samples.first().map_or(f64::NAN, |s| s.mass);
        self.samples.iter().map(|s| ((s.mass - m0) / m0).abs()).fold(0.0, f64::max)
    }

    /// Largest `|E(t)/E₀ − 1|`.
    pub fn energy_drift(&self) -> f64 {
        let e0 = self.samples.first().map_or(f64::NAN, |s| s.energy);
        self.samples.iter().map(|s| (s.energy / e0 - 1.0).abs()).fold(0.0, f64::max)
    }
}

#[derive(Clone, Debug)]
pub struct StudyReport {
    pub config: StudyConfig,
    pub rows: Vec<Row>,
    pub cells: Vec<Cell>,
    /// Per scheme, `None` when too few cells survived for a fit.
    pub fitted_orders: Vec<(Scheme, Option<f64>)>,
    /// A-priori ratio of the reference trajectory, when one was computed.
    pub reference_apriori_ratio: Option<f64>,
}

impl StudyReport {
    pub fn order(&self, scheme: Scheme) -> Option<f64> {
        self.fitted_orders.iter().find(|(s, _)| *s == scheme).and_then(|(_, o)| *o)
    }

    pub fn cell(&self, scheme: Scheme, tau: f64) -> Option<&Cell> {
        self.cells.iter().find(|c| c.scheme == scheme && c.tau == tau)
    }

    pub fn failed_cells(&self) -> usize {
        self.cells.iter().filter(|c| c.failed()).count()
    }

    /// Worst a-priori ratio over the reference and every accepted symmetric step.
    pub fn max_apriori_ratio(&self) -> Option<f64> {
        self.cells
            .iter()
            .filter(|c| !c.failed())
            .filter_map(|c| c.apriori_ratio)
            .chain(self.reference_apriori_ratio)
            .reduce(f64::max)
    }
}

pub fn initial_data(cfg: &StudyConfig) -> Result<Field64> {
    Ok(rough_data(&cfg.grid()?, cfg.alpha, cfg.seed, cfg.target_norm)?)
}

pub fn run_study(cfg: &StudyConfig, jobs: Option<usize>) -> Result<StudyReport> {
    match cfg.kind {
        StudyKind::Convergence => run_convergence(cfg, jobs),
        StudyKind::Conservation => run_conservation(cfg, jobs),
        StudyKind::Timing => run_timing(cfg),
    }
}

fn apriori_order(cfg: &StudyConfig) -> f64 {
    cfg.d as f64 / 2.0 + 0.1
}

/// Evolves `u0` to `T`, recording the a-priori ratio when the scheme is symmetric.
fn trajectory(
    cfg: &StudyConfig,
    u0: &Field64,
    stepper: &StepperConfig64,
    stride: usize,
) -> nls_core::Result<(Trajectory<f64>, Option<f64>)> {
    let n = cfg.steps_for(stepper.tau);
    if stepper.scheme != Scheme::SymmetricLowReg {
        return Ok((evolve(u0, stepper, n, stride)?, None));
    }
    let sigma = apriori_order(cfg);
    let mut ratio: f64 = 0.0;
    let traj = evolve_with(u0, stepper, n, stride, &[], |ev| {
        ratio = ratio.max(ev.after.sobolev_norm(sigma) / ev.before.sobolev_norm(sigma));
    })?;
    Ok((traj, Some(ratio)))
}

fn run_cell(
    cfg: &StudyConfig,
    u0: &Field64,
    scheme: Scheme,
    tau: f64,
    stride: usize,
    reference: Option<&Field64>,
) -> Cell {
    let steps = cfg.steps_for(tau);
    let start = Instant::now();
    let result = trajectory(cfg, u0, &cfg.stepper(scheme, tau), stride);
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    match result {
        Ok((traj, apriori_ratio)) => Cell {
            scheme,
            tau,
            steps,
            failure: None,
            l2_error: reference.map_or(f64::NAN, |r| traj.final_state.distance(r)),
            max_fp_iterations: traj.max_iterations,
            apriori_ratio,
            wall_ms,
            samples: traj.samples,
        },
        Err(e) => Cell {
            scheme,
            tau,
            steps,
            failure: Some(e.to_string()),
            l2_error: f64::NAN,
            max_fp_iterations: 0,
            apriori_ratio: None,
            wall_ms: f64::NAN,
            samples: Vec::new(),
        },
    }
}

fn reference_solution(cfg: &StudyConfig, u0: &Field64) -> Result<(Field64, Option<f64>)> {
    let stepper = cfg.stepper(Scheme::SymmetricLowReg, cfg.tau_ref);
    let n = cfg.steps_for(cfg.tau_ref);
    let (traj, ratio) = trajectory(cfg, u0, &stepper, n).map_err(BenchError::Reference)?;
    Ok((traj.final_state, ratio))
}

fn with_pool<R: Send>(jobs: Option<usize>, work: impl FnOnce() -> R + Send) -> R {
    match jobs {
        Some(n) => rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build().expect("thread pool").install(work),
        None => work(),
    }
}

fn grid_cells(cfg: &StudyConfig) -> Vec<(Scheme, f64)> {
    cfg.schemes.iter().flat_map(|&s| cfg.tau_ladder.iter().map(move |&t| (s, t))).collect()
}

fn fit_rows(cfg: &StudyConfig, cells: &[Cell], rows: &mut Vec<Row>) -> Vec<(Scheme, Option<f64>)> {
    cfg.schemes
        .iter()
        .map(|&scheme| {
            let points: Vec<(f64, f64)> =
                cells.iter().filter(|c| c.scheme == scheme && !c.failed()).map(|c| (c.tau, c.l2_error)).collect();
            let order = fit_order(&points, cfg.fit_window).ok();
            rows.push(Row::new(cfg, scheme, Metric::FittedOrder, order.unwrap_or(f64::NAN)));
            (scheme, order)
        })
        .collect()
}

fn iteration_row(cfg: &StudyConfig, cell: &Cell) -> Option<Row> {
    (cell.scheme == Scheme::SymmetricLowReg).then(|| {
        let value = if cell.failed() { f64::NAN } else { cell.max_fp_iterations as f64 };
        Row::new(cfg, cell.scheme, Metric::FpIters, value).at(cell.tau, cfg.final_time)
    })
}

/// Error at `T` against a fine symmetric reference for every `(scheme, τ)` cell, plus
/// fitted orders. Cells run in parallel on at most `jobs` workers.
pub fn run_convergence(cfg: &StudyConfig, jobs: Option<usize>) -> Result<StudyReport> {
    let u0 = initial_data(cfg)?;
    let (reference, reference_ratio) = reference_solution(cfg, &u0)?;
    let cells: Vec<Cell> = with_pool(jobs, || {
        grid_cells(cfg)
            .par_iter()
            .map(|&(scheme, tau)| {
                let n = cfg.steps_for(tau);
                run_cell(cfg, &u0, scheme, tau, n, Some(&reference))
            })
            .collect()
    });
    let mut rows = Vec::new();
    for cell in &cells {
        rows.push(Row::new(cfg, cell.scheme, Metric::L2Error, cell.l2_error).at(cell.tau, cfg.final_time));
        rows.extend(iteration_row(cfg, cell));
    }
    let fitted_orders = fit_rows(cfg, &cells, &mut rows);
    Ok(StudyReport { config: cfg.clone(), rows, cells, fitted_orders, reference_apriori_ratio: reference_ratio })
}

/// Mass and relative energy every `observer_stride` steps up to `T`.
pub fn run_conservation(cfg: &StudyConfig, jobs: Option<usize>) -> Result<StudyReport> {
    let u0 = initial_data(cfg)?;
    let cells: Vec<Cell> = with_pool(jobs, || {
        grid_cells(cfg)
            .par_iter()
            .map(|&(scheme, tau)| run_cell(cfg, &u0, scheme, tau, cfg.observer_stride, None))
            .collect()
    });
    let mut rows = Vec::new();
    for cell in &cells {
        if cell.failed() {
            for metric in [Metric::Mass, Metric::RelEnergy] {
                rows.push(Row::new(cfg, cell.scheme, metric, f64::NAN).at(cell.tau, cfg.final_time));
            }
        }
        let e0 = cell.samples.first().map_or(f64::NAN, |s| s.energy);
        for s in &cell.samples {
            rows.push(Row::new(cfg, cell.scheme, Metric::Mass, s.mass).at(cell.tau, s.time));
            rows.push(Row::new(cfg, cell.scheme, Metric::RelEnergy, s.energy / e0).at(cell.tau, s.time));
        }
        rows.extend(iteration_row(cfg, cell));
    }
    Ok(StudyReport { config: cfg.clone(), rows, cells, fitted_orders: Vec::new(), reference_apriori_ratio: None })
}

/// Wall time and final error per cell on a single worker, after one untimed warm-up run.
pub fn run_timing(cfg: &StudyConfig) -> Result<StudyReport> {
    let u0 = initial_data(cfg)?;
    let (reference, reference_ratio) = reference_solution(cfg, &u0)?;
    let plan = grid_cells(cfg);
    if let Some(&(scheme, tau)) = plan.first() {
        run_cell(cfg, &u0, scheme, tau, cfg.steps_for(tau), None);
    }
    let cells: Vec<Cell> = plan
        .iter()
        .map(|&(scheme, tau)| run_cell(cfg, &u0, scheme, tau, cfg.steps_for(tau), Some(&reference)))
        .collect();
    let mut rows = Vec::new();
    for cell in &cells {
        rows.push(Row::new(cfg, cell.scheme, Metric::WallMs, cell.wall_ms).at(cell.tau, cfg.final_time));
        rows.push(Row::new(cfg, cell.scheme, Metric::L2Error, cell.l2_error).at(cell.tau, cfg.final_time));
    }
    Ok(StudyReport {
        config: cfg.clone(),
        rows,
        cells,
        fitted_orders: Vec::new(),
        reference_apriori_ratio: reference_ratio,
    })
}

/// Runs the `[evolve]` section: from the input snapshot if given, else from the study's rough data.
pub fn run_evolve(cfg: &StudyConfig) -> Result<(Field64, Trajectory<f64>)> {
    let u0 = match &cfg.evolve.input {
        Some(path) => load_snapshot(path)?,
        None => initial_data(cfg)?,
    };
    let stepper = cfg.stepper(cfg.evolve.scheme, cfg.evolve.tau);
    let stride = cfg.observer_stride.min(cfg.evolve.n_steps.max(1));
    let traj = evolve(&u0, &stepper, cfg.evolve.n_steps, stride)?;
    Ok((u0, traj))
}
