use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use nls_bench::{
    resolve, run_selftest, run_study, write_csv, write_sidecar, BenchError, ConfigSources, Profile, StudyConfig,
    StudyKind, StudyReport,
};
use nls_core::spectral::save_snapshot;

#[derive(Parser)]
#[command(name = "nlsbench", version, about = "Convergence, conservation and timing studies for cubic NLS integrators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Error-vs-τ ladders against a fine reference, with fitted orders.
    Converge(Common),
    /// Mass and relative-energy series over long times.
    Conserve(Common),
    /// Wall time and error per (scheme, τ) on one worker.
    Timing(Common),
    /// One trajectory from the `[evolve]` section, written as a field snapshot.
    Evolve(Common),
    /// Oracle, identity and estimate checks.
    Selftest,
}

#[derive(Args, Clone, Debug, Default)]
struct Common {
    /// TOML study file; keys override the profile defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Worker threads for independent cells.
    #[arg(long)]
    jobs: Option<usize>,
    /// Output path (CSV, or the snapshot for `evolve`).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "fast", value_parser = ["fast", "paper"])]
    profile: String,
    /// Override any key, e.g. `--set solver.fp_tol=1e-10`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Shorthand for `--set alpha=A`.
    #[arg(long)]
    alpha: Option<f64>,
    /// Restrict to these schemes (for `evolve`: the scheme to run). Repeatable.
    #[arg(long)]
    scheme: Vec<String>,
    /// Shorthand for `--set seed=N`.
    #[arg(long)]
    seed: Option<u64>,
}

impl Common {
    fn overrides(&self, evolve: bool) -> Vec<String> {
        let mut out = Vec::new();
        if let Some(a) = self.alpha {
            out.push(format!("alpha={a:?}"));
        }
        if let Some(s) = self.seed {
            out.push(format!("seed={s}"));
        }
        if evolve {
            if let Some(s) = self.scheme.last() {
                out.push(format!("evolve.scheme=\"{s}\""));
            }
        } else if !self.scheme.is_empty() {
            let list: Vec<String> = self.scheme.iter().map(|s| format!("\"{s}\"")).collect();
            out.push(format!("schemes=[{}]", list.join(", ")));
        }
        if let (Some(out_path), false) = (&self.out, evolve) {
            out.push(format!("output_path={:?}", out_path.display().to_string()));
        }
        out.extend(self.set.iter().cloned());
        out
    }

    fn resolve(
        &self,
        kind: Option<StudyKind>,
        evolve: bool,
    ) -> Result<(StudyConfig, Profile, Vec<String>), BenchError> {
        let profile: Profile = self.profile.parse()?;
        let overrides = self.overrides(evolve);
        let cfg = resolve(kind, &ConfigSources { profile, file: self.config.as_deref(), overrides: &overrides })?;
        Ok((cfg, profile, overrides))
    }
}

enum Failure {
    Config(String),
    Cells(usize),
    Other(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Other(e)
    }
}

impl From<BenchError> for Failure {
    fn from(e: BenchError) -> Self {
        match e {
            BenchError::Config { .. } => Failure::Config(e.to_string()),
            other => Failure::Other(other.into()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Converge(c) => study(c, StudyKind::Convergence),
        Command::Conserve(c) => study(c, StudyKind::Conservation),
        Command::Timing(c) => study(c, StudyKind::Timing),
        Command::Evolve(c) => evolve(c),
        Command::Selftest => selftest(),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("config error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Cells(n)) => {
            eprintln!("{n} cell(s) failed; see NaN rows in the CSV");
            ExitCode::from(2)
        }
        Err(Failure::Other(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn study(common: &Common, kind: StudyKind) -> Result<(), Failure> {
    let (cfg, profile, overrides) = common.resolve(Some(kind), false)?;
    let report = run_study(&cfg, common.jobs)?;
    write_csv(&report.rows, &cfg.output_path)?;
    let meta = write_sidecar(&cfg, profile, &overrides, &cfg.output_path)?;
    print_summary(&report);
    println!("wrote {} ({} rows) and {}", cfg.output_path.display(), report.rows.len(), meta.display());
    match report.failed_cells() {
        0 => Ok(()),
        n => {
            for cell in report.cells.iter().filter(|c| c.failed()) {
                eprintln!("failed: {} tau={} ({})", cell.scheme, cell.tau, cell.failure.as_deref().unwrap_or(""));
            }
            Err(Failure::Cells(n))
        }
    }
}

fn print_summary(report: &StudyReport) {
    let cfg = &report.config;
    println!(
        "{} study: {} d={} K={} alpha={} seed={} T={}",
        cfg.kind, cfg.boundary, cfg.d, cfg.modes, cfg.alpha, cfg.seed, cfg.final_time
    );
    match cfg.kind {
        StudyKind::Convergence => {
            println!("{:<10} {:>13}", "scheme", "fitted order");
            for (scheme, order) in &report.fitted_orders {
                match order {
                    Some(p) => println!("{:<10} {:>13.3}", scheme.name(), p),
                    None => println!("{:<10} {:>13}", scheme.name(), "n/a"),
                }
            }
        }
        StudyKind::Conservation => {
            println!("{:<10} {:>8} {:>14} {:>14} {:>9}", "scheme", "tau", "mass drift", "energy drift", "fp iters");
            for c in &report.cells {
                println!(
                    "{:<10} {:>8} {:>14.3e} {:>14.3e} {:>9}",
                    c.scheme.name(),
                    c.tau,
                    c.mass_drift(),
                    c.energy_drift(),
                    c.max_fp_iterations
                );
            }
        }
        StudyKind::Timing => {
            println!("{:<10} {:>12} {:>10} {:>12}", "scheme", "tau", "wall ms", "l2 error");
            for c in &report.cells {
                println!("{:<10} {:>12} {:>10.2} {:>12.3e}", c.scheme.name(), c.tau, c.wall_ms, c.l2_error);
            }
        }
    }
}

fn evolve(common: &Common) -> Result<(), Failure> {
    let (cfg, _, _) = common.resolve(None, true)?;
    let out = common.out.clone().unwrap_or_else(|| cfg.output_path.with_extension("nlsf"));
    let (u0, traj) = nls_bench::run_evolve(&cfg)?;
    if let Some(dir) = out.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    save_snapshot(&traj.final_state, &out).with_context(|| format!("writing {}", out.display()))?;
    let first = traj.samples.first().expect("initial sample");
    let last = traj.samples.last().expect("final sample");
    println!(
        "{} x {} steps of tau={} on {} K={}: mass {:.12} -> {:.12}, energy {:.12} -> {:.12}, max fp iterations {}",
        cfg.evolve.scheme,
        traj.steps,
        cfg.evolve.tau,
        u0.grid().boundary(),
        u0.grid().modes_per_axis(),
        first.mass,
        last.mass,
        first.energy,
        last.energy,
        traj.max_iterations
    );
    println!("wrote {}", out.display());
    Ok(())
}

fn selftest() -> Result<(), Failure> {
    let outcomes = run_selftest();
    for o in &outcomes {
        println!("{o}");
    }
    let failed = outcomes.iter().filter(|o| !o.passed()).count();
    println!("{} properties, {failed} failed", outcomes.len());
    if failed > 0 {
        return Err(Failure::Other(anyhow::anyhow!("{failed} selftest properties failed")));
    }
    Ok(())
}
