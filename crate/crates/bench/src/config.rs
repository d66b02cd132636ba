//! Study configuration: profile defaults, TOML files and `key=value` overrides.
//!
//! Resolution order is defaults < file < overrides. Merging happens on the raw TOML tree,
//! and the merged tree is deserialized once, so unknown keys are rejected wherever they
//! come from.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use nls_core::{Boundary, Grid64, Scheme, StepperConfig64};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{BenchError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StudyKind {
    Convergence,
    Conservation,
    Timing,
}

impl StudyKind {
    pub fn name(self) -> &'static str {
        match self {
            StudyKind::Convergence => "convergence",
            StudyKind::Conservation => "conservation",
            StudyKind::Timing => "timing",
        }
    }
}

impl fmt::Display for StudyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Profile {
    /// Desk-scale sizes that finish in seconds.
    #[default]
    Fast,
    /// Sizes of the published figures.
    Paper,
}

impl Profile {
    pub fn name(self) -> &'static str {
        match self {
            Profile::Fast => "fast",
            Profile::Paper => "paper",
        }
    }
}

impl FromStr for Profile {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fast" => Ok(Profile::Fast),
            "paper" => Ok(Profile::Paper),
            other => Err(BenchError::config("--profile", format!("unknown profile `{other}` (fast|paper)"))),
        }
    }
}

/// Fixed-point solver and product options shared by every stepper in a study.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverConfig {
    pub fp_tol: f64,
    pub fp_max_iter: usize,
    pub dealias: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { fp_tol: 1e-12, fp_max_iter: 50, dealias: false }
    }
}

/// Single-run settings for the `evolve` command.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvolveConfig {
    #[serde(with = "scheme_name")]
    pub scheme: Scheme,
    pub tau: f64,
    pub n_steps: usize,
    /// Snapshot to start from; rough data from the study keys when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<PathBuf>,
}

impl Default for EvolveConfig {
    fn default() -> Self {
        EvolveConfig { scheme: Scheme::SymmetricLowReg, tau: 0.01, n_steps: 100, input: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StudyConfig {
    pub kind: StudyKind,
    #[serde(with = "boundary_name")]
    pub boundary: Boundary,
    #[serde(rename = "K")]
    pub modes: usize,
    pub d: usize,
    pub alpha: f64,
    pub seed: u64,
    #[serde(rename = "T")]
    pub final_time: f64,
    pub tau_ladder: Vec<f64>,
    pub tau_ref: f64,
    #[serde(with = "scheme_list")]
    pub schemes: Vec<Scheme>,
    pub observer_stride: usize,
    pub output_path: PathBuf,
    pub target_norm: f64,
    /// Inclusive τ range used by the order fit.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fit_window: Option<[f64; 2]>,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default)]
    pub evolve: EvolveConfig,
}

fn dyadic_ladder(from: i32, to: i32) -> Vec<f64> {
    (from..=to).map(|j| 2f64.powi(-j)).collect()
}

impl StudyConfig {
    pub fn defaults(kind: StudyKind, profile: Profile) -> Self {
        let fast = profile == Profile::Fast;
        let base = StudyConfig {
            kind,
            boundary: Boundary::Periodic,
            modes: if fast { 256 } else { 2048 },
            d: 1,
            alpha: 3.0,
            seed: 1,
            final_time: 1.0,
            tau_ladder: if fast { dyadic_ladder(4, 9) } else { dyadic_ladder(4, 12) },
            tau_ref: if fast { 2f64.powi(-15) } else { 2f64.powi(-18) },
            schemes: Scheme::ALL.to_vec(),
            observer_stride: 1,
            output_path: PathBuf::from(format!("results/{kind}.csv")),
            target_norm: 1.0,
            fit_window: None,
            solver: SolverConfig::default(),
            evolve: EvolveConfig::default(),
        };
        match kind {
            StudyKind::Convergence | StudyKind::Timing => base,
            StudyKind::Conservation => StudyConfig {
                modes: 512,
                alpha: 2.0,
                final_time: 50.0,
                tau_ladder: vec![0.05],
                tau_ref: 0.05,
                observer_stride: if fast { 10 } else { 1 },
                ..base
            },
        }
    }

    /// Grid with the default domain: `[0, 2π)^d` or `[0, 1]`.
    pub fn grid(&self) -> Result<Grid64> {
        let grid = match self.boundary {
            Boundary::Periodic => Grid64::periodic(self.d, self.modes),
            Boundary::Dirichlet if self.d == 1 => Grid64::dirichlet(self.modes),
            Boundary::Dirichlet => Grid64::new(self.d, self.modes, self.boundary, &[1.0; 3][..self.d]),
        };
        grid.map_err(|e| BenchError::config("grid", e.to_string()))
    }

    pub fn stepper(&self, scheme: Scheme, tau: f64) -> StepperConfig64 {
        StepperConfig64 {
            fp_tol: self.solver.fp_tol,
            fp_max_iter: self.solver.fp_max_iter,
            dealias: self.solver.dealias,
            ..StepperConfig64::new(scheme, tau)
        }
    }

    /// Number of steps of size `tau` needed to reach `T`.
    pub fn steps_for(&self, tau: f64) -> usize {
        (self.final_time / tau).round() as usize
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |key: &str, msg: String| Err(BenchError::config(key, msg));
        self.grid()?;
        if !(self.final_time.is_finite() && self.final_time > 0.0) {
            return bad("T", format!("final time must be positive, got {}", self.final_time));
        }
        if self.tau_ladder.is_empty() {
            return bad("tau_ladder", "ladder is empty".into());
        }
        if self.schemes.is_empty() {
            return bad("schemes", "no schemes selected".into());
        }
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return bad("alpha", format!("regularity must be positive, got {}", self.alpha));
        }
        if !(self.target_norm > 0.0 && self.target_norm.is_finite()) {
            return bad("target_norm", format!("must be positive, got {}", self.target_norm));
        }
        if self.observer_stride == 0 {
            return bad("observer_stride", "must be at least 1".into());
        }
        if self.solver.fp_tol.is_nan() || self.solver.fp_tol <= 0.0 || self.solver.fp_max_iter == 0 {
            return bad("solver", "fp_tol must be positive and fp_max_iter at least 1".into());
        }
        let mut taus = self.tau_ladder.clone();
        if self.kind != StudyKind::Conservation {
            taus.push(self.tau_ref);
        }
        for tau in taus {
            if !(tau > 0.0 && tau.is_finite()) {
                return bad("tau_ladder", format!("time steps must be positive, got {tau}"));
            }
            let n = self.steps_for(tau);
            if n == 0 || (n as f64 * tau - self.final_time).abs() > 1e-9 * self.final_time {
                return bad("tau_ladder", format!("T = {} is not an integer multiple of τ = {tau}", self.final_time));
            }
        }
        if self.kind != StudyKind::Conservation {
            let min = self.tau_ladder.iter().copied().fold(f64::INFINITY, f64::min);
            if self.tau_ref > min / 50.0 {
                return bad(
                    "tau_ref",
                    format!("tau_ref = {} exceeds min(tau_ladder)/50 = {}", self.tau_ref, min / 50.0),
                );
            }
        }
        if let Some([lo, hi]) = self.fit_window {
            if lo.is_nan() || hi.is_nan() || lo >= hi {
                return bad("fit_window", format!("empty window [{lo}, {hi}]"));
            }
        }
        if !(self.evolve.tau.is_finite() && self.evolve.tau != 0.0) {
            return bad("evolve.tau", format!("time step must be nonzero, got {}", self.evolve.tau));
        }
        Ok(())
    }

    /// Serialized form with a provenance comment; loadable again as a config file.
    pub fn echo(&self, profile: Profile, overrides: &[String]) -> String {
        let mut out = format!("# nlsbench {}\n# profile: {}\n", env!("CARGO_PKG_VERSION"), profile.name());
        for o in overrides {
            out.push_str(&format!("# override: {o}\n"));
        }
        out.push_str(&toml::to_string(self).expect("config serializes"));
        out
    }
}

/// Where the pieces of a configuration come from.
#[derive(Clone, Debug, Default)]
pub struct ConfigSources<'a> {
    pub profile: Profile,
    pub file: Option<&'a Path>,
    /// `key=value` pairs; dotted keys reach into `[solver]` and `[evolve]`.
    pub overrides: &'a [String],
}

/// Merges defaults, file and overrides, then validates.
///
/// With `kind = Some(..)` the study kind is fixed by the caller and a file that asks for a
/// different one is rejected; with `None` the file (or the convergence default) decides.
pub fn resolve(kind: Option<StudyKind>, sources: &ConfigSources<'_>) -> Result<StudyConfig> {
    let file_table = match sources.file {
        Some(path) => Some(read_table(path)?),
        None => None,
    };
    let origin = sources.file.map_or_else(|| "defaults".to_string(), |p| p.display().to_string());
    let file_kind = match file_table.as_ref().and_then(|t| t.get("kind")) {
        Some(v) => Some(
            StudyKind::deserialize(v.clone()).map_err(|e| BenchError::config(&origin, format!("key `kind`: {e}")))?,
        ),
        None => None,
    };
    let kind = match (kind, file_kind) {
        (Some(k), Some(f)) if k != f => {
            return Err(BenchError::config(&origin, format!("file describes a {f} study, command runs {k}")))
        }
        (Some(k), _) => k,
        (None, Some(f)) => f,
        (None, None) => StudyKind::Convergence,
    };

    let defaults = StudyConfig::defaults(kind, sources.profile);
    let mut tree = toml::Table::try_from(&defaults).expect("defaults serialize");
    if let Some(table) = file_table {
        merge(&mut tree, table);
    }
    for item in sources.overrides {
        apply_override(&mut tree, item)?;
    }
    let merged_origin = if sources.overrides.is_empty() { origin.clone() } else { format!("{origin} + overrides") };
    let cfg = StudyConfig::deserialize(toml::Value::Table(tree))
        .map_err(|e| BenchError::config(&merged_origin, e.to_string().trim_end().to_string()))?;
    cfg.validate().map_err(|e| match e {
        BenchError::Config { origin: key, message } => {
            BenchError::config(&merged_origin, format!("key `{key}`: {message}"))
        }
        other => other,
    })?;
    Ok(cfg)
}

fn read_table(path: &Path) -> Result<toml::Table> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| BenchError::config(path.display().to_string(), format!("cannot read config: {e}")))?;
    text.parse::<toml::Table>()
        .map_err(|e| BenchError::config(path.display().to_string(), e.to_string().trim_end().to_string()))
}

fn merge(base: &mut toml::Table, top: toml::Table) {
    for (key, value) in top {
        match (base.get_mut(&key), value) {
            (Some(toml::Value::Table(inner)), toml::Value::Table(sub)) => merge(inner, sub),
            (_, value) => {
                base.insert(key, value);
            }
        }
    }
}

/// Parses `a.b=value`; the value is read as a TOML literal and falls back to a bare string.
fn apply_override(tree: &mut toml::Table, item: &str) -> Result<()> {
    let flag = || format!("--set {item}");
    let (key, raw) =
        item.split_once('=').ok_or_else(|| BenchError::config(flag(), "expected key=value".to_string()))?;
    let key = key.trim();
    let raw = raw.trim();
    let value = format!("v = {raw}")
        .parse::<toml::Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.to_string()));
    let parts: Vec<&str> = key.split('.').collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(BenchError::config(flag(), format!("malformed key `{key}`")));
    }
    let mut table = tree;
    for part in &parts[..parts.len() - 1] {
        let entry = table.entry(part.to_string()).or_insert_with(|| toml::Value::Table(toml::Table::new()));
        table = match entry {
            toml::Value::Table(t) => t,
            _ => return Err(BenchError::config(flag(), format!("`{part}` is not a section"))),
        };
    }
    table.insert(parts[parts.len() - 1].to_string(), value);
    Ok(())
}

mod boundary_name {
    use super::*;

    pub fn serialize<S: Serializer>(b: &Boundary, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(b.name())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Boundary, D::Error> {
        let name = String::deserialize(d)?;
        match name.as_str() {
            "periodic" => Ok(Boundary::Periodic),
            "dirichlet" => Ok(Boundary::Dirichlet),
            other => Err(serde::de::Error::custom(format!("unknown boundary `{other}` (periodic|dirichlet)"))),
        }
    }
}

mod scheme_name {
    use super::*;

    pub fn serialize<S: Serializer>(scheme: &Scheme, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(scheme.name())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Scheme, D::Error> {
        let name = String::deserialize(d)?;
        name.parse().map_err(|e: nls_core::Error| serde::de::Error::custom(e.to_string()))
    }
}

mod scheme_list {
    use super::*;

    pub fn serialize<S: Serializer>(schemes: &[Scheme], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(schemes.iter().map(|x| x.name()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Scheme>, D::Error> {
        let names = Vec::<String>::deserialize(d)?;
        names.iter().map(|n| n.parse().map_err(|e: nls_core::Error| serde::de::Error::custom(e.to_string()))).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn resolve_with(file: Option<&Path>, overrides: &[&str]) -> Result<StudyConfig> {
        let overrides: Vec<String> = overrides.iter().map(|s| s.to_string()).collect();
        resolve(Some(StudyKind::Convergence), &ConfigSources { profile: Profile::Fast, file, overrides: &overrides })
    }

    #[test]
    fn defaults_validate_for_every_kind_and_profile() {
        for kind in [StudyKind::Convergence, StudyKind::Conservation, StudyKind::Timing] {
            for profile in [Profile::Fast, Profile::Paper] {
                StudyConfig::defaults(kind, profile).validate().unwrap();
            }
        }
    }

    #[test]
    fn echo_round_trips() {
        let cfg =
            StudyConfig { fit_window: Some([1e-3, 0.1]), ..StudyConfig::defaults(StudyKind::Timing, Profile::Fast) };
        let text = cfg.echo(Profile::Fast, &["alpha=2".into()]);
        assert!(text.starts_with("# nlsbench "));
        let back: StudyConfig = toml::from_str(&text).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn overrides_beat_file_beats_defaults() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.toml");
        std::fs::write(&path, "alpha = 2.0\nseed = 7\n[solver]\nfp_tol = 1e-10\n").unwrap();
        let cfg = resolve_with(Some(&path), &["seed=9", "solver.dealias=true", "schemes=[\"strang\"]"]).unwrap();
        assert_eq!(cfg.alpha, 2.0);
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.solver.fp_tol, 1e-10);
        assert!(cfg.solver.dealias);
        assert_eq!(cfg.solver.fp_max_iter, 50);
        assert_eq!(cfg.schemes, vec![Scheme::StrangSplit]);
        assert_eq!(cfg.modes, 256);
    }

    #[test]
    fn bare_string_override() {
        let cfg = resolve_with(None, &["boundary=dirichlet"]).unwrap();
        assert_eq!(cfg.boundary, Boundary::Dirichlet);
    }

    #[test]
    fn rejections_name_their_origin() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.toml");
        std::fs::write(&path, "colour = 3\n").unwrap();
        let msg = resolve_with(Some(&path), &[]).unwrap_err().to_string();
        assert!(msg.contains("bad.toml") && msg.contains("colour"), "{msg}");

        let missing = dir.path().join("nope.toml");
        let msg = resolve_with(Some(&missing), &[]).unwrap_err().to_string();
        assert!(msg.contains("nope.toml"), "{msg}");

        let msg = resolve_with(None, &["tau_ref=0.001"]).unwrap_err().to_string();
        assert!(msg.contains("tau_ref"), "{msg}");
        let msg = resolve_with(None, &["T=1.01"]).unwrap_err().to_string();
        assert!(msg.contains("integer multiple"), "{msg}");
        assert!(resolve_with(None, &["nonsense"]).is_err());
        assert!(resolve_with(None, &["schemes=[\"rk4\"]"]).is_err());
    }

    #[test]
    fn file_kind_must_match_command() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("k.toml");
        std::fs::write(&path, "kind = \"timing\"\n").unwrap();
        assert!(resolve_with(Some(&path), &[]).is_err());
        let any = resolve(None, &ConfigSources { file: Some(&path), ..Default::default() }).unwrap();
        assert_eq!(any.kind, StudyKind::Timing);
    }
}
