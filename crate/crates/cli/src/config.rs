//! JSON configuration files, one schema per subcommand.

use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Deserialize;
use steinkit::discrepancy::Estimator;
use steinkit::experiments::SequenceFamily;
use steinkit::inference::KernelChoice;
use steinkit::kernel::spec::{KernelSpec, TiltSpec};
use steinkit::stein::spec::SteinSpec;
use steinkit::target::spec::TargetSpec;
use steinkit::target::DissipativityParams;

use crate::CliError;

pub fn load<T: DeserializeOwned>(path: Option<&Path>) -> Result<T, CliError> {
    let path = path.ok_or_else(|| CliError::Input("--config <path> is required".into()))?;
    let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn default_alpha() -> f64 {
    0.05
}

fn default_bootstrap() -> usize {
    1000
}

/// Kernel, target and optional bounded-construction tilt.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KsdConfig {
    pub base: KernelSpec,
    pub target: TargetSpec,
    #[serde(default)]
    pub tilt: Option<TiltSpec>,
    #[serde(default)]
    pub samples: Option<PathBuf>,
    #[serde(default)]
    pub estimator: Option<Estimator>,
}

impl KsdConfig {
    pub fn stein(&self) -> SteinSpec {
        SteinSpec { base: self.base.clone(), target: self.target.clone(), tilt: self.tilt }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MmdConfig {
    pub kernel: KernelSpec,
    #[serde(default)]
    pub samples: Option<PathBuf>,
    #[serde(default)]
    pub reference: Option<PathBuf>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GofConfig {
    pub base: KernelSpec,
    pub target: TargetSpec,
    #[serde(default)]
    pub tilt: Option<TiltSpec>,
    #[serde(default)]
    pub samples: Option<PathBuf>,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default = "default_bootstrap")]
    pub n_bootstrap: usize,
    #[serde(default)]
    pub seed: Option<u64>,
}

impl GofConfig {
    pub fn stein(&self) -> SteinSpec {
        SteinSpec { base: self.base.clone(), target: self.target.clone(), tilt: self.tilt }
    }
}

/// Initial particles drawn from a distribution.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialDraw {
    pub n: usize,
    pub from: TargetSpec,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SvgdFileConfig {
    pub target: TargetSpec,
    pub kernel: KernelSpec,
    pub step_size: f64,
    pub iterations: usize,
    #[serde(default = "base_choice")]
    pub kernel_choice: KernelChoice,
    #[serde(default)]
    pub seed: Option<u64>,
    /// Headerless CSV of initial particles; takes precedence over `draw`.
    #[serde(default)]
    pub initial: Option<PathBuf>,
    #[serde(default)]
    pub draw: Option<InitialDraw>,
    /// CSV of per-iteration summaries.
    #[serde(default)]
    pub trace: Option<PathBuf>,
}

fn base_choice() -> KernelChoice {
    KernelChoice::BaseKernelOnParticles
}

fn default_diag_n() -> usize {
    2000
}

fn default_probe_radii() -> Vec<f64> {
    vec![1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0]
}

fn default_directions() -> usize {
    64
}

fn default_dissipativity() -> DissipativityParams {
    DissipativityParams { u: 1.0, r0: 1.0, r1: 0.5, r2: 1.0 }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagnoseConfig {
    pub target: TargetSpec,
    pub base: KernelSpec,
    #[serde(default)]
    pub tilt: Option<TiltSpec>,
    #[serde(default = "default_diag_n")]
    pub n: usize,
    #[serde(default = "default_dissipativity")]
    pub dissipativity: DissipativityParams,
    #[serde(default = "default_probe_radii")]
    pub radii: Vec<f64>,
    #[serde(default = "default_directions")]
    pub directions_per_radius: usize,
    #[serde(default)]
    pub seed: Option<u64>,
}

impl DiagnoseConfig {
    pub fn stein(&self) -> SteinSpec {
        SteinSpec { base: self.base.clone(), target: self.target.clone(), tilt: self.tilt }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    EscapeSequence,
    ConvergenceCurve,
    BoundednessScan,
    DissipativityReport,
}

fn default_n_max() -> usize {
    100
}

fn default_domain() -> (f64, f64) {
    (-12.0, 12.0)
}

fn default_tol() -> f64 {
    1e-10
}

/// Grid parameters; each experiment reads the fields it needs.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridParams {
    /// Escape sequence length.
    #[serde(default = "default_n_max")]
    pub n_max: usize,
    /// Convergence curve indices.
    #[serde(default)]
    pub ns: Option<Vec<usize>>,
    #[serde(default)]
    pub family: Option<SequenceFamily>,
    #[serde(default = "default_domain")]
    pub domain: (f64, f64),
    #[serde(default = "default_tol")]
    pub tol: f64,
    /// Boundedness scan abscissae.
    #[serde(default)]
    pub points: Option<Vec<f64>>,
    #[serde(default = "default_probe_radii")]
    pub radii: Vec<f64>,
    #[serde(default = "default_directions")]
    pub directions_per_radius: usize,
    #[serde(default = "default_dissipativity")]
    pub dissipativity: DissipativityParams,
}

impl Default for GridParams {
    fn default() -> Self {
        serde_json::from_str("{}").expect("all grid fields have defaults")
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub target: TargetSpec,
    #[serde(default)]
    pub kernel: Option<KernelSpec>,
    #[serde(default)]
    pub tilt: Option<TiltSpec>,
    #[serde(default)]
    pub grid: GridParams,
    /// Accepted for uniformity; every experiment is deterministic.
    #[serde(default)]
    #[allow(dead_code)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub output: Option<PathBuf>,
}
