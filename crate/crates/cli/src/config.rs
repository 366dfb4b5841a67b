//! JSON run configuration.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use triad_core::experiment::{linspace, DetectionCascade, Preparation, Splitter};
use triad_core::interference::balanced_tritter;
use triad_core::source::SourceParams;
use triad_core::{CMatrix, Network, C64};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    IdealScan,
    Experiment,
    Validate,
    QubitAnalysis,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Scan axis values: delays `tau` for static recipes, triad phases `phi`
/// for the dynamic recipe.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Grid {
    Linspace { start: f64, stop: f64, points: usize },
    Values(Vec<f64>),
}

impl Grid {
    pub fn values(&self) -> Vec<f64> {
        match self {
            Grid::Linspace { start, stop, points } => linspace(*start, *stop, *points),
            Grid::Values(v) => v.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CascadePreset {
    None,
    ConfigA,
    ConfigB,
}

/// Either a preset topology or explicit splitters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CascadeConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<CascadePreset>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub splitters: Option<[Splitter; 3]>,
    #[serde(default = "default_efficiency")]
    pub efficiency: f64,
}

fn default_efficiency() -> f64 {
    0.5
}

impl Default for CascadeConfig {
    fn default() -> Self {
        CascadeConfig { preset: None, splitters: None, efficiency: default_efficiency() }
    }
}

impl CascadeConfig {
    pub fn resolve(&self) -> Result<DetectionCascade, CliError> {
        let eta = self.efficiency;
        let cascade = match (self.preset, self.splitters) {
            (Some(_), Some(_)) => {
                return Err(CliError::Config("cascade: give either preset or splitters, not both".into()))
            }
            (Some(CascadePreset::ConfigA), None) => DetectionCascade::config_a(eta),
            (Some(CascadePreset::ConfigB), None) => DetectionCascade::config_b(eta),
            (Some(CascadePreset::None), None) | (None, None) => DetectionCascade::none(eta),
            (None, Some(splitters)) => DetectionCascade { splitters, efficiency: eta },
        };
        cascade.validate().map_err(|e| CliError::Config(format!("cascade: {e}")))?;
        Ok(cascade)
    }
}

/// A 3x3 network: the balanced tritter or explicit rows of `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum NetworkSpec {
    BalancedTritter,
    Matrix(Vec<Vec<[f64; 2]>>),
}

impl NetworkSpec {
    pub fn resolve(&self) -> Result<Network, CliError> {
        match self {
            NetworkSpec::BalancedTritter => Ok(balanced_tritter()),
            NetworkSpec::Matrix(rows) => {
                let n = rows.len();
                if rows.iter().any(|r| r.len() != n) {
                    return Err(CliError::Config("network matrix must be square".into()));
                }
                let m = CMatrix::from_fn(n, n, |i, j| C64::new(rows[i][j][0], rows[i][j][1]));
                Network::new(m).map_err(|e| CliError::Config(format!("network: {e}")))
            }
        }
    }
}

/// Networks seen by H and V light; `v` defaults to `h`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkConfig {
    #[serde(default = "default_network")]
    pub h: NetworkSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v: Option<NetworkSpec>,
}

fn default_network() -> NetworkSpec {
    NetworkSpec::BalancedTritter
}

impl Default for NetworkConfig {
    fn default() -> Self {
        NetworkConfig { h: default_network(), v: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValidateConfig {
    #[serde(default = "default_instances")]
    pub instances: usize,
    #[serde(default = "default_max_photons")]
    pub max_photons: usize,
}

fn default_instances() -> usize {
    500
}
fn default_max_photons() -> usize {
    4
}

impl Default for ValidateConfig {
    fn default() -> Self {
        ValidateConfig { instances: default_instances(), max_photons: default_max_photons() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QubitConfig {
    /// `(r12, r23, r31)`
    pub moduli: [f64; 3],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measured_phase: Option<f64>,
    #[serde(default = "default_phase_tolerance")]
    pub tolerance: f64,
}

fn default_phase_tolerance() -> f64 {
    0.05
}

fn default_herald() -> f64 {
    0.5
}
fn default_trial_rate() -> f64 {
    triad_core::experiment::DEFAULT_TRIAL_RATE_HZ
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub mode: Mode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preparation: Option<Preparation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<Grid>,
    /// Columns to write; all when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub events: Option<Vec<String>>,
    #[serde(default)]
    pub source: SourceParams,
    #[serde(default)]
    pub cascade: CascadeConfig,
    #[serde(default)]
    pub network: NetworkConfig,
    #[serde(default = "default_herald")]
    pub herald_efficiency: f64,
    #[serde(default = "default_trial_rate")]
    pub trial_rate_hz: f64,
    #[serde(default)]
    pub validate: ValidateConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub qubit: Option<QubitConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
    /// Seeds the random validation instances.
    #[serde(default)]
    pub seed: u64,
    /// Written into metadata files; ignored when read back.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<serde_json::Value>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            CliError::Config(format!("at `{path}`: {}", e.into_inner()))
        })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        RunConfig::from_json(&text)
    }
}
