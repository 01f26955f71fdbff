//! Experiment config documents, one JSON file per invocation.
//!
//! Configs are the replay artifact: they carry every parameter, including
//! the seed, so rerunning a command on the same config reproduces its
//! outputs byte for byte. Unknown keys are rejected.

use serde::Deserialize;
use std::path::PathBuf;

use crate::commands::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GenerateMode {
    Net,
    Sequence,
    Iid,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleConfig {
    pub rounds: usize,
    #[serde(default = "default_eps0")]
    pub eps0: f64,
    #[serde(default = "default_d0")]
    pub d0: u64,
    #[serde(default = "default_sweeps")]
    pub sweeps: usize,
}

fn default_eps0() -> f64 {
    0.5
}

fn default_d0() -> u64 {
    16
}

fn default_sweeps() -> usize {
    statreg::realize::DEFAULT_SWEEPS
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenerateConfig {
    pub mode: GenerateMode,
    /// Output stream file: JSONL for nets, JSON for sequences.
    pub out: PathBuf,
    /// Target regularity (net and sequence modes).
    pub regularity_file: Option<PathBuf>,
    /// Realization ladder (net mode).
    pub schedule: Option<ScheduleConfig>,
    /// Sequence length (sequence and iid modes).
    pub n: Option<usize>,
    /// Steering accuracy (sequence mode).
    pub epsilon: Option<f64>,
    /// Accept disconnected point sets as a visiting path (sequence mode).
    #[serde(default)]
    pub as_path: bool,
    /// Source alphabet (iid mode).
    pub alphabet: Option<Vec<String>>,
    /// Source weights over the alphabet (iid mode).
    pub mu: Option<Vec<f64>>,
    /// Generator seed (iid mode; `--seed` overrides).
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StreamKind {
    Net,
    Sequence,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EstimateConfig {
    pub stream: PathBuf,
    pub kind: StreamKind,
    /// Net streams carry no alphabet record, so one is required here;
    /// for sequences it optionally cross-checks the file.
    pub alphabet: Option<Vec<String>>,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default = "default_windows")]
    pub windows: usize,
    #[serde(default = "default_tail_fraction")]
    pub tail_fraction: f64,
    /// Prefix sampling stride (sequence streams).
    #[serde(default = "default_stride")]
    pub stride: usize,
    pub estimate_out: PathBuf,
    pub trajectory_out: Option<PathBuf>,
}

fn default_epsilon() -> f64 {
    statreg::empirics::DEFAULT_EPSILON
}

fn default_windows() -> usize {
    statreg::empirics::DEFAULT_WINDOWS
}

fn default_tail_fraction() -> f64 {
    statreg::empirics::DEFAULT_TAIL_FRACTION
}

fn default_stride() -> usize {
    1
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EquivConfig {
    pub stream_a: PathBuf,
    pub stream_b: PathBuf,
    /// Shared alphabet of both net streams.
    pub alphabet: Vec<String>,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default = "default_windows")]
    pub windows: usize,
    pub out: PathBuf,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecideConfig {
    pub loss_file: PathBuf,
    /// Prior weights over the states: selects the Bayes criterion.
    pub mu: Option<Vec<f64>>,
    /// Regularity over the states: selects the worst-case criterion.
    /// With neither this nor `mu`, plain minimax.
    pub regularity_file: Option<PathBuf>,
    pub out: PathBuf,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    pub stream: PathBuf,
    pub alphabet: Vec<String>,
    pub loss_file: PathBuf,
    pub decision: String,
    pub r1: f64,
    pub r2: f64,
    #[serde(default = "default_tail_fraction")]
    pub tail_fraction: f64,
    #[serde(default = "default_windows")]
    pub windows: usize,
    pub report_out: PathBuf,
    /// Optional running-average CSV for plotting.
    pub trace_out: Option<PathBuf>,
}

pub fn load<T: serde::de::DeserializeOwned>(path: &std::path::Path) -> Result<T, CliError> {
    let bytes = std::fs::read(path)
        .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_slice(&bytes)
        .map_err(|e| CliError::Config(format!("invalid config {}: {e}", path.display())))
}
