//! Run manifests: every invocation that writes files also writes a JSON
//! manifest recording the command, its fully resolved parameters, the seed,
//! the output paths, the tool version and a timestamp. `clusterlab rerun
//! --manifest <file>` replays the recorded command; outputs are reproduced
//! byte-identically (the manifest's own timestamp is the only thing that
//! changes).

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clusterlab::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    /// Subcommand name: "grow", "mst" or "experiment".
    pub command: String,
    /// Fully resolved parameter set, shaped per command (see the params types).
    pub params: serde_json::Value,
    /// Resolved seed (0 for commands that consume no randomness).
    pub seed: u64,
    /// Every file the run wrote, except this manifest itself.
    pub outputs: Vec<PathBuf>,
    pub tool_version: String,
    /// Unix epoch seconds; excluded from reproducibility comparisons.
    pub timestamp: u64,
}

impl RunManifest {
    pub fn new(command: &str, params: serde_json::Value, seed: u64, outputs: Vec<PathBuf>) -> Self {
        let timestamp = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map_or(0, |d| d.as_secs());
        Self {
            command: command.to_string(),
            params,
            seed,
            outputs,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp,
        }
    }
}

pub fn write_manifest(path: &Path, manifest: &RunManifest) -> Result<()> {
    let mut text = serde_json::to_string_pretty(manifest)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

pub fn load_manifest(path: &Path) -> Result<RunManifest> {
    let text = fs::read_to_string(path).map_err(|e| {
        Error::InvalidArgument(format!("cannot read --manifest file '{}': {e}", path.display()))
    })?;
    serde_json::from_str(&text).map_err(|e| {
        Error::InvalidArgument(format!("--manifest file '{}' is not a run manifest: {e}", path.display()))
    })
}

/// Resolved parameters of a `grow` run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GrowParams {
    pub dim: usize,
    pub alpha: f64,
    pub n: usize,
    pub seed: u64,
    pub out: PathBuf,
    /// Optional file the initial points were read from; reruns re-read it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_points: Option<PathBuf>,
}

/// Resolved parameters of an `mst` run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MstParams {
    pub input: PathBuf,
    pub exact: bool,
    pub out: PathBuf,
}

/// Resolved parameters of an `experiment` run, tagged by kind.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ExperimentParams {
    Scaling { dim: usize, alpha: f64, sizes: Vec<usize>, trials: usize, seed: u64, out_dir: PathBuf },
    Tail { dim: usize, alpha: f64, n: usize, trials: usize, thresholds: Vec<f64>, seed: u64, out_dir: PathBuf },
    Pairs { dim: usize, alpha: f64, sizes: Vec<usize>, trials: usize, epsilon: f64, seed: u64, out_dir: PathBuf },
    Depth { m: Vec<usize>, trials: usize, seed: u64, out_dir: PathBuf },
    Urn { m: Vec<usize>, n: usize, trials: usize, seed: u64, out_dir: PathBuf },
    AlphaZero { dim: usize, sizes: Vec<usize>, trials: usize, seed: u64, out_dir: PathBuf },
}

impl ExperimentParams {
    pub fn kind(&self) -> &'static str {
        match self {
            Self::Scaling { .. } => "scaling",
            Self::Tail { .. } => "tail",
            Self::Pairs { .. } => "pairs",
            Self::Depth { .. } => "depth",
            Self::Urn { .. } => "urn",
            Self::AlphaZero { .. } => "alpha-zero",
        }
    }

    pub fn seed(&self) -> u64 {
        match *self {
            Self::Scaling { seed, .. }
            | Self::Tail { seed, .. }
            | Self::Pairs { seed, .. }
            | Self::Depth { seed, .. }
            | Self::Urn { seed, .. }
            | Self::AlphaZero { seed, .. } => seed,
        }
    }

    pub fn out_dir(&self) -> &Path {
        match self {
            Self::Scaling { out_dir, .. }
            | Self::Tail { out_dir, .. }
            | Self::Pairs { out_dir, .. }
            | Self::Depth { out_dir, .. }
            | Self::Urn { out_dir, .. }
            | Self::AlphaZero { out_dir, .. } => out_dir,
        }
    }

    /// The `<kind>_<dim>_<alpha>_<seed>.csv` report name. The tree-law kinds
    /// (depth, urn) run on the internal dim 1 / alpha 0 growth, and that is
    /// what the name records.
    pub fn report_file_name(&self) -> String {
        let (dim, alpha) = match *self {
            Self::Scaling { dim, alpha, .. }
            | Self::Tail { dim, alpha, .. }
            | Self::Pairs { dim, alpha, .. } => (dim, alpha),
            Self::Depth { .. } | Self::Urn { .. } => (1, 0.0),
            Self::AlphaZero { dim, .. } => (dim, 0.0),
        };
        format!("{}_{}_{}_{}.csv", self.kind(), dim, alpha, self.seed())
    }
}
