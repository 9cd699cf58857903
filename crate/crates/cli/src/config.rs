//! Experiment configuration: one JSON document, with command-line flags
//! taking precedence field by field.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use bergman_core::DomainModel;
use serde::{Deserialize, Serialize};

use crate::emit::Format;
use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Output {
    /// `None` writes to standard output.
    pub path: Option<PathBuf>,
    pub format: Format,
}

impl Default for Output {
    fn default() -> Self {
        Output { path: None, format: Format::Csv }
    }
}

/// Schedules left as `None` fall back to per-subcommand defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub domain: Option<DomainModel>,
    pub resolution: Option<usize>,
    pub seed: u64,
    pub deltas: Option<Vec<f64>>,
    pub r: Option<Vec<f64>>,
    pub alpha: Option<Vec<f64>>,
    pub t: Option<Vec<f64>>,
    pub n: Option<Vec<usize>>,
    /// Number of random cases per seeded corpus.
    pub corpus_size: Option<usize>,
    /// Multiplies every report tolerance.
    pub tolerance_scale: f64,
    /// Per-statement tolerance replacing the built-in one (before scaling).
    pub tolerances: BTreeMap<String, f64>,
    pub output: Output,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            domain: None,
            resolution: None,
            seed: 0x5eed,
            deltas: None,
            r: None,
            alpha: None,
            t: None,
            n: None,
            corpus_size: None,
            tolerance_scale: 1.0,
            tolerances: BTreeMap::new(),
            output: Output::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        let cfg: Self = serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.tolerance_scale > 0.0 && self.tolerance_scale.is_finite()) {
            return Err(CliError::Usage(format!("tolerance scale must be positive, got {}", self.tolerance_scale)));
        }
        if let Some(res) = self.resolution {
            if res < 4 {
                return Err(CliError::Usage(format!("resolution must be ≥ 4, got {res}")));
            }
        }
        if let Some((k, v)) = self.tolerances.iter().find(|(_, v)| v.is_nan() || **v < 0.0) {
            return Err(CliError::Usage(format!("tolerance override for {k} must be ≥ 0, got {v}")));
        }
        for (name, s) in [("deltas", &self.deltas), ("r", &self.r), ("alpha", &self.alpha), ("t", &self.t)] {
            if matches!(s, Some(v) if v.is_empty()) {
                return Err(CliError::Usage(format!("empty {name} schedule")));
            }
        }
        Ok(())
    }

    pub fn corpus(&self, default: usize) -> usize {
        self.corpus_size.unwrap_or(default)
    }

    pub fn resolution_or(&self, default: usize) -> usize {
        self.resolution.unwrap_or(default)
    }

    pub fn r_or(&self, default: &[f64]) -> Vec<f64> {
        self.r.clone().unwrap_or_else(|| default.to_vec())
    }

    pub fn t_or(&self, default: &[f64]) -> Vec<f64> {
        self.t.clone().unwrap_or_else(|| default.to_vec())
    }

    pub fn alpha_or(&self, default: &[f64]) -> Vec<f64> {
        self.alpha.clone().unwrap_or_else(|| default.to_vec())
    }

    pub fn deltas_or(&self, default: &[f64]) -> Vec<f64> {
        self.deltas.clone().unwrap_or_else(|| default.to_vec())
    }
}
