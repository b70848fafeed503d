use std::path::{Path, PathBuf};

use line_scatter::{IncidentWave, Potential};
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub potential: Potential,
    /// Second potential for the equivalence task.
    #[serde(default)]
    pub reference: Option<Potential>,
    #[serde(default)]
    pub wave: Option<WaveConfig>,
    #[serde(default)]
    pub scan: ScanConfig,
    #[serde(default)]
    pub options: Options,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WaveConfig {
    pub k: Option<f64>,
    #[serde(default)]
    pub theta0_deg: f64,
}

/// `count` points from `start` to `stop`, both included.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Range {
    pub fn points(&self, name: &str) -> Result<Vec<f64>, CliError> {
        if self.count == 0 || !self.start.is_finite() || !self.stop.is_finite() {
            return Err(CliError::config(format!(
                "scan.{name} needs finite endpoints and a positive count"
            )));
        }
        if self.count == 1 {
            return Ok(vec![self.start]);
        }
        let last = (self.count - 1) as f64;
        Ok((0..self.count)
            .map(|i| {
                if i + 1 == self.count {
                    self.stop
                } else {
                    self.start + (self.stop - self.start) * (i as f64 / last)
                }
            })
            .collect())
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanConfig {
    pub k: Option<Range>,
    pub theta0_deg: Option<Range>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Options {
    pub theta_samples: usize,
    pub singularity_threshold: f64,
    /// Comb harmonic truncation; the required one when absent.
    pub truncation: Option<usize>,
    pub tolerance: f64,
    pub max_terms: usize,
}

impl Default for Options {
    fn default() -> Self {
        Self {
            theta_samples: 360,
            singularity_threshold: line_scatter::foldy::DEFAULT_SINGULARITY_THRESHOLD,
            truncation: None,
            tolerance: 1e-12,
            max_terms: 1000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub path: Option<PathBuf>,
    pub format: Option<Format>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::io(format!("reading {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::config(format!("{}: {e}", path.display())))
    }

    fn wave_config(&self) -> WaveConfig {
        self.wave.unwrap_or(WaveConfig {
            k: None,
            theta0_deg: 0.0,
        })
    }

    pub fn theta0_deg(&self) -> f64 {
        self.wave_config().theta0_deg
    }

    pub fn k(&self) -> Result<f64, CliError> {
        self.wave_config()
            .k
            .ok_or_else(|| CliError::config("wave.k is required for this task"))
    }

    pub fn wave(&self) -> Result<IncidentWave, CliError> {
        Ok(IncidentWave::from_degrees(self.k()?, self.theta0_deg())?)
    }
}
