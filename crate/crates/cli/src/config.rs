//! JSON run configuration: one document drives a whole run, with a few
//! CLI flags layered on top so reruns stay file-reproducible.

use std::f64::consts::FRAC_PI_4;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use spinstar::{model_rng, sample_random_model, ModelSpec};

use crate::CliError;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub alpha: f64,
    pub beta: f64,
    #[serde(default)]
    pub omega0: f64,
    pub bath: BathSpec,
    pub time: TimeSpec,
    #[serde(default)]
    pub theta_grid: Vec<f64>,
    pub output: OutputSpec,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum BathSpec {
    /// Explicit per-spin couplings and frequencies.
    Explicit { g: Vec<f64>, omega: Vec<f64> },
    /// All spins share one coupling and one frequency.
    Equal { n: usize, g: f64, omega: f64 },
    /// Couplings and frequencies drawn uniformly from [-1, 1].
    Random { n: usize, seed: u64, samples: usize },
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeSpec {
    pub start: f64,
    pub end: f64,
    pub steps: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub format: OutputFormat,
    pub path: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::usage(format!("cannot read config {}: {e}", path.display())))?;
        let config: RunConfig = serde_json::from_str(&text)
            .map_err(|e| CliError::usage(format!("invalid config {}: {e}", path.display())))?;
        config.validate()?;
        Ok(config)
    }

    fn validate(&self) -> Result<(), CliError> {
        if !self.alpha.is_finite() || self.alpha <= 0.0 {
            return Err(CliError::usage(format!(
                "alpha must be finite and positive, got {}",
                self.alpha
            )));
        }
        if !self.beta.is_finite() || self.beta < 0.0 {
            return Err(CliError::usage(format!(
                "beta must be finite and nonnegative, got {}",
                self.beta
            )));
        }
        if self.time.steps < 2 {
            return Err(CliError::usage(format!(
                "time.steps must be >= 2, got {}",
                self.time.steps
            )));
        }
        if !(self.time.start.is_finite() && self.time.end.is_finite())
            || self.time.start >= self.time.end
        {
            return Err(CliError::usage(format!(
                "time grid needs start < end, got [{}, {}]",
                self.time.start, self.time.end
            )));
        }
        if self.time.start < 0.0 {
            return Err(CliError::usage(format!(
                "time.start must be >= 0, got {}",
                self.time.start
            )));
        }
        for &theta in &self.theta_grid {
            if !(0.0..=FRAC_PI_4 + 1e-12).contains(&theta) {
                return Err(CliError::usage(format!(
                    "theta_grid entry {theta} outside [0, pi/4]"
                )));
            }
        }
        match &self.bath {
            BathSpec::Explicit { g, omega } => {
                if g.is_empty() || g.len() != omega.len() {
                    return Err(CliError::usage(format!(
                        "explicit bath needs matching nonempty g and omega, got {} and {}",
                        g.len(),
                        omega.len()
                    )));
                }
            }
            BathSpec::Equal { n, .. } | BathSpec::Random { n, .. } => {
                if *n == 0 {
                    return Err(CliError::usage("bath must have at least one spin".into()));
                }
            }
        }
        if let BathSpec::Random { samples, .. } = &self.bath {
            if *samples == 0 {
                return Err(CliError::usage("random bath needs samples >= 1".into()));
            }
        }
        Ok(())
    }

    /// The materialized time grid, `steps` evenly spaced samples.
    pub fn time_grid(&self) -> Vec<f64> {
        let TimeSpec { start, end, steps } = self.time;
        (0..steps)
            .map(|k| start + (end - start) * k as f64 / (steps - 1) as f64)
            .collect()
    }

    /// The single channel this run sweeps.
    ///
    /// A random bath yields the first model of its seed (stream 0), so a
    /// sweep over a random bath is reproducible from the seed alone.
    pub fn build_model(&self, seed_override: Option<u64>) -> Result<ModelSpec, CliError> {
        let model = match &self.bath {
            BathSpec::Explicit { g, omega } => {
                ModelSpec::new(self.alpha, self.beta, g.clone(), omega.clone())
            }
            BathSpec::Equal { n, g, omega } => {
                ModelSpec::equal(*n, self.alpha, self.beta, *g, *omega)
            }
            BathSpec::Random { n, seed, .. } => {
                let seed = seed_override.unwrap_or(*seed);
                let mut rng = model_rng(seed, 0);
                sample_random_model(*n, self.alpha, self.beta, &mut rng)
            }
        };
        let model = model.map_err(|e| CliError::usage(e.to_string()))?;
        model
            .with_omega0(self.omega0)
            .map_err(|e| CliError::usage(e.to_string()))
    }
}

/// Seed precedence: `--seed` flag, then `SPINSTAR_SEED`, then the config.
pub fn resolve_seed(flag: Option<u64>) -> Result<Option<u64>, CliError> {
    if flag.is_some() {
        return Ok(flag);
    }
    match std::env::var("SPINSTAR_SEED") {
        Ok(text) => {
            let seed = text.parse::<u64>().map_err(|_| {
                CliError::usage(format!("SPINSTAR_SEED must be a u64, got {text:?}"))
            })?;
            Ok(Some(seed))
        }
        Err(_) => Ok(None),
    }
}
