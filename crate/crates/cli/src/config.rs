//! Run configuration for the full pipeline.

use std::path::{Path, PathBuf};

use posaffine::numcore::{Entry, Tolerance};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Exact,
    Float,
}

/// Relative paths are resolved against the directory of the config file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub n: usize,
    pub schottky: PathBuf,
    /// One positive scale per generator; all 1 when absent.
    #[serde(default)]
    pub scales: Option<Vec<Entry>>,
    #[serde(default = "defaults::max_len")]
    pub max_len: usize,
    /// Lower bound the smallest `alpha / t` must clear.
    #[serde(default)]
    pub threshold: f64,
    #[serde(default = "defaults::disjoint_samples")]
    pub disjoint_samples: usize,
    #[serde(default = "defaults::pairing_samples")]
    pub pairing_samples: usize,
    #[serde(default = "defaults::tile_points")]
    pub tile_points: usize,
    #[serde(default = "defaults::radius")]
    pub radius: f64,
    #[serde(default = "defaults::max_depth")]
    pub max_depth: usize,
    #[serde(default = "defaults::relocation_points")]
    pub relocation_points: usize,
    #[serde(default = "defaults::relocation_len")]
    pub relocation_len: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "defaults::backend")]
    pub backend: Backend,
    #[serde(default)]
    pub eps_sign: Option<f64>,
    #[serde(default)]
    pub eps_eq: Option<f64>,
    #[serde(default = "defaults::output")]
    pub output: PathBuf,
}

mod defaults {
    use super::Backend;
    use std::path::PathBuf;

    pub fn max_len() -> usize {
        6
    }
    pub fn disjoint_samples() -> usize {
        2000
    }
    pub fn pairing_samples() -> usize {
        200
    }
    pub fn tile_points() -> usize {
        2000
    }
    pub fn radius() -> f64 {
        10.0
    }
    pub fn max_depth() -> usize {
        64
    }
    pub fn relocation_points() -> usize {
        10
    }
    pub fn relocation_len() -> usize {
        3
    }
    pub fn backend() -> Backend {
        Backend::Float
    }
    pub fn output() -> PathBuf {
        PathBuf::from("out")
    }
}

impl RunConfig {
    /// Reads and validates a config; relative paths become relative to its
    /// directory.
    pub fn load(path: &Path) -> Result<RunConfig, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let mut cfg: RunConfig =
            serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        if cfg.schottky.is_relative() {
            cfg.schottky = base.join(&cfg.schottky);
        }
        if cfg.output.is_relative() {
            cfg.output = base.join(&cfg.output);
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: String| Err(CliError::Config(m));
        if self.n == 0 {
            return bad("n must be at least 1".into());
        }
        if let Some(scales) = &self.scales {
            for (i, s) in scales.iter().enumerate() {
                let v: f64 = s.to_scalar::<f64>().map_err(CliError::Config)?;
                if !(v > 0.0) {
                    return bad(format!("scale {i} is {v}; scales must be positive"));
                }
            }
        }
        if self.max_len == 0 || self.max_depth == 0 {
            return bad("max_len and max_depth must be at least 1".into());
        }
        if !(self.radius >= 0.0 && self.radius.is_finite()) {
            return bad(format!("radius {} is not a finite nonnegative number", self.radius));
        }
        if !self.threshold.is_finite() {
            return bad("threshold must be finite".into());
        }
        if self.backend == Backend::Exact {
            return bad("the pipeline needs the float backend: the symmetric power of a Schottky group has irrational entries".into());
        }
        self.tolerance()?;
        Ok(())
    }

    /// Float tolerance with the configured overrides.
    pub fn tolerance(&self) -> Result<Tolerance, CliError> {
        let base = Tolerance::for_scalar::<posaffine::numcore::Dd>();
        Tolerance::new(self.eps_sign.unwrap_or(base.eps_sign), self.eps_eq.unwrap_or(base.eps_eq)).map_err(CliError::Config)
    }
}
