//! Layered run configuration: one structured file whose sections mirror the
//! module types, with every field defaulted so a partial file works.

use crate::constants::ReactorConstants;
use crate::econ::{CostDatabase, FinanceAssumptions, ReflectorCostMode};
use crate::physics::RomCoefficients;
use crate::rl::{ConstraintSpec, PpoConfig};
use crate::surrogate::TwoStageConfig;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SamplingMethod {
    Uniform,
    LatinHypercube,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct SurrogateSection {
    #[serde(flatten)]
    pub two_stage: TwoStageConfig,
    pub cv_folds: usize,
}

impl Default for SurrogateSection {
    fn default() -> Self {
        Self {
            two_stage: TwoStageConfig::default(),
            cv_folds: 5,
        }
    }
}

/// The whole run configuration. Command-line flags override file values;
/// file values override these defaults.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub scenario: String,
    /// Reflector cost mode: be | graphite.
    pub mode: ReflectorCostMode,
    pub seed: u64,
    pub workers: usize,
    pub out_dir: String,
    /// Design samples drawn by the sample command.
    pub sample_budget: usize,
    /// Total optimizer samples.
    pub optimize_budget: usize,
    pub baseline_budget: usize,
    /// Feasible designs kept for full-order re-evaluation.
    pub top_k: usize,
    /// Samples per reported training epoch.
    pub epoch_samples: usize,
    pub sampling: SamplingMethod,
    pub max_failures: usize,
    pub constants: ReactorConstants,
    pub costs: CostDatabase,
    pub finance: FinanceAssumptions,
    pub rom: RomCoefficients,
    pub constraints: ConstraintSpec,
    pub surrogate: SurrogateSection,
    pub ppo: PpoConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            scenario: "default".into(),
            mode: ReflectorCostMode::Be,
            seed: 0,
            workers: 8,
            out_dir: "runs".into(),
            sample_budget: 900,
            optimize_budget: 100_000,
            baseline_budget: 100_000,
            top_k: 16,
            epoch_samples: 10_000,
            sampling: SamplingMethod::Uniform,
            max_failures: 100,
            constants: ReactorConstants::default(),
            costs: CostDatabase::default(),
            finance: FinanceAssumptions::default(),
            rom: RomCoefficients::default(),
            constraints: ConstraintSpec::default(),
            surrogate: SurrogateSection::default(),
            ppo: PpoConfig::default(),
        }
    }
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("config parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Constants(#[from] crate::constants::ConstantsError),
    #[error(transparent)]
    Econ(#[from] crate::econ::EconError),
    #[error("{0} must be positive")]
    NonPositive(&'static str),
}

impl RunConfig {
    pub fn load(path: &str) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_string(),
            source,
        })?;
        let cfg: Self = toml::from_str(&text).map_err(|e| ConfigError::Parse(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.constants.validate()?;
        self.costs.validate()?;
        if self.workers == 0 {
            return Err(ConfigError::NonPositive("workers"));
        }
        if self.epoch_samples == 0 {
            return Err(ConfigError::NonPositive("epoch_samples"));
        }
        Ok(())
    }

    /// Hash of the fully resolved configuration, recorded in every output so
    /// runs are reproducible from (config, seed) alone. The output directory
    /// is environmental, not semantic, so it is excluded: the same study
    /// written to two locations hashes identically.
    pub fn canonical_hash(&self) -> String {
        let mut canonical = self.clone();
        canonical.out_dir = String::new();
        let text = toml::to_string(&canonical).expect("config serializes");
        let digest = Sha256::digest(text.as_bytes());
        let mut hex = String::with_capacity(16);
        for b in &digest[..8] {
            hex.push_str(&format!("{b:02x}"));
        }
        hex
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate_and_hash_stably() {
        let cfg = RunConfig::default();
        cfg.validate().unwrap();
        assert_eq!(cfg.canonical_hash(), cfg.canonical_hash());
        assert_eq!(cfg.canonical_hash().len(), 16);
    }

    #[test]
    fn partial_toml_overrides_defaults() {
        let text = r#"
            scenario = "graphite-study"
            mode = "graphite"
            seed = 7

            [constraints]
            lifetime_min = 5.5
        "#;
        let cfg: RunConfig = toml::from_str(text).unwrap();
        assert_eq!(cfg.scenario, "graphite-study");
        assert_eq!(cfg.mode, ReflectorCostMode::Graphite);
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.constraints.lifetime_min, 5.5);
        // untouched sections keep defaults
        assert_eq!(cfg.sample_budget, 900);
        assert_eq!(cfg.constraints.q_max_limit, 0.020);
    }

    #[test]
    fn different_settings_hash_differently() {
        let a = RunConfig::default();
        let mut b = RunConfig::default();
        b.costs.beryllium_per_kg.amount = 44_000.0;
        assert_ne!(a.canonical_hash(), b.canonical_hash());
    }

    #[test]
    fn round_trips_through_toml() {
        let cfg = RunConfig::default();
        let text = cfg.to_toml();
        let back: RunConfig = toml::from_str(&text).unwrap();
        assert_eq!(cfg.canonical_hash(), back.canonical_hash());
    }

    #[test]
    fn zero_workers_rejected() {
        let mut cfg = RunConfig::default();
        cfg.workers = 0;
        assert!(cfg.validate().is_err());
    }
}
