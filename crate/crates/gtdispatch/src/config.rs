//! Experiment configuration: TOML file with nested sections, overridable
//! from CLI flags.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::agents::{CemConfig, DqnConfig, PpoConfig, ReinforceConfig};
use crate::cost::OmVariant;
use crate::env::EnvConfig;
use crate::error::{Error, Result};
use crate::scenario::{load_scenario_csv, DemandParams, ScenarioTable};

/// Where scenario data comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ScenarioConfig {
    /// "synthetic" or "csv".
    pub source: String,
    /// Seed for the synthetic generators.
    pub seed: u64,
    /// Directory holding price.csv / weather.csv / demand.csv when
    /// source = "csv".
    pub dir: Option<PathBuf>,
    pub demand: DemandParams,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            source: "synthetic".into(),
            seed: 42,
            dir: None,
            demand: DemandParams::default(),
        }
    }
}

impl ScenarioConfig {
    pub fn load(&self) -> Result<ScenarioTable> {
        match self.source.as_str() {
            "synthetic" => Ok(ScenarioTable::synthetic_year(self.seed)),
            "csv" => {
                let dir = self.dir.as_ref().ok_or_else(|| {
                    Error::Config("scenario.dir is required when source = \"csv\"".into())
                })?;
                load_scenario_csv(
                    &dir.join("price.csv"),
                    &dir.join("weather.csv"),
                    &dir.join("demand.csv"),
                )
            }
            other => Err(Error::Config(format!(
                "unknown scenario source '{other}' (expected \"synthetic\" or \"csv\")"
            ))),
        }
    }
}

/// Per-algorithm hyperparameter sections.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct AgentsConfig {
    pub reinforce: ReinforceConfig,
    pub dqn: DqnConfig,
    pub ppo: PpoConfig,
    pub cem: CemConfig,
    pub rule: RuleSearchConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RuleSearchConfig {
    pub price_grid: Vec<f64>,
    pub demand_grid: Vec<f64>,
}

impl Default for RuleSearchConfig {
    fn default() -> Self {
        Self {
            price_grid: crate::agents::rules::default_price_grid(),
            demand_grid: crate::agents::rules::default_demand_grid(),
        }
    }
}

/// Top-level experiment settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub seeds: Vec<u64>,
    pub episodes: usize,
    /// Shorter DQN training used for the sample-efficiency protocol.
    pub dqn_short_episodes: usize,
    pub out_dir: PathBuf,
    /// O&M variants trained in the comparison experiment.
    pub om_variants: Vec<OmVariant>,
    /// Episodes per run in the O&M comparison.
    pub compare_episodes: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seeds: vec![0, 1, 2, 3, 4],
            episodes: 250,
            dqn_short_episodes: 20,
            out_dir: PathBuf::from("runs"),
            om_variants: OmVariant::ALL.to_vec(),
            compare_episodes: 50,
        }
    }
}

/// The whole experiment configuration file.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    pub scenario: ScenarioConfig,
    pub env: EnvConfig,
    pub experiment: RunConfig,
    pub agents: AgentsConfig,
}

impl ExperimentConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let cfg: ExperimentConfig = toml::from_str(&text)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.env.validate()?;
        self.scenario.demand.validate()?;
        if self.experiment.seeds.is_empty() {
            return Err(Error::Config("at least one seed is required".into()));
        }
        if self.experiment.episodes == 0 {
            return Err(Error::Config("episodes must be positive".into()));
        }
        Ok(())
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string_pretty(self).map_err(|e| Error::Config(format!("serialize config: {e}")))
    }
}
