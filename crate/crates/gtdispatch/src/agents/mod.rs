//! Learning agents and baselines trained against the dispatch environment:
//! REINFORCE (discrete and continuous), DQN, PPO, the cross-entropy method,
//! and exhaustive rule search.

pub mod cem;
pub mod common;
pub mod dqn;
pub mod ppo;
pub mod reinforce;
pub mod rules;

pub use cem::{train_cem, CemConfig};
pub use common::{evaluate_policy, EpisodeStats, PolicyKind, TrainedPolicy, TrainingCurve};
pub use dqn::{epsilon_for_episode, train_dqn, DqnConfig};
pub use ppo::{train_ppo, train_ppo_full, PpoConfig};
pub use reinforce::{train_reinforce, ReinforceConfig};
pub use rules::{evaluate_rule, search_rules, Rule};

use serde::{Deserialize, Serialize};

/// The algorithms the harness can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    ReinforceDiscrete,
    ReinforceContinuous,
    Dqn,
    Ppo,
    Cem,
    Rule,
}

impl Algorithm {
    pub const ALL: [Algorithm; 6] = [
        Algorithm::ReinforceDiscrete,
        Algorithm::ReinforceContinuous,
        Algorithm::Dqn,
        Algorithm::Ppo,
        Algorithm::Cem,
        Algorithm::Rule,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Algorithm::ReinforceDiscrete => "reinforce_discrete",
            Algorithm::ReinforceContinuous => "reinforce_continuous",
            Algorithm::Dqn => "dqn",
            Algorithm::Ppo => "ppo",
            Algorithm::Cem => "cem",
            Algorithm::Rule => "rule",
        }
    }

    /// True when the algorithm acts on the discrete level set.
    pub fn is_discrete(self) -> bool {
        matches!(
            self,
            Algorithm::ReinforceDiscrete | Algorithm::Dqn | Algorithm::Rule
        )
    }
}

impl std::str::FromStr for Algorithm {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "reinforce_discrete" | "reinforce-discrete" => Ok(Algorithm::ReinforceDiscrete),
            "reinforce_continuous" | "reinforce-continuous" => Ok(Algorithm::ReinforceContinuous),
            "dqn" => Ok(Algorithm::Dqn),
            "ppo" => Ok(Algorithm::Ppo),
            "cem" => Ok(Algorithm::Cem),
            "rule" => Ok(Algorithm::Rule),
            other => Err(crate::Error::Config(format!("unknown algorithm '{other}'"))),
        }
    }
}
