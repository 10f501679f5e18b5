//! Shared agent plumbing: per-episode statistics, trained-policy
//! evaluation, and the discrete/continuous action conventions.

use serde::{Deserialize, Serialize};

use crate::env::{discrete_action_map, DispatchEnv, ObsScaler, DISCRETE_LEVELS};
use crate::error::Result;
use crate::nn::{forward, NetworkSpec};

/// One row of a training curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpisodeStats {
    pub episode: usize,
    /// Episodic reward, unscaled C$ (negative annual cost).
    pub reward_cad: f64,
    /// Hours with the turbine on.
    pub gt_hours: u32,
    /// Number of starts.
    pub gt_cycles: u32,
    /// Exploration epsilon, where the algorithm has one.
    pub epsilon: Option<f64>,
}

pub type TrainingCurve = Vec<EpisodeStats>;

/// Accumulates env-side reward and turbine usage over one episode.
#[derive(Debug, Default, Clone, Copy)]
pub struct EpisodeTally {
    pub reward_cad: f64,
    pub gt_hours: u32,
    pub gt_cycles: u32,
}

impl EpisodeTally {
    pub fn record(&mut self, result: &crate::env::StepResult) {
        self.reward_cad += result.reward;
        if result.info.load_fraction > 0.0 {
            self.gt_hours += 1;
        }
        if result.info.started {
            self.gt_cycles += 1;
        }
    }

    pub fn stats(&self, episode: usize, epsilon: Option<f64>) -> EpisodeStats {
        EpisodeStats {
            episode,
            reward_cad: self.reward_cad,
            gt_hours: self.gt_hours,
            gt_cycles: self.gt_cycles,
            epsilon,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolicyKind {
    /// Network outputs one score per discrete level; act greedily.
    Discrete,
    /// First network output is the raw action (Gaussian mean or linear).
    Continuous,
    /// First network output passes through a sigmoid (PPO actor).
    Squashed,
}

/// A trained policy: network weights plus the action convention.
#[derive(Debug, Clone)]
pub struct TrainedPolicy {
    pub kind: PolicyKind,
    pub spec: NetworkSpec,
    pub params: Vec<f64>,
}

impl TrainedPolicy {
    /// Greedy raw action in [0, 1] for a scaled observation.
    pub fn act(&self, obs: &[f64]) -> Result<f64> {
        let out = forward(&self.spec, &self.params, obs)?;
        Ok(match self.kind {
            PolicyKind::Discrete => {
                let idx = argmax(&out[..DISCRETE_LEVELS.len()]);
                discrete_action_map(idx)?
            }
            PolicyKind::Continuous => out[0].clamp(0.0, 1.0),
            PolicyKind::Squashed => crate::agents::ppo::squash(out[0]),
        })
    }
}

pub fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v > values[best] {
            best = i;
        }
    }
    best
}

/// Run one greedy episode of a trained policy and report its stats.
pub fn evaluate_policy(
    env: &mut DispatchEnv,
    scaler: &ObsScaler,
    policy: &TrainedPolicy,
    episode: usize,
) -> Result<EpisodeStats> {
    let mut obs = env.reset();
    let mut tally = EpisodeTally::default();
    loop {
        let action = policy.act(&scaler.scale(&obs))?;
        let result = env.step(action)?;
        tally.record(&result);
        if result.done {
            break;
        }
        obs = result.observation;
    }
    Ok(tally.stats(episode, None))
}

/// Discounted Monte-Carlo returns of a reward sequence.
pub fn discounted_returns(rewards: &[f64], gamma: f64) -> Vec<f64> {
    let mut returns = vec![0.0; rewards.len()];
    let mut acc = 0.0;
    for (i, &r) in rewards.iter().enumerate().rev() {
        acc = r + gamma * acc;
        returns[i] = acc;
    }
    returns
}
