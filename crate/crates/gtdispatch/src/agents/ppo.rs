//! Proximal policy optimization: Gaussian actor plus value critic,
//! generalized advantage estimation, clipped surrogate objective, multiple
//! epochs over each rollout. One rollout is one full episode.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::agents::common::{EpisodeTally, PolicyKind, TrainedPolicy, TrainingCurve};
use crate::env::{DispatchEnv, ObsScaler};
use crate::error::{Error, Result};
use crate::nn::{Activation, AdamHyper, Network, NetworkSpec, OutputHead};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PpoConfig {
    pub episodes: usize,
    pub gamma: f64,
    pub gae_lambda: f64,
    pub clip_ratio: f64,
    pub actor_lr: f64,
    pub critic_lr: f64,
    pub epochs: usize,
    pub minibatch: usize,
    pub entropy_coef: f64,
    pub hidden: Vec<usize>,
}

impl Default for PpoConfig {
    fn default() -> Self {
        Self {
            episodes: 250,
            gamma: 0.99,
            gae_lambda: 0.95,
            clip_ratio: 0.2,
            actor_lr: 3e-4,
            critic_lr: 1e-3,
            epochs: 10,
            minibatch: 512,
            entropy_coef: 1e-3,
            hidden: vec![64, 64],
        }
    }
}

const LOG_STD_MIN: f64 = -4.0;
const LOG_STD_MAX: f64 = 1.0;

/// The actor mean is the sigmoid of the network output, so it stays inside
/// the action interval. An unbounded mean drifts far past the env's clamp
/// during early training and the policy gradient dies there.
pub(crate) fn squash(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

fn log_prob(mean: f64, log_std: f64, action: f64) -> f64 {
    let std = log_std.exp();
    let z = (action - mean) / std;
    -0.5 * z * z - log_std - 0.5 * (2.0 * std::f64::consts::PI).ln()
}

/// Gradient of the clipped-surrogate-plus-entropy loss with respect to the
/// actor outputs `[mean, log_std]` for one sample. Returns `None` when the
/// sample sits in the clipped flat region (zero policy gradient).
fn surrogate_output_grad(
    mean: f64,
    log_std: f64,
    action: f64,
    logp_old: f64,
    advantage: f64,
    clip: f64,
    entropy_coef: f64,
) -> [f64; 2] {
    let logp = log_prob(mean, log_std, action);
    let ratio = (logp - logp_old).exp();
    let clipped = (advantage > 0.0 && ratio > 1.0 + clip) || (advantage < 0.0 && ratio < 1.0 - clip);
    let mut g = [0.0f64; 2];
    if !clipped {
        let std = log_std.exp();
        let z = (action - mean) / std;
        let coef = ratio * advantage; // d(ratio*A)/dlogp
        g[0] = -coef * (z / std);
        g[1] = -coef * (z * z - 1.0);
    }
    // Entropy of a Gaussian depends on log_std alone; bonus pushes it up.
    g[1] -= entropy_coef;
    g
}

pub fn train_ppo(
    env: &mut DispatchEnv,
    scaler: &ObsScaler,
    cfg: &PpoConfig,
    seed: u64,
) -> Result<(TrainedPolicy, TrainingCurve)> {
    let (policy, _, curve) = train_ppo_full(env, scaler, cfg, seed)?;
    Ok((policy, curve))
}

/// As `train_ppo`, additionally returning the trained value network.
pub fn train_ppo_full(
    env: &mut DispatchEnv,
    scaler: &ObsScaler,
    cfg: &PpoConfig,
    seed: u64,
) -> Result<(TrainedPolicy, Network, TrainingCurve)> {
    if cfg.minibatch == 0 || cfg.epochs == 0 {
        return Err(Error::Config("ppo epochs and minibatch must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let actor_spec = NetworkSpec::new(6, cfg.hidden.clone(), Activation::Tanh, 1, OutputHead::Gaussian)?;
    let critic_spec = NetworkSpec::new(6, cfg.hidden.clone(), Activation::Tanh, 1, OutputHead::Linear)?;
    let mut actor = Network::new(actor_spec, AdamHyper::with_lr(cfg.actor_lr), &mut rng);
    let mut critic = Network::new(critic_spec, AdamHyper::with_lr(cfg.critic_lr), &mut rng);
    let reward_scale = env.config().reward_scale;

    let mut curve = TrainingCurve::with_capacity(cfg.episodes);
    for episode in 0..cfg.episodes {
        // Rollout.
        let horizon = env.horizon();
        let mut states: Vec<[f64; 6]> = Vec::with_capacity(horizon);
        let mut actions: Vec<f64> = Vec::with_capacity(horizon);
        let mut logps: Vec<f64> = Vec::with_capacity(horizon);
        let mut rewards: Vec<f64> = Vec::with_capacity(horizon);
        let mut values: Vec<f64> = Vec::with_capacity(horizon);
        let mut tally = EpisodeTally::default();
        let mut obs = env.reset();

        loop {
            let s = scaler.scale(&obs);
            let out = actor.forward(&s)?;
            let mean = squash(out[0]);
            let log_std = out[1].clamp(LOG_STD_MIN, LOG_STD_MAX);
            let action = mean + log_std.exp() * rng.sample::<f64, _>(rand_distr::StandardNormal);
            // Log-probability of the pre-clamp sample; the env clamps.
            let logp = log_prob(mean, log_std, action);
            let value = critic.forward(&s)?[0];

            let result = env.step(action)?;
            tally.record(&result);

            states.push(s);
            actions.push(action);
            logps.push(logp);
            values.push(value);
            rewards.push(result.reward * reward_scale);
            if result.done {
                break;
            }
            obs = result.observation;
        }

        // GAE; terminal value is zero (episode ends the year).
        let n = rewards.len();
        let mut advantages = vec![0.0f64; n];
        let mut acc = 0.0;
        for t in (0..n).rev() {
            let next_value = if t + 1 < n { values[t + 1] } else { 0.0 };
            let delta = rewards[t] + cfg.gamma * next_value - values[t];
            acc = delta + cfg.gamma * cfg.gae_lambda * acc;
            advantages[t] = acc;
        }
        let returns: Vec<f64> = advantages.iter().zip(&values).map(|(a, v)| a + v).collect();

        // Normalize advantages.
        let mean_adv = advantages.iter().sum::<f64>() / n as f64;
        let var = advantages.iter().map(|a| (a - mean_adv).powi(2)).sum::<f64>() / n as f64;
        let std_adv = var.sqrt().max(1e-8);
        for a in &mut advantages {
            *a = (*a - mean_adv) / std_adv;
        }

        // Updates.
        let mut indices: Vec<usize> = (0..n).collect();
        for _ in 0..cfg.epochs {
            indices.shuffle(&mut rng);
            for chunk in indices.chunks(cfg.minibatch) {
                let scale = 1.0 / chunk.len() as f64;
                let mut actor_grad = actor.zero_gradient();
                let mut critic_grad = critic.zero_gradient();
                for &i in chunk {
                    let out = actor.forward(&states[i])?;
                    let mean = squash(out[0]);
                    let log_std = out[1].clamp(LOG_STD_MIN, LOG_STD_MAX);
                    let mut g = surrogate_output_grad(
                        mean,
                        log_std,
                        actions[i],
                        logps[i],
                        advantages[i],
                        cfg.clip_ratio,
                        cfg.entropy_coef,
                    );
                    g[0] *= scale * mean * (1.0 - mean);
                    g[1] *= scale;
                    let ga = actor.backward(&states[i], &g)?;
                    for (acc, x) in actor_grad.iter_mut().zip(ga) {
                        *acc += x;
                    }

                    let v = critic.forward(&states[i])?[0];
                    let gv = critic.backward(&states[i], &[2.0 * (v - returns[i]) * scale])?;
                    for (acc, x) in critic_grad.iter_mut().zip(gv) {
                        *acc += x;
                    }
                }
                actor.apply_gradient(&actor_grad)?;
                critic.apply_gradient(&critic_grad)?;
            }
        }

        curve.push(tally.stats(episode, None));
    }

    Ok((
        TrainedPolicy {
            kind: PolicyKind::Squashed,
            spec: actor.spec.clone(),
            params: actor.params,
        },
        critic,
        curve,
    ))
}
