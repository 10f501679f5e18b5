//! Deep Q-network with uniform experience replay, a periodically synced
//! target network, and epsilon-greedy exploration on a linear schedule
//! that holds at the floor for the final episodes.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::agents::common::{argmax, EpisodeTally, PolicyKind, TrainedPolicy, TrainingCurve};
use crate::env::{discrete_action_map, DispatchEnv, ObsScaler, DISCRETE_LEVELS};
use crate::error::{Error, Result};
use crate::nn::{forward, Activation, AdamHyper, Network, NetworkSpec, OutputHead};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DqnConfig {
    pub episodes: usize,
    pub gamma: f64,
    pub learning_rate: f64,
    pub hidden: Vec<usize>,
    pub replay_capacity: usize,
    pub batch_size: usize,
    /// Stored transitions required before learning begins.
    pub learning_start: usize,
    /// Target-network sync interval, environment steps.
    pub target_sync: usize,
    /// Gradient step every N environment steps.
    pub train_freq: usize,
    pub epsilon_start: f64,
    pub epsilon_final: f64,
    /// Episodes at the end of training with epsilon held at the floor.
    pub epsilon_hold_episodes: usize,
}

impl Default for DqnConfig {
    fn default() -> Self {
        Self {
            episodes: 250,
            gamma: 0.99,
            learning_rate: 1e-3,
            hidden: vec![64, 64],
            replay_capacity: 100_000,
            batch_size: 32,
            learning_start: 1000,
            target_sync: 2000,
            train_freq: 1,
            epsilon_start: 0.8,
            epsilon_final: 0.001,
            epsilon_hold_episodes: 10,
        }
    }
}

/// Epsilon for the given episode: linear decay from `epsilon_start` at
/// episode 0 down to `epsilon_final`, held exactly at the floor for the
/// final `epsilon_hold_episodes` episodes.
pub fn epsilon_for_episode(cfg: &DqnConfig, episode: usize) -> f64 {
    let decay_len = cfg.episodes.saturating_sub(cfg.epsilon_hold_episodes);
    if episode >= decay_len || decay_len == 0 {
        cfg.epsilon_final
    } else {
        let frac = episode as f64 / decay_len as f64;
        cfg.epsilon_start + (cfg.epsilon_final - cfg.epsilon_start) * frac
    }
}

struct Transition {
    state: [f64; 6],
    action: usize,
    reward: f64,
    next_state: [f64; 6],
    done: bool,
}

struct ReplayBuffer {
    data: Vec<Transition>,
    capacity: usize,
    next: usize,
}

impl ReplayBuffer {
    fn new(capacity: usize) -> Self {
        Self {
            data: Vec::with_capacity(capacity.min(1 << 20)),
            capacity,
            next: 0,
        }
    }

    fn push(&mut self, t: Transition) {
        if self.data.len() < self.capacity {
            self.data.push(t);
        } else {
            self.data[self.next] = t;
            self.next = (self.next + 1) % self.capacity;
        }
    }

    fn len(&self) -> usize {
        self.data.len()
    }

    fn sample<'a>(&'a self, batch: usize, rng: &mut impl Rng) -> Vec<&'a Transition> {
        (0..batch)
            .map(|_| &self.data[rng.gen_range(0..self.data.len())])
            .collect()
    }
}

pub fn train_dqn(
    env: &mut DispatchEnv,
    scaler: &ObsScaler,
    cfg: &DqnConfig,
    seed: u64,
) -> Result<(TrainedPolicy, TrainingCurve)> {
    if cfg.batch_size == 0 || cfg.train_freq == 0 || cfg.target_sync == 0 {
        return Err(Error::Config("dqn intervals must be positive".into()));
    }
    let n_actions = DISCRETE_LEVELS.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let spec = NetworkSpec::new(6, cfg.hidden.clone(), Activation::Tanh, n_actions, OutputHead::Linear)?;
    let mut q = Network::new(spec.clone(), AdamHyper::with_lr(cfg.learning_rate), &mut rng);
    let mut target_params = q.params.clone();
    let mut replay = ReplayBuffer::new(cfg.replay_capacity);
    let reward_scale = env.config().reward_scale;

    let mut curve = TrainingCurve::with_capacity(cfg.episodes);
    let mut global_step = 0usize;

    for episode in 0..cfg.episodes {
        let epsilon = epsilon_for_episode(cfg, episode);
        let mut obs = env.reset();
        let mut tally = EpisodeTally::default();

        loop {
            let s = scaler.scale(&obs);
            let action = if rng.gen::<f64>() < epsilon {
                rng.gen_range(0..n_actions)
            } else {
                argmax(&q.forward(&s)?)
            };
            let result = env.step(discrete_action_map(action)?)?;
            tally.record(&result);
            let s2 = scaler.scale(&result.observation);
            replay.push(Transition {
                state: s,
                action,
                reward: result.reward * reward_scale,
                next_state: s2,
                done: result.done,
            });
            global_step += 1;

            if replay.len() >= cfg.learning_start && global_step % cfg.train_freq == 0 {
                let batch = replay.sample(cfg.batch_size, &mut rng);
                let mut grad = q.zero_gradient();
                let scale = 1.0 / batch.len() as f64;
                for t in &batch {
                    let q_next = forward(&spec, &target_params, &t.next_state)?;
                    let max_next = q_next.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                    let target = if t.done {
                        t.reward
                    } else {
                        t.reward + cfg.gamma * max_next
                    };
                    let q_s = q.forward(&t.state)?;
                    let mut out_grad = vec![0.0; n_actions];
                    out_grad[t.action] = 2.0 * (q_s[t.action] - target) * scale;
                    let g = q.backward(&t.state, &out_grad)?;
                    for (acc, x) in grad.iter_mut().zip(g) {
                        *acc += x;
                    }
                }
                q.apply_gradient(&grad)?;
            }
            if global_step % cfg.target_sync == 0 {
                target_params.clone_from(&q.params);
            }

            if result.done {
                break;
            }
            obs = result.observation;
        }
        curve.push(tally.stats(episode, Some(epsilon)));
    }

    Ok((
        TrainedPolicy {
            kind: PolicyKind::Discrete,
            spec,
            params: q.params,
        },
        curve,
    ))
}
