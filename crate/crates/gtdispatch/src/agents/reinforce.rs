//! REINFORCE: Monte-Carlo policy gradient with a single policy network and
//! no baseline. Discrete (softmax over the seven levels) and continuous
//! (Gaussian with a learnable state-independent log-std) variants.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::agents::common::{
    discounted_returns, EpisodeTally, PolicyKind, TrainedPolicy, TrainingCurve,
};
use crate::env::{discrete_action_map, DispatchEnv, ObsScaler, DISCRETE_LEVELS};
use crate::error::{Error, Result};
use crate::nn::{Activation, AdamHyper, Network, NetworkSpec, OutputHead};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ReinforceConfig {
    pub episodes: usize,
    pub gamma: f64,
    pub learning_rate: f64,
    pub hidden: Vec<usize>,
}

impl Default for ReinforceConfig {
    fn default() -> Self {
        Self {
            episodes: 250,
            gamma: 0.99,
            learning_rate: 1e-3,
            hidden: vec![64, 64],
        }
    }
}

const MIN_PROB: f64 = 1e-8;
const LOG_STD_MIN: f64 = -4.0;
const LOG_STD_MAX: f64 = 1.0;

/// Train REINFORCE against the environment. Gradient ascent on
/// `sum_t log pi(a_t | s_t) * G_t`, one update per episode.
pub fn train_reinforce(
    env: &mut DispatchEnv,
    scaler: &ObsScaler,
    cfg: &ReinforceConfig,
    discrete: bool,
    seed: u64,
) -> Result<(TrainedPolicy, TrainingCurve)> {
    if !(cfg.gamma > 0.0 && cfg.gamma <= 1.0) {
        return Err(Error::Config(format!("gamma {} outside (0, 1]", cfg.gamma)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (spec, kind) = if discrete {
        (
            NetworkSpec::new(
                6,
                cfg.hidden.clone(),
                Activation::Tanh,
                DISCRETE_LEVELS.len(),
                OutputHead::Softmax,
            )?,
            PolicyKind::Discrete,
        )
    } else {
        (
            NetworkSpec::new(6, cfg.hidden.clone(), Activation::Tanh, 1, OutputHead::Gaussian)?,
            PolicyKind::Continuous,
        )
    };
    let mut net = Network::new(spec, AdamHyper::with_lr(cfg.learning_rate), &mut rng);
    let reward_scale = env.config().reward_scale;

    let mut curve = TrainingCurve::with_capacity(cfg.episodes);
    for episode in 0..cfg.episodes {
        let mut obs = env.reset();
        let mut tally = EpisodeTally::default();
        let mut states: Vec<[f64; 6]> = Vec::with_capacity(env.horizon());
        let mut grads_per_step: Vec<Vec<f64>> = Vec::with_capacity(env.horizon());
        let mut rewards: Vec<f64> = Vec::with_capacity(env.horizon());

        loop {
            let s = scaler.scale(&obs);
            let out = net.forward(&s)?;
            // Sample an action and remember d(-log pi)/d(output).
            let (action, out_grad) = if discrete {
                let idx = sample_categorical(&out, &mut rng);
                let mut g = vec![0.0; out.len()];
                g[idx] = -1.0 / out[idx].max(MIN_PROB);
                (discrete_action_map(idx)?, g)
            } else {
                let mean = out[0];
                let log_std = out[1].clamp(LOG_STD_MIN, LOG_STD_MAX);
                let std = log_std.exp();
                let a = mean + std * rng.sample::<f64, _>(rand_distr::StandardNormal);
                let z = (a - mean) / std;
                // -dlogp/dmean, -dlogp/dlog_std
                (a, vec![-z / std, -(z * z - 1.0)])
            };
            states.push(s);
            grads_per_step.push(out_grad);

            let result = env.step(action)?;
            tally.record(&result);
            rewards.push(result.reward * reward_scale);
            if result.done {
                break;
            }
            obs = result.observation;
        }

        let returns = discounted_returns(&rewards, cfg.gamma);
        let mut grad = net.zero_gradient();
        for ((s, mut g), ret) in states.iter().zip(grads_per_step).zip(returns) {
            for x in &mut g {
                *x *= ret;
            }
            let step_grad = net.backward(s, &g)?;
            for (acc, x) in grad.iter_mut().zip(step_grad) {
                *acc += x;
            }
        }
        if grad.iter().any(|g| !g.is_finite()) {
            return Err(Error::Training(format!(
                "non-finite REINFORCE gradient in episode {episode}"
            )));
        }
        net.apply_gradient(&grad)?;
        curve.push(tally.stats(episode, None));
    }

    Ok((
        TrainedPolicy {
            kind,
            spec: net.spec.clone(),
            params: net.params,
        },
        curve,
    ))
}

fn sample_categorical(probs: &[f64], rng: &mut impl Rng) -> usize {
    let mut u: f64 = rng.gen();
    for (i, &p) in probs.iter().enumerate() {
        u -= p;
        if u <= 0.0 {
            return i;
        }
    }
    probs.len() - 1
}
