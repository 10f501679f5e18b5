//! Cross-entropy method baseline: samples policy parameters from a
//! diagonal Gaussian, evaluates one episode per candidate, and refits the
//! distribution to the elite fraction. Returns the best policy ever seen.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::agents::common::{EpisodeTally, PolicyKind, TrainedPolicy, TrainingCurve};
use crate::env::{DispatchEnv, ObsScaler};
use crate::error::{Error, Result};
use crate::nn::{forward, init_params, Activation, NetworkSpec, OutputHead};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CemConfig {
    /// Total episode budget; generations = episodes / population.
    pub episodes: usize,
    pub population: usize,
    pub elite_fraction: f64,
    pub initial_std: f64,
    /// Lower bound on the sampling standard deviation, so a collapsed
    /// distribution keeps exploring.
    pub std_floor: f64,
    pub hidden: Vec<usize>,
}

impl Default for CemConfig {
    fn default() -> Self {
        Self {
            episodes: 250,
            population: 25,
            elite_fraction: 0.2,
            initial_std: 0.5,
            std_floor: 0.05,
            hidden: vec![32],
        }
    }
}

pub fn train_cem(
    env: &mut DispatchEnv,
    scaler: &ObsScaler,
    cfg: &CemConfig,
    seed: u64,
) -> Result<(TrainedPolicy, TrainingCurve)> {
    if cfg.population < 2 {
        return Err(Error::Config("population must be at least 2".into()));
    }
    if !(cfg.elite_fraction > 0.0 && cfg.elite_fraction <= 1.0) {
        return Err(Error::Config(format!(
            "elite fraction {} outside (0, 1]",
            cfg.elite_fraction
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let spec = NetworkSpec::new(6, cfg.hidden.clone(), Activation::Tanh, 1, OutputHead::Linear)?;
    let dim = spec.param_count();

    let mut mu = init_params(&spec, &mut rng);
    let mut sigma = vec![cfg.initial_std.max(cfg.std_floor); dim];

    let n_elite = ((cfg.population as f64 * cfg.elite_fraction).ceil() as usize)
        .clamp(1, cfg.population);

    let mut curve = TrainingCurve::with_capacity(cfg.episodes);
    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut episode = 0usize;

    while episode < cfg.episodes {
        let pop = cfg.population.min(cfg.episodes - episode).max(1);
        let mut scored: Vec<(f64, Vec<f64>)> = Vec::with_capacity(pop);
        for _ in 0..pop {
            let candidate: Vec<f64> = mu
                .iter()
                .zip(&sigma)
                .map(|(m, s)| m + s * rng.sample::<f64, _>(rand_distr::StandardNormal))
                .collect();
            let stats = rollout(env, scaler, &spec, &candidate, episode)?;
            curve.push(stats);
            if best.as_ref().map_or(true, |(r, _)| stats.reward_cad > *r) {
                best = Some((stats.reward_cad, candidate.clone()));
            }
            scored.push((stats.reward_cad, candidate));
            episode += 1;
        }

        // Refit to the elites of this generation.
        scored.sort_by(|a, b| b.0.total_cmp(&a.0));
        let elites: Vec<&Vec<f64>> = scored.iter().take(n_elite.min(scored.len())).map(|(_, p)| p).collect();
        for d in 0..dim {
            let mean = elites.iter().map(|p| p[d]).sum::<f64>() / elites.len() as f64;
            let var = elites
                .iter()
                .map(|p| (p[d] - mean).powi(2))
                .sum::<f64>()
                / elites.len() as f64;
            mu[d] = mean;
            sigma[d] = var.sqrt().max(cfg.std_floor);
        }
    }

    let (_, params) = best.expect("at least one candidate evaluated");
    Ok((
        TrainedPolicy {
            kind: PolicyKind::Continuous,
            spec,
            params,
        },
        curve,
    ))
}

fn rollout(
    env: &mut DispatchEnv,
    scaler: &ObsScaler,
    spec: &NetworkSpec,
    params: &[f64],
    episode: usize,
) -> Result<crate::agents::common::EpisodeStats> {
    let mut obs = env.reset();
    let mut tally = EpisodeTally::default();
    loop {
        let s = scaler.scale(&obs);
        let action = forward(spec, params, &s)?[0].clamp(0.0, 1.0);
        let result = env.step(action)?;
        tally.record(&result);
        if result.done {
            break;
        }
        obs = result.observation;
    }
    Ok(tally.stats(episode, None))
}
