//! Rule-based baseline: a single if-then-else over price and demand
//! thresholds. When the condition holds the turbine runs at baseload
//! (100%), otherwise it is off.

use serde::{Deserialize, Serialize};

use crate::agents::common::{EpisodeStats, EpisodeTally};
use crate::env::{DispatchEnv, Observation};
use crate::error::{Error, Result};

/// Condition forms, in tie-break order: simpler conditions win, then lower
/// thresholds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Rule {
    PriceAbove { price: f64 },
    DemandAbove { demand: f64 },
    And { price: f64, demand: f64 },
    Or { price: f64, demand: f64 },
}

impl Rule {
    pub fn holds(&self, obs: &Observation) -> bool {
        match *self {
            Rule::PriceAbove { price } => obs.pool_price > price,
            Rule::DemandAbove { demand } => obs.load > demand,
            Rule::And { price, demand } => obs.pool_price > price && obs.load > demand,
            Rule::Or { price, demand } => obs.pool_price > price || obs.load > demand,
        }
    }

    /// Raw action: baseload when the condition holds, off otherwise.
    pub fn act(&self, obs: &Observation) -> f64 {
        if self.holds(obs) {
            1.0
        } else {
            0.0
        }
    }
}

impl std::fmt::Display for Rule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            Rule::PriceAbove { price } => write!(f, "price > {price}"),
            Rule::DemandAbove { demand } => write!(f, "demand > {demand}"),
            Rule::And { price, demand } => write!(f, "price > {price} AND demand > {demand}"),
            Rule::Or { price, demand } => write!(f, "price > {price} OR demand > {demand}"),
        }
    }
}

/// Run one episode under a rule and report the stats.
pub fn evaluate_rule(env: &mut DispatchEnv, rule: &Rule, episode: usize) -> Result<EpisodeStats> {
    let mut obs = env.reset();
    let mut tally = EpisodeTally::default();
    loop {
        let result = env.step(rule.act(&obs))?;
        tally.record(&result);
        if result.done {
            break;
        }
        obs = result.observation;
    }
    Ok(tally.stats(episode, None))
}

/// Enumerate all rules over the threshold grids, evaluate each for one
/// episode, and return the best with its episodic reward. Enumeration
/// order is deterministic and doubles as the tie-break: price-only rules
/// first, then demand-only, AND, OR, each with ascending thresholds.
pub fn search_rules(
    env: &mut DispatchEnv,
    price_grid: &[f64],
    demand_grid: &[f64],
) -> Result<(Rule, f64)> {
    if price_grid.is_empty() || demand_grid.is_empty() {
        return Err(Error::Config("rule threshold grids must be non-empty".into()));
    }
    let mut prices = price_grid.to_vec();
    let mut demands = demand_grid.to_vec();
    prices.sort_by(|a, b| a.total_cmp(b));
    demands.sort_by(|a, b| a.total_cmp(b));

    let mut rules = Vec::new();
    for &p in &prices {
        rules.push(Rule::PriceAbove { price: p });
    }
    for &d in &demands {
        rules.push(Rule::DemandAbove { demand: d });
    }
    for &p in &prices {
        for &d in &demands {
            rules.push(Rule::And { price: p, demand: d });
        }
    }
    for &p in &prices {
        for &d in &demands {
            rules.push(Rule::Or { price: p, demand: d });
        }
    }

    let mut best: Option<(Rule, f64)> = None;
    for rule in rules {
        let stats = evaluate_rule(env, &rule, 0)?;
        if best.as_ref().map_or(true, |(_, r)| stats.reward_cad > *r) {
            best = Some((rule, stats.reward_cad));
        }
    }
    Ok(best.expect("at least one rule evaluated"))
}

/// Default threshold grids for the full search.
pub fn default_price_grid() -> Vec<f64> {
    (0..=60).map(|i| 5.0 * i as f64).collect() // 0..300 C$/MWh
}

pub fn default_demand_grid() -> Vec<f64> {
    (0..=17).map(|i| 2.0 * i as f64).collect() // 0..34 MW
}
