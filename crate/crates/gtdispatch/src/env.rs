//! The hourly dispatch MDP: composes the surrogate, the cost ledger, and a
//! scenario into reset/step semantics with reward = negative cost.
//!
//! Demand not covered by the turbine is bought from the grid; surplus
//! production is wasted, never sold. The turbine's deliverable power bound
//! is re-evaluated every hour from ambient conditions.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cost::{
    fuel_cost, grid_cost, om_step, startup_correction, CostBreakdown, GtState, OmParameters,
    OmVariant,
};
use crate::error::{Error, Result};
use crate::scenario::{ScenarioRow, ScenarioTable};
use crate::surrogate::{fuel_rate, max_power, mechanical_idle_fuel_rate, SurrogateParams};

/// The seven discrete load fractions. Unevenly spaced: part-load efficiency
/// falls off quickly below half load, so nothing between 0 and 0.5 is
/// offered.
pub const DISCRETE_LEVELS: [f64; 7] = [0.0, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0];

/// Map a discrete action index to its load fraction.
pub fn discrete_action_map(index: usize) -> Result<f64> {
    DISCRETE_LEVELS
        .get(index)
        .copied()
        .ok_or_else(|| Error::Domain(format!("discrete action index {index} outside 0..=6")))
}

/// How raw agent actions in [0, 1] resolve to a commanded load fraction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ActionSpec {
    /// Snap to the nearest of the seven discrete levels.
    Discrete,
    /// Off below `off_threshold`, otherwise at least `min_load`. Mirrors the
    /// discrete set's jump from 0 to 0.5.
    Continuous { off_threshold: f64, min_load: f64 },
}

impl ActionSpec {
    pub fn continuous_default() -> Self {
        ActionSpec::Continuous {
            off_threshold: 0.25,
            min_load: 0.5,
        }
    }

    /// Resolve a raw action to a load fraction. Non-finite input is a
    /// domain error; finite input is clamped to [0, 1] first.
    pub fn resolve(&self, action: f64) -> Result<f64> {
        if !action.is_finite() {
            return Err(Error::Domain(format!("non-finite action {action}")));
        }
        let a = action.clamp(0.0, 1.0);
        Ok(match *self {
            ActionSpec::Discrete => {
                let mut best = DISCRETE_LEVELS[0];
                for &level in &DISCRETE_LEVELS[1..] {
                    if (a - level).abs() < (a - best).abs() {
                        best = level;
                    }
                }
                best
            }
            ActionSpec::Continuous {
                off_threshold,
                min_load,
            } => {
                if a < off_threshold {
                    0.0
                } else {
                    a.max(min_load)
                }
            }
        })
    }
}

/// Environment configuration shared by the environment and the DP oracle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EnvConfig {
    pub surrogate: SurrogateParams,
    pub om: OmParameters,
    pub om_variant: OmVariant,
    /// Natural gas price, C$/GJ.
    pub fuel_price: f64,
    pub action_spec: ActionSpec,
    /// Factor applied to rewards handed to learning agents. The env itself
    /// always reports unscaled C$.
    pub reward_scale: f64,
}

impl Default for EnvConfig {
    fn default() -> Self {
        Self {
            surrogate: SurrogateParams::default(),
            om: OmParameters::default(),
            om_variant: OmVariant::Dynamic,
            fuel_price: 3.9,
            action_spec: ActionSpec::Discrete,
            reward_scale: 1e-3,
        }
    }
}

impl EnvConfig {
    pub fn validate(&self) -> Result<()> {
        self.surrogate.validate()?;
        self.om.validate()?;
        if !(self.fuel_price.is_finite()) {
            return Err(Error::Config("fuel price must be finite".into()));
        }
        if !(self.reward_scale > 0.0) {
            return Err(Error::Config("reward scale must be positive".into()));
        }
        Ok(())
    }
}

/// The six-dimensional observation handed to agents.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observation {
    pub pool_price: f64,
    pub load: f64,
    pub temperature: f64,
    pub pressure: f64,
    pub rel_humidity: f64,
    /// O&M state machine mode: 0 off, 1 running, 2 extended.
    pub gt_mode: u8,
}

impl Observation {
    fn from_row(row: &ScenarioRow, state: GtState) -> Self {
        Self {
            pool_price: row.pool_price,
            load: row.demand,
            temperature: row.ambient.temperature,
            pressure: row.ambient.pressure,
            rel_humidity: row.ambient.rel_humidity,
            gt_mode: state.mode.as_index(),
        }
    }
}

/// Per-step diagnostics alongside the reward.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepInfo {
    pub cost: CostBreakdown,
    /// Net turbine energy delivered this hour, MWh.
    pub p_gt: f64,
    /// Energy bought from the grid, MWh.
    pub p_grid: f64,
    /// Wasted surplus energy, MWh.
    pub p_waste: f64,
    /// Resolved load fraction after action mapping.
    pub load_fraction: f64,
    /// True if the turbine transitioned off -> on this hour.
    pub started: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepResult {
    pub observation: Observation,
    /// Negative total cost of the hour, C$.
    pub reward: f64,
    pub done: bool,
    pub info: StepInfo,
}

/// Outcome of one hour given a scenario row, the O&M state, and a resolved
/// load fraction. This is the single cost/transition path shared by the
/// environment and the DP oracle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transition {
    pub cost: CostBreakdown,
    pub new_state: GtState,
    pub p_gt: f64,
    pub p_grid: f64,
    pub p_waste: f64,
    pub started: bool,
}

/// Evaluate one hour of dispatch.
pub fn transition(
    row: &ScenarioRow,
    state: GtState,
    load_fraction: f64,
    cfg: &EnvConfig,
) -> Result<Transition> {
    let gt_on = load_fraction > 0.0;
    let p_max = max_power(&row.ambient, &cfg.surrogate);
    let commanded_power = load_fraction * p_max;
    let commanded_fuel = fuel_rate(load_fraction, &row.ambient, &cfg.surrogate)?;

    let started = gt_on && state.mode == crate::cost::GtMode::Off;
    let (p_gt, fuel) = if started {
        let idle = mechanical_idle_fuel_rate(&row.ambient, &cfg.surrogate);
        startup_correction(commanded_power, commanded_fuel, idle, row.ambient.temperature)
    } else {
        (commanded_power, commanded_fuel)
    };

    let (p_grid, p_waste) = if p_gt >= row.demand {
        (0.0, p_gt - row.demand)
    } else {
        (row.demand - p_gt, 0.0)
    };

    let (om, new_state) = om_step(state, gt_on, &cfg.om, cfg.om_variant);
    let cost = CostBreakdown::new(
        fuel_cost(fuel, cfg.fuel_price)?,
        grid_cost(row.pool_price, p_grid)?,
        om,
    );

    Ok(Transition {
        cost,
        new_state,
        p_gt,
        p_grid,
        p_waste,
        started,
    })
}

/// The hourly dispatch environment. One instance is single-threaded;
/// independent instances share the scenario read-only.
#[derive(Debug, Clone)]
pub struct DispatchEnv {
    scenario: Arc<ScenarioTable>,
    cfg: EnvConfig,
    hour: usize,
    state: GtState,
    done: bool,
}

impl DispatchEnv {
    /// Standard full-year environment; the scenario must have 8760 hours.
    pub fn new(scenario: Arc<ScenarioTable>, cfg: EnvConfig) -> Result<Self> {
        scenario.require_full_year()?;
        Self::with_horizon(scenario, cfg)
    }

    /// Environment over a scenario of any length (validation and toy
    /// scenarios).
    pub fn with_horizon(scenario: Arc<ScenarioTable>, cfg: EnvConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Self {
            scenario,
            cfg,
            hour: 0,
            state: GtState::off(),
            done: false,
        })
    }

    pub fn config(&self) -> &EnvConfig {
        &self.cfg
    }

    pub fn scenario(&self) -> &ScenarioTable {
        &self.scenario
    }

    pub fn horizon(&self) -> usize {
        self.scenario.len()
    }

    pub fn hour(&self) -> usize {
        self.hour
    }

    pub fn gt_state(&self) -> GtState {
        self.state
    }

    pub fn is_done(&self) -> bool {
        self.done
    }

    /// Reset the clock to hour 0 with the turbine off.
    pub fn reset(&mut self) -> Observation {
        self.hour = 0;
        self.state = GtState::off();
        self.done = false;
        Observation::from_row(self.scenario.row(0), self.state)
    }

    /// Advance one hour with a raw action in [0, 1].
    pub fn step(&mut self, action: f64) -> Result<StepResult> {
        if self.done {
            return Err(Error::Usage("step called on a finished episode".into()));
        }
        let load_fraction = self.cfg.action_spec.resolve(action)?;
        let row = *self.scenario.row(self.hour);
        let t = transition(&row, self.state, load_fraction, &self.cfg)?;

        self.state = t.new_state;
        self.hour += 1;
        self.done = self.hour == self.scenario.len();

        let obs_row = if self.done {
            row
        } else {
            *self.scenario.row(self.hour)
        };
        Ok(StepResult {
            observation: Observation::from_row(&obs_row, self.state),
            reward: -t.cost.total,
            done: self.done,
            info: StepInfo {
                cost: t.cost,
                p_gt: t.p_gt,
                p_grid: t.p_grid,
                p_waste: t.p_waste,
                load_fraction,
                started: t.started,
            },
        })
    }
}

/// Affine per-feature normalization of observations to [0, 1], with the
/// min/max taken from the training scenario. The mode enumeration maps to
/// {0, 0.5, 1}.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObsScaler {
    mins: [f64; 5],
    maxs: [f64; 5],
}

impl ObsScaler {
    pub fn from_scenario(scenario: &ScenarioTable) -> Self {
        let mut mins = [f64::INFINITY; 5];
        let mut maxs = [f64::NEG_INFINITY; 5];
        for row in scenario.rows() {
            let feats = [
                row.pool_price,
                row.demand,
                row.ambient.temperature,
                row.ambient.pressure,
                row.ambient.rel_humidity,
            ];
            for (i, f) in feats.iter().enumerate() {
                mins[i] = mins[i].min(*f);
                maxs[i] = maxs[i].max(*f);
            }
        }
        Self { mins, maxs }
    }

    fn scale_feature(&self, i: usize, v: f64) -> f64 {
        let span = self.maxs[i] - self.mins[i];
        if span <= 0.0 {
            0.0
        } else {
            (v - self.mins[i]) / span
        }
    }

    pub fn scale(&self, obs: &Observation) -> [f64; 6] {
        [
            self.scale_feature(0, obs.pool_price),
            self.scale_feature(1, obs.load),
            self.scale_feature(2, obs.temperature),
            self.scale_feature(3, obs.pressure),
            self.scale_feature(4, obs.rel_humidity),
            obs.gt_mode as f64 / 2.0,
        ]
    }
}
