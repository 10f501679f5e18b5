//! Exact optimal dispatch for deterministic scenarios.
//!
//! Backward induction over (hour, consecutive-hour count). The count is
//! capped at the hours-per-cycle threshold: the per-hour cost and the state
//! transition depend on the count only through off / below-threshold /
//! at-or-above-threshold, so collapsing everything above the threshold is
//! lossless. An exhaustive enumerator over short horizons validates that
//! argument.

use crate::cost::GtState;
use crate::env::{transition, EnvConfig};
use crate::error::{Error, Result};
use crate::scenario::ScenarioTable;

/// An optimal schedule and its exact cost.
#[derive(Debug, Clone, PartialEq)]
pub struct DpSolution {
    /// Minimum total cost over the horizon, C$.
    pub cost: f64,
    /// Optimal load fraction per hour.
    pub schedule: Vec<f64>,
}

/// Exact optimum over the discrete action levels by dynamic programming.
///
/// Per-transition cost is identical to the environment's step, including
/// the start-up correction and the configured O&M variant.
pub fn dp_optimal(
    scenario: &ScenarioTable,
    action_levels: &[f64],
    cfg: &EnvConfig,
) -> Result<DpSolution> {
    if action_levels.is_empty() {
        return Err(Error::Config("empty action level set".into()));
    }
    cfg.validate()?;
    let horizon = scenario.len();
    let threshold = cfg.om.cycle_hour_threshold() as usize;
    let n_states = threshold + 1; // capped hcount 0..=threshold

    // value[s] = cost-to-go from the current hour in capped state s.
    let mut value = vec![0.0f64; n_states];
    let mut best_action = vec![vec![0usize; n_states]; horizon];

    for hour in (0..horizon).rev() {
        let row = scenario.row(hour);
        let mut next = vec![f64::INFINITY; n_states];
        for s in 0..n_states {
            let state = GtState::from_hcount(s as u32, threshold as u32);
            let mut best = f64::INFINITY;
            let mut best_a = 0;
            for (a, &level) in action_levels.iter().enumerate() {
                let t = transition(row, state, level, cfg)?;
                let s_next = (t.new_state.hcount as usize).min(threshold);
                let total = t.cost.total + value[s_next];
                if total < best {
                    best = total;
                    best_a = a;
                }
            }
            next[s] = best;
            best_action[hour][s] = best_a;
        }
        value = next;
    }

    // Forward pass to extract the schedule.
    let mut schedule = Vec::with_capacity(horizon);
    let mut state = GtState::off();
    for hour in 0..horizon {
        let s = (state.hcount as usize).min(threshold);
        let level = action_levels[best_action[hour][s]];
        schedule.push(level);
        let t = transition(scenario.row(hour), state, level, cfg)?;
        state = t.new_state;
    }

    Ok(DpSolution {
        cost: value[0],
        schedule,
    })
}

/// Exact optimum by full enumeration of action sequences. Only feasible for
/// short horizons; refuses when the sequence count exceeds the bound.
pub fn exhaustive_optimal(
    scenario: &ScenarioTable,
    action_levels: &[f64],
    cfg: &EnvConfig,
) -> Result<DpSolution> {
    const MAX_SEQUENCES: f64 = 6.5e6;
    let horizon = scenario.len();
    let count = (action_levels.len() as f64).powi(horizon as i32);
    if count > MAX_SEQUENCES {
        return Err(Error::Config(format!(
            "exhaustive search over {}^{horizon} = {count:.3e} sequences exceeds the {MAX_SEQUENCES:.1e} bound",
            action_levels.len()
        )));
    }
    cfg.validate()?;

    struct Search<'a> {
        scenario: &'a ScenarioTable,
        levels: &'a [f64],
        cfg: &'a EnvConfig,
        best_cost: f64,
        best_schedule: Vec<usize>,
        current: Vec<usize>,
        path_costs: Vec<f64>,
    }

    impl Search<'_> {
        fn visit(&mut self, hour: usize, state: GtState) -> Result<()> {
            if hour == self.scenario.len() {
                // Sum back to front, matching the cost-to-go recursion's
                // association so equal optima compare exactly equal.
                let cost = self.path_costs.iter().rev().fold(0.0, |acc, &c| c + acc);
                if cost < self.best_cost {
                    self.best_cost = cost;
                    self.best_schedule = self.current.clone();
                }
                return Ok(());
            }
            for (a, &level) in self.levels.iter().enumerate() {
                let t = transition(self.scenario.row(hour), state, level, self.cfg)?;
                self.current.push(a);
                self.path_costs.push(t.cost.total);
                self.visit(hour + 1, t.new_state)?;
                self.path_costs.pop();
                self.current.pop();
            }
            Ok(())
        }
    }

    let mut search = Search {
        scenario,
        levels: action_levels,
        cfg,
        best_cost: f64::INFINITY,
        best_schedule: Vec::new(),
        current: Vec::with_capacity(horizon),
        path_costs: Vec::with_capacity(horizon),
    };
    search.visit(0, GtState::off())?;

    Ok(DpSolution {
        cost: search.best_cost,
        schedule: search
            .best_schedule
            .iter()
            .map(|&a| action_levels[a])
            .collect(),
    })
}

/// Replay a schedule through the transition function and return the total
/// cost (consistency check against the DP value).
pub fn replay_cost(scenario: &ScenarioTable, schedule: &[f64], cfg: &EnvConfig) -> Result<f64> {
    if schedule.len() != scenario.len() {
        return Err(Error::Config(format!(
            "schedule length {} does not match scenario length {}",
            schedule.len(),
            scenario.len()
        )));
    }
    let mut state = GtState::off();
    let mut total = 0.0;
    for (hour, &level) in schedule.iter().enumerate() {
        let t = transition(scenario.row(hour), state, level, cfg)?;
        total += t.cost.total;
        state = t.new_state;
    }
    Ok(total)
}
