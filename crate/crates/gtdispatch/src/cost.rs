//! Per-hour cost model: grid purchase, fuel, the dynamic O&M state machine,
//! and the temperature-dependent start-up correction.
//!
//! Variable O&M is charged from usage history, not hours alone: a cycle
//! charge on every start, and an hourly charge once a cycle runs past the
//! hours-per-cycle threshold `round(life_hours / life_cycles)`. The cost for
//! an hour is decided from the state *before* the hour's transition, so
//! hours 2 through `threshold` of a cycle carry no variable O&M.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// O&M cost parameters (lifetime and cost figures for the modeled unit).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OmParameters {
    /// Expected unit life in operating hours.
    pub life_hours: f64,
    /// Expected unit life in start/stop cycles.
    pub life_cycles: f64,
    /// Fixed annual O&M cost, C$/year.
    pub fixed_annual: f64,
    /// Lifetime variable O&M cost, C$.
    pub variable_lifetime: f64,
    /// Hours over which the fixed cost is spread.
    pub hours_per_year: f64,
}

impl Default for OmParameters {
    fn default() -> Self {
        Self {
            life_hours: 200_000.0,
            life_cycles: 26_000.0,
            fixed_annual: 780_000.0,
            variable_lifetime: 33_000_000.0,
            hours_per_year: 8760.0,
        }
    }
}

impl OmParameters {
    pub fn validate(&self) -> Result<()> {
        if self.life_hours <= 0.0
            || self.life_cycles <= 0.0
            || self.fixed_annual <= 0.0
            || self.variable_lifetime <= 0.0
            || self.hours_per_year <= 0.0
        {
            return Err(Error::Config("all O&M parameters must be positive".into()));
        }
        if self.cycle_hour_threshold() < 1 {
            return Err(Error::Config(
                "round(life_hours / life_cycles) must be at least 1".into(),
            ));
        }
        Ok(())
    }

    /// Consecutive operating hours after which the hourly charge applies:
    /// `round(life_hours / life_cycles)`. 8 with the default figures.
    pub fn cycle_hour_threshold(&self) -> u32 {
        (self.life_hours / self.life_cycles).round() as u32
    }

    /// Fixed O&M per calendar hour, C$.
    pub fn fixed_hourly(&self) -> f64 {
        self.fixed_annual / self.hours_per_year
    }

    /// Charge per started cycle, C$.
    pub fn cycle_charge(&self) -> f64 {
        self.variable_lifetime / self.life_cycles
    }

    /// Charge per operating hour beyond the threshold, C$.
    pub fn hourly_charge(&self) -> f64 {
        self.variable_lifetime / self.life_hours
    }
}

/// Operating mode of the O&M state machine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GtMode {
    Off = 0,
    Running = 1,
    Extended = 2,
}

impl GtMode {
    pub fn as_index(self) -> u8 {
        self as u8
    }
}

/// The O&M state carried between hours: mode plus the consecutive-hour
/// counter of the current cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GtState {
    pub mode: GtMode,
    pub hcount: u32,
}

impl GtState {
    pub fn off() -> Self {
        Self {
            mode: GtMode::Off,
            hcount: 0,
        }
    }

    /// State with the given consecutive-hour count; the mode follows from
    /// the count and the threshold.
    pub fn from_hcount(hcount: u32, threshold: u32) -> Self {
        let mode = if hcount == 0 {
            GtMode::Off
        } else if hcount >= threshold {
            GtMode::Extended
        } else {
            GtMode::Running
        };
        Self { mode, hcount }
    }
}

impl Default for GtState {
    fn default() -> Self {
        Self::off()
    }
}

/// Which variable-O&M scheme the environment charges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OmVariant {
    /// Cycle charge on start, hourly charge past the threshold.
    Dynamic,
    /// Hourly charge for every operating hour, no cycle charge.
    HourlyOnly,
    /// Fixed cost only.
    NoVariable,
}

impl OmVariant {
    pub const ALL: [OmVariant; 3] = [OmVariant::Dynamic, OmVariant::HourlyOnly, OmVariant::NoVariable];

    pub fn label(self) -> &'static str {
        match self {
            OmVariant::Dynamic => "dynamic",
            OmVariant::HourlyOnly => "hourly_only",
            OmVariant::NoVariable => "no_variable",
        }
    }
}

impl std::str::FromStr for OmVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dynamic" => Ok(OmVariant::Dynamic),
            "hourly_only" | "hourly" => Ok(OmVariant::HourlyOnly),
            "no_variable" | "none" => Ok(OmVariant::NoVariable),
            other => Err(Error::Config(format!("unknown O&M variant '{other}'"))),
        }
    }
}

/// O&M cost of one hour, split by origin.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct OmCost {
    pub fixed: f64,
    pub cycle: f64,
    pub hourly: f64,
}

impl OmCost {
    pub fn total(&self) -> f64 {
        self.fixed + self.cycle + self.hourly
    }
}

/// Per-hour cost ledger.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CostBreakdown {
    pub fuel: f64,
    pub grid: f64,
    pub om_fixed: f64,
    pub om_cycle: f64,
    pub om_hourly: f64,
    pub total: f64,
}

impl CostBreakdown {
    pub fn new(fuel: f64, grid: f64, om: OmCost) -> Self {
        Self {
            fuel,
            grid,
            om_fixed: om.fixed,
            om_cycle: om.cycle,
            om_hourly: om.hourly,
            total: fuel + grid + om.fixed + om.cycle + om.hourly,
        }
    }
}

/// Advance the O&M state machine by one hour and return the O&M cost
/// charged for that hour.
///
/// The charge is decided from `state` before the transition: a cycle charge
/// when starting from off, an hourly charge when already in extended
/// operation. The fixed hourly cost accrues unconditionally, including in
/// off hours. State transitions are identical across variants.
pub fn om_step(
    state: GtState,
    gt_on: bool,
    params: &OmParameters,
    variant: OmVariant,
) -> (OmCost, GtState) {
    let mut cost = OmCost {
        fixed: params.fixed_hourly(),
        ..OmCost::default()
    };
    if gt_on {
        match variant {
            OmVariant::Dynamic => match state.mode {
                GtMode::Off => cost.cycle = params.cycle_charge(),
                GtMode::Extended => cost.hourly = params.hourly_charge(),
                GtMode::Running => {}
            },
            OmVariant::HourlyOnly => cost.hourly = params.hourly_charge(),
            OmVariant::NoVariable => {}
        }
    }

    let new_state = if gt_on {
        GtState::from_hcount(state.hcount + 1, params.cycle_hour_threshold())
    } else {
        GtState::off()
    };
    (cost, new_state)
}

/// Cost of electricity purchased from the grid, C$. Pool prices may be
/// negative; the ledger passes them through unchanged.
pub fn grid_cost(price: f64, p_grid: f64) -> Result<f64> {
    if !(p_grid >= 0.0) {
        return Err(Error::Domain(format!(
            "grid purchase must be non-negative, got {p_grid}"
        )));
    }
    Ok(price * p_grid)
}

/// Cost of burnt fuel, C$.
pub fn fuel_cost(q_fuel: f64, k_fuel: f64) -> Result<f64> {
    if !(q_fuel >= 0.0) {
        return Err(Error::Domain(format!(
            "fuel quantity must be non-negative, got {q_fuel}"
        )));
    }
    Ok(k_fuel * q_fuel)
}

/// Net energy and fuel for an hour in which the unit starts from off.
///
/// A start takes 20 minutes to baseload; below 0 C an additional 15 minutes
/// of mechanical-idle warm-up is needed. During the start interval the unit
/// burns fuel at the mechanical-idle rate and delivers no power; for the
/// rest of the hour it runs at the commanded level.
pub fn startup_correction(
    commanded_power: f64,
    commanded_fuel: f64,
    idle_fuel: f64,
    temperature: f64,
) -> (f64, f64) {
    let start_minutes = if temperature < 0.0 { 35.0 } else { 20.0 };
    let start_frac = start_minutes / 60.0;
    let net_energy = commanded_power * (1.0 - start_frac);
    let fuel = idle_fuel * start_frac + commanded_fuel * (1.0 - start_frac);
    (net_energy, fuel)
}
