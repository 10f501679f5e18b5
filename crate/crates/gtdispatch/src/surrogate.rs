//! Surrogate thermodynamic model of the gas turbine.
//!
//! Maps ambient conditions and a commanded load fraction to maximum
//! deliverable power, net power, and fuel energy flow. The fuel model is a
//! Willans line: affine in load with a positive zero-load intercept, which
//! gives strictly decreasing efficiency at part load and doubles as the
//! mechanical-idle fuel rate used by the start-up correction.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Reference pressure at ISO rating conditions, kPa.
pub const ISO_PRESSURE_KPA: f64 = 101.325;
/// Reference temperature at ISO rating conditions, degrees Celsius.
pub const ISO_TEMPERATURE_C: f64 = 15.0;
/// Energy conversion: 1 MWh = 3.6 GJ.
pub const GJ_PER_MWH: f64 = 3.6;

/// Ambient conditions at one hour.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AmbientConditions {
    /// Dry-bulb temperature, degrees Celsius.
    pub temperature: f64,
    /// Station pressure, kilopascal.
    pub pressure: f64,
    /// Relative humidity, percent in [0, 100].
    pub rel_humidity: f64,
}

impl AmbientConditions {
    pub fn new(temperature: f64, pressure: f64, rel_humidity: f64) -> Result<Self> {
        let c = Self {
            temperature,
            pressure,
            rel_humidity,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.pressure > 0.0) {
            return Err(Error::Domain(format!(
                "ambient pressure must be positive, got {}",
                self.pressure
            )));
        }
        if !(-60.0..=60.0).contains(&self.temperature) {
            return Err(Error::Domain(format!(
                "ambient temperature {} outside [-60, 60] C",
                self.temperature
            )));
        }
        if !(0.0..=100.0).contains(&self.rel_humidity) {
            return Err(Error::Domain(format!(
                "relative humidity {} outside [0, 100] %",
                self.rel_humidity
            )));
        }
        Ok(())
    }
}

/// Calibration constants for the surrogate.
///
/// Humidity is carried in the data model but has no effect on the default
/// model; its influence on aeroderivative output is second order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SurrogateParams {
    /// Reference baseload at 15 C / 101.325 kPa, MW.
    pub p_iso: f64,
    /// Mechanical/generator power ceiling (cold-day flat rating), MW.
    pub p_flat: f64,
    /// Per-kelvin output derate coefficient.
    pub c_temp: f64,
    /// Full-load electrical efficiency.
    pub eta_full: f64,
    /// Idle fuel fraction (Willans-line intercept as a fraction of
    /// full-load fuel).
    pub c_idle: f64,
}

impl Default for SurrogateParams {
    fn default() -> Self {
        Self {
            p_iso: 32.0,
            p_flat: 30.3,
            c_temp: 0.007,
            eta_full: 0.40,
            c_idle: 0.2,
        }
    }
}

impl SurrogateParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.eta_full > 0.0 && self.eta_full < 1.0) {
            return Err(Error::Config(format!(
                "eta_full must be in (0,1), got {}",
                self.eta_full
            )));
        }
        if !(self.c_idle >= 0.0 && self.c_idle < 1.0) {
            return Err(Error::Config(format!(
                "c_idle must be in [0,1), got {}",
                self.c_idle
            )));
        }
        if self.p_iso <= 0.0 || self.p_flat <= 0.0 || self.c_temp <= 0.0 {
            return Err(Error::Config(
                "p_iso, p_flat, and c_temp must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// One resolved operating point of the turbine.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GtOperatingPoint {
    /// Commanded load fraction in [0, 1].
    pub load_fraction: f64,
    /// Net electrical power, MW.
    pub net_power: f64,
    /// Fuel energy flow, GJ/h.
    pub fuel_energy_rate: f64,
}

/// Maximum deliverable power under the given ambient conditions, MW.
///
/// Output derates linearly with temperature above 15 C and scales with the
/// pressure ratio to ISO conditions; the flat rating caps cold-day output.
pub fn max_power(ambient: &AmbientConditions, params: &SurrogateParams) -> f64 {
    let pressure_ratio = ambient.pressure / ISO_PRESSURE_KPA;
    let temp_factor = 1.0 - params.c_temp * (ambient.temperature - ISO_TEMPERATURE_C);
    (params.p_iso * pressure_ratio * temp_factor)
        .min(params.p_flat)
        .max(0.0)
}

/// Fuel energy flow at the commanded load fraction, GJ/h.
///
/// Willans line: `(c_idle + (1 - c_idle) * l) * q_full` for `l > 0`, zero
/// when the unit is off. `q_full = max_power * 3.6 / eta_full`.
pub fn fuel_rate(
    load_fraction: f64,
    ambient: &AmbientConditions,
    params: &SurrogateParams,
) -> Result<f64> {
    if !(0.0..=1.0).contains(&load_fraction) {
        return Err(Error::Domain(format!(
            "load fraction {} outside [0, 1]",
            load_fraction
        )));
    }
    if load_fraction == 0.0 {
        return Ok(0.0);
    }
    let q_full = max_power(ambient, params) * GJ_PER_MWH / params.eta_full;
    Ok((params.c_idle + (1.0 - params.c_idle) * load_fraction) * q_full)
}

/// Fuel energy flow at mechanical idle, GJ/h (the Willans-line intercept).
///
/// Used as the burn rate during the start-up warm-up interval.
pub fn mechanical_idle_fuel_rate(ambient: &AmbientConditions, params: &SurrogateParams) -> f64 {
    params.c_idle * max_power(ambient, params) * GJ_PER_MWH / params.eta_full
}

/// Resolve a full operating point: net power and fuel flow at the commanded
/// load fraction.
pub fn operating_point(
    load_fraction: f64,
    ambient: &AmbientConditions,
    params: &SurrogateParams,
) -> Result<GtOperatingPoint> {
    let fuel_energy_rate = fuel_rate(load_fraction, ambient, params)?;
    Ok(GtOperatingPoint {
        load_fraction,
        net_power: load_fraction * max_power(ambient, params),
        fuel_energy_rate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn amb(t: f64, p: f64, rh: f64) -> AmbientConditions {
        AmbientConditions::new(t, p, rh).unwrap()
    }

    #[test]
    fn max_power_iso_conditions_hits_flat_rating() {
        let p = SurrogateParams::default();
        // 32.0 at ISO exceeds the 30.3 MW ceiling.
        assert_relative_eq!(max_power(&amb(15.0, 101.325, 60.0), &p), 30.3);
    }

    #[test]
    fn max_power_hot_low_pressure_derates() {
        let p = SurrogateParams::default();
        let got = max_power(&amb(35.0, 93.0, 30.0), &p);
        let want = 32.0 * (93.0 / 101.325) * (1.0 - 0.007 * 20.0);
        assert_relative_eq!(got, want);
        assert_relative_eq!(got, 25.26, epsilon = 0.01);
    }

    #[test]
    fn max_power_cold_day_clamps_to_flat_rating() {
        let p = SurrogateParams::default();
        let unclamped = 32.0 * (95.0 / 101.325) * (1.0 - 0.007 * (-45.0));
        assert!(unclamped > 39.0);
        assert_relative_eq!(max_power(&amb(-30.0, 95.0, 80.0), &p), 30.3);
    }

    #[test]
    fn fuel_rate_matches_willans_line() {
        let p = SurrogateParams::default();
        let a = amb(15.0, 101.325, 60.0); // max_power = 30.3
        assert_relative_eq!(fuel_rate(1.0, &a, &p).unwrap(), 272.7, epsilon = 1e-9);
        assert_relative_eq!(fuel_rate(0.5, &a, &p).unwrap(), 163.62, epsilon = 1e-9);
        assert_eq!(fuel_rate(0.0, &a, &p).unwrap(), 0.0);
    }

    #[test]
    fn fuel_rate_rejects_out_of_range_load() {
        let p = SurrogateParams::default();
        let a = amb(15.0, 101.325, 60.0);
        assert!(fuel_rate(-0.1, &a, &p).is_err());
        assert!(fuel_rate(1.1, &a, &p).is_err());
        assert!(fuel_rate(f64::NAN, &a, &p).is_err());
    }

    #[test]
    fn idle_fuel_is_the_intercept() {
        let p = SurrogateParams::default();
        let a = amb(15.0, 101.325, 60.0);
        assert_relative_eq!(mechanical_idle_fuel_rate(&a, &p), 54.54, epsilon = 1e-9);

        let hot = amb(35.0, 93.0, 30.0);
        let q = mechanical_idle_fuel_rate(&hot, &p);
        assert_relative_eq!(q, 0.2 * max_power(&hot, &p) * 3.6 / 0.40, epsilon = 1e-12);

        let zero_idle = SurrogateParams {
            c_idle: 0.0,
            ..SurrogateParams::default()
        };
        assert_eq!(mechanical_idle_fuel_rate(&a, &zero_idle), 0.0);
    }

    #[test]
    fn implied_efficiency_increases_with_load_and_tops_at_eta_full() {
        let p = SurrogateParams::default();
        let a = amb(20.0, 94.0, 50.0);
        let pmax = max_power(&a, &p);
        let mut prev = 0.0;
        for i in 1..=20 {
            let l = i as f64 / 20.0;
            let q = fuel_rate(l, &a, &p).unwrap();
            let eta = l * pmax * GJ_PER_MWH / q;
            assert!(eta > prev, "efficiency not increasing at l={l}");
            prev = eta;
        }
        assert_relative_eq!(prev, p.eta_full, epsilon = 1e-12);
    }

    proptest! {
        #[test]
        fn max_power_bounded_and_monotone(
            t1 in -60.0f64..60.0, t2 in -60.0f64..60.0,
            pr in 80.0f64..105.0, rh in 0.0f64..100.0,
        ) {
            let p = SurrogateParams::default();
            let (lo, hi) = if t1 < t2 { (t1, t2) } else { (t2, t1) };
            let cold = max_power(&amb(lo, pr, rh), &p);
            let warm = max_power(&amb(hi, pr, rh), &p);
            prop_assert!(cold >= warm);
            prop_assert!((0.0..=p.p_flat).contains(&cold));
            prop_assert!((0.0..=p.p_flat).contains(&warm));
        }

        #[test]
        fn fuel_rate_is_affine_in_load(
            t in -40.0f64..40.0, pr in 88.0f64..98.0,
            a in 0.05f64..1.0, b in 0.05f64..1.0,
        ) {
            let p = SurrogateParams::default();
            let ambient = amb(t, pr, 50.0);
            // Two evaluations determine the line; a third must fall on it.
            let qa = fuel_rate(a, &ambient, &p).unwrap();
            let qb = fuel_rate(b, &ambient, &p).unwrap();
            let mid = 0.5 * (a + b);
            let qm = fuel_rate(mid, &ambient, &p).unwrap();
            prop_assert!((qm - 0.5 * (qa + qb)).abs() < 1e-9 * qm.max(1.0));
        }
    }
}
