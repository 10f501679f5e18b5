//! Scenario data layer: hourly price, demand, and weather series for one
//! episode year.
//!
//! Real AESO/ERA5-style data can be ingested from CSV; self-contained
//! synthetic generators calibrated to Alberta-like ranges ship as the
//! default. Ingestion is strict: a missing or misaligned hour is an error,
//! never imputed.

use std::collections::HashSet;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use chrono::{Datelike, NaiveDate, NaiveDateTime, Timelike, Weekday};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Normal, Uniform};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::surrogate::AmbientConditions;

/// Hours in the fixed modeling year.
pub const HOURS_PER_YEAR: usize = 8760;

const TIMESTAMP_FMT: &str = "%Y-%m-%dT%H:%M:%S";

/// One hour of scenario data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioRow {
    pub timestamp: NaiveDateTime,
    /// Pool price, C$/MWh.
    pub pool_price: f64,
    /// Facility demand, MW.
    pub demand: f64,
    pub ambient: AmbientConditions,
}

/// Aligned hourly series for one episode.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioTable {
    rows: Vec<ScenarioRow>,
}

impl ScenarioTable {
    /// Build a table from rows, validating alignment and ranges. Any
    /// horizon is accepted; use [`ScenarioTable::require_full_year`] where
    /// the 8760-hour contract applies.
    pub fn new(rows: Vec<ScenarioRow>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::Config("scenario has no rows".into()));
        }
        for (i, row) in rows.iter().enumerate() {
            if !row.pool_price.is_finite() {
                return Err(Error::Config(format!(
                    "non-finite pool price at {}",
                    row.timestamp
                )));
            }
            if !(row.demand >= 0.0) {
                return Err(Error::Config(format!(
                    "negative demand at {}",
                    row.timestamp
                )));
            }
            row.ambient.validate()?;
            if i > 0 {
                let expected = rows[i - 1].timestamp + chrono::Duration::hours(1);
                if row.timestamp != expected {
                    return Err(Error::Alignment {
                        file: "scenario".into(),
                        timestamp: expected.format(TIMESTAMP_FMT).to_string(),
                    });
                }
            }
        }
        Ok(Self { rows })
    }

    pub fn require_full_year(&self) -> Result<()> {
        if self.rows.len() != HOURS_PER_YEAR {
            return Err(Error::Config(format!(
                "scenario has {} hours, expected {HOURS_PER_YEAR}",
                self.rows.len()
            )));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn row(&self, hour: usize) -> &ScenarioRow {
        &self.rows[hour]
    }

    pub fn rows(&self) -> &[ScenarioRow] {
        &self.rows
    }

    /// Truncate to the first `hours` rows (for short validation horizons).
    pub fn truncated(&self, hours: usize) -> Result<Self> {
        if hours == 0 || hours > self.rows.len() {
            return Err(Error::Config(format!(
                "cannot truncate {}-hour scenario to {hours} hours",
                self.rows.len()
            )));
        }
        Ok(Self {
            rows: self.rows[..hours].to_vec(),
        })
    }

    /// Default synthetic year: weather, prices, and shift-based demand all
    /// derived deterministically from one seed.
    pub fn synthetic_year(seed: u64) -> Self {
        let weather = generate_weather(seed);
        let prices = generate_prices(seed);
        let temps: Vec<f64> = weather.iter().map(|a| a.temperature).collect();
        let demand = generate_demand(&DemandParams::with_seed(seed), &temps);
        let rows = timestamps()
            .zip(weather)
            .zip(prices)
            .zip(demand)
            .map(|(((timestamp, ambient), pool_price), demand)| ScenarioRow {
                timestamp,
                pool_price,
                demand,
                ambient,
            })
            .collect();
        Self::new(rows).expect("synthetic year is well-formed")
    }
}

/// Hourly timestamps of the modeling year (2018, 8760 hours).
pub fn timestamps() -> impl Iterator<Item = NaiveDateTime> {
    let start = NaiveDate::from_ymd_opt(2018, 1, 1)
        .unwrap()
        .and_hms_opt(0, 0, 0)
        .unwrap();
    (0..HOURS_PER_YEAR as i64).map(move |h| start + chrono::Duration::hours(h))
}

/// Parameters of the synthetic shift-based demand profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DemandParams {
    /// Workday day-shift level, MW.
    pub day_shift_level: f64,
    /// Workday night level, MW.
    pub night_level: f64,
    /// Weekend level, MW.
    pub weekend_level: f64,
    /// Half-width of the multiplicative hourly noise, in [0, 0.5].
    pub noise_fraction: f64,
    /// Additional demand during the hottest/coldest deciles, MW.
    pub hot_cold_boost: f64,
    /// Plant closure dates (ISO `YYYY-MM-DD`).
    pub holiday_calendar: Vec<String>,
    pub seed: u64,
}

impl Default for DemandParams {
    fn default() -> Self {
        Self {
            day_shift_level: 25.0,
            night_level: 8.0,
            weekend_level: 6.0,
            noise_fraction: 0.1,
            hot_cold_boost: 3.0,
            holiday_calendar: vec![
                "2018-01-01".into(),
                "2018-07-02".into(),
                "2018-12-25".into(),
                "2018-12-26".into(),
            ],
            seed: 0,
        }
    }
}

impl DemandParams {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.day_shift_level < 0.0 || self.night_level < 0.0 || self.weekend_level < 0.0 {
            return Err(Error::Config("demand levels must be non-negative".into()));
        }
        if !(0.0..=0.5).contains(&self.noise_fraction) {
            return Err(Error::Config(format!(
                "noise_fraction {} outside [0, 0.5]",
                self.noise_fraction
            )));
        }
        Ok(())
    }

    fn holidays(&self) -> Result<HashSet<NaiveDate>> {
        self.holiday_calendar
            .iter()
            .map(|s| {
                NaiveDate::parse_from_str(s, "%Y-%m-%d")
                    .map_err(|e| Error::Config(format!("bad holiday date '{s}': {e}")))
            })
            .collect()
    }
}

/// Weekly base template: day-shift hours (07:00-18:59) at the day level on
/// workdays, nights at the night level, weekends at the weekend level.
fn template_level(ts: NaiveDateTime, p: &DemandParams) -> f64 {
    let weekend = matches!(ts.weekday(), Weekday::Sat | Weekday::Sun);
    if weekend {
        p.weekend_level
    } else if (7..19).contains(&ts.hour()) {
        p.day_shift_level
    } else {
        p.night_level
    }
}

fn percentile(sorted: &[f64], q: f64) -> f64 {
    let idx = ((sorted.len() as f64 - 1.0) * q).round() as usize;
    sorted[idx]
}

/// Synthetic shift-based demand: weekly template, multiplicative hourly
/// noise, extra load in the hottest and coldest temperature deciles, zeroed
/// on closure dates. Deterministic in the seed.
pub fn generate_demand(params: &DemandParams, temperatures: &[f64]) -> Vec<f64> {
    assert_eq!(temperatures.len(), HOURS_PER_YEAR);
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    rng.set_stream(3);
    let noise = Uniform::new_inclusive(1.0 - params.noise_fraction, 1.0 + params.noise_fraction);
    let holidays = params.holidays().unwrap_or_default();

    let mut sorted = temperatures.to_vec();
    sorted.sort_by(|a, b| a.total_cmp(b));
    let p10 = percentile(&sorted, 0.10);
    let p90 = percentile(&sorted, 0.90);

    timestamps()
        .zip(temperatures)
        .map(|(ts, &temp)| {
            // Draw unconditionally so holiday placement cannot shift the
            // noise sequence of later hours.
            let factor = noise.sample(&mut rng);
            if holidays.contains(&ts.date()) {
                return 0.0;
            }
            let mut d = template_level(ts, params) * factor;
            if temp > p90 || temp < p10 {
                d += params.hot_cold_boost;
            }
            d
        })
        .collect()
}

/// Synthetic ambient-condition year: annual plus diurnal temperature
/// sinusoids with AR(1) noise, near-constant station pressure, noisy
/// humidity. Deterministic in the seed.
pub fn generate_weather(seed: u64) -> Vec<AmbientConditions> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);
    let temp_noise = Normal::<f64>::new(0.0, 2.2).unwrap();
    let pressure_noise = Normal::<f64>::new(0.0, 0.6).unwrap();
    let humidity_noise = Normal::<f64>::new(0.0, 15.0).unwrap();

    // AR(1) residual keeps hot and cold spells multi-day.
    let phi = 0.98f64;
    let mut ar = 0.0f64;

    timestamps()
        .enumerate()
        .map(|(hour, ts)| {
            let day = hour as f64 / 24.0;
            let annual = -18.0 * (std::f64::consts::TAU * (day - 14.0) / 365.0).cos();
            let diurnal = 6.0 * (std::f64::consts::TAU * (ts.hour() as f64 - 14.0) / 24.0).cos();
            ar = phi * ar + temp_noise.sample(&mut rng);
            let temperature = (3.0 + annual + diurnal + ar).clamp(-55.0, 55.0);
            let pressure = (93.0 + pressure_noise.sample(&mut rng)).clamp(88.0, 98.0);
            let rel_humidity = (60.0 + humidity_noise.sample(&mut rng)).clamp(5.0, 100.0);
            AmbientConditions {
                temperature,
                pressure,
                rel_humidity,
            }
        })
        .collect()
}

/// Synthetic pool prices: log-normal base with a diurnal shape plus rare
/// spike hours, clipped to the Alberta price-cap range [0, 999.99].
/// Deterministic in the seed.
pub fn generate_prices(seed: u64) -> Vec<f64> {
    generate_prices_counting_spikes(seed).0
}

/// Same as [`generate_prices`] but also reports how many spike hours were
/// drawn, for calibration checks.
pub fn generate_prices_counting_spikes(seed: u64) -> (Vec<f64>, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(2);
    let log_noise = Normal::<f64>::new(0.0, 0.45).unwrap();
    let spike_mult = Uniform::<f64>::new(3.0, 15.0);
    let mut spikes = 0usize;

    let prices = timestamps()
        .map(|ts| {
            let h = ts.hour() as f64;
            // Higher during business hours, softer overnight.
            let diurnal = 0.30 * (std::f64::consts::TAU * (h - 13.0) / 24.0).cos();
            let mut price = (50.0f64.ln() + diurnal + log_noise.sample(&mut rng)).exp();
            if rng.gen_bool(0.02) {
                spikes += 1;
                price *= spike_mult.sample(&mut rng);
            }
            price.clamp(0.0, 999.99)
        })
        .collect();
    (prices, spikes)
}

// --- CSV ingestion and emission -------------------------------------------

fn parse_timestamp(file: &str, line: usize, s: &str) -> Result<NaiveDateTime> {
    NaiveDateTime::parse_from_str(s.trim(), TIMESTAMP_FMT).map_err(|e| Error::Parse {
        file: file.to_string(),
        line,
        message: format!("bad timestamp '{s}': {e}"),
    })
}

fn parse_f64(file: &str, line: usize, field: &str, s: &str) -> Result<f64> {
    s.trim().parse::<f64>().map_err(|_| Error::Parse {
        file: file.to_string(),
        line,
        message: format!("non-numeric {field} '{s}'"),
    })
}

fn read_csv(path: &Path, expected_header: &[&str]) -> Result<Vec<(usize, Vec<String>)>> {
    let name = path.display().to_string();
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_path(path)?;
    let headers = reader.headers()?.clone();
    let got: Vec<&str> = headers.iter().map(|h| h.trim()).collect();
    if got != expected_header {
        return Err(Error::Parse {
            file: name,
            line: 1,
            message: format!("expected header {expected_header:?}, got {got:?}"),
        });
    }
    let mut rows = Vec::new();
    for result in reader.into_records() {
        let record = result?;
        let line = record
            .position()
            .map(|p| p.line() as usize)
            .unwrap_or(0);
        if record.len() != expected_header.len() {
            return Err(Error::Parse {
                file: name,
                line,
                message: format!(
                    "expected {} fields, got {}",
                    expected_header.len(),
                    record.len()
                ),
            });
        }
        rows.push((line, record.iter().map(|f| f.to_string()).collect()));
    }
    Ok(rows)
}

/// Load an aligned scenario from the three input CSVs. Rows are joined on
/// timestamp; any gap or mismatch fails with the offending hour named.
pub fn load_scenario_csv(
    price_path: &Path,
    weather_path: &Path,
    demand_path: &Path,
) -> Result<ScenarioTable> {
    let price_name = price_path.display().to_string();
    let weather_name = weather_path.display().to_string();
    let demand_name = demand_path.display().to_string();

    let price_rows = read_csv(price_path, &["timestamp", "pool_price_cad_per_mwh"])?;
    let weather_rows = read_csv(
        weather_path,
        &["timestamp", "temp_c", "pressure_kpa", "rel_humidity_pct"],
    )?;
    let demand_rows = read_csv(demand_path, &["timestamp", "demand_mw"])?;

    let mut rows = Vec::with_capacity(price_rows.len());
    for (i, (pline, pfields)) in price_rows.iter().enumerate() {
        let timestamp = parse_timestamp(&price_name, *pline, &pfields[0])?;
        let ts_str = timestamp.format(TIMESTAMP_FMT).to_string();

        let (wline, wfields) = weather_rows.get(i).ok_or_else(|| Error::Alignment {
            file: weather_name.clone(),
            timestamp: ts_str.clone(),
        })?;
        let wts = parse_timestamp(&weather_name, *wline, &wfields[0])?;
        if wts != timestamp {
            return Err(Error::Alignment {
                file: weather_name.clone(),
                timestamp: ts_str.clone(),
            });
        }

        let (dline, dfields) = demand_rows.get(i).ok_or_else(|| Error::Alignment {
            file: demand_name.clone(),
            timestamp: ts_str.clone(),
        })?;
        let dts = parse_timestamp(&demand_name, *dline, &dfields[0])?;
        if dts != timestamp {
            return Err(Error::Alignment {
                file: demand_name.clone(),
                timestamp: ts_str.clone(),
            });
        }

        rows.push(ScenarioRow {
            timestamp,
            pool_price: parse_f64(&price_name, *pline, "pool price", &pfields[1])?,
            demand: parse_f64(&demand_name, *dline, "demand", &dfields[1])?,
            ambient: AmbientConditions {
                temperature: parse_f64(&weather_name, *wline, "temperature", &wfields[1])?,
                pressure: parse_f64(&weather_name, *wline, "pressure", &wfields[2])?,
                rel_humidity: parse_f64(&weather_name, *wline, "humidity", &wfields[3])?,
            },
        });
    }

    if weather_rows.len() > rows.len() {
        let (line, fields) = &weather_rows[rows.len()];
        return Err(Error::Alignment {
            file: price_name,
            timestamp: parse_timestamp(&weather_name, *line, &fields[0])?
                .format(TIMESTAMP_FMT)
                .to_string(),
        });
    }
    if demand_rows.len() > rows.len() {
        let (line, fields) = &demand_rows[rows.len()];
        return Err(Error::Alignment {
            file: price_name,
            timestamp: parse_timestamp(&demand_name, *line, &fields[0])?
                .format(TIMESTAMP_FMT)
                .to_string(),
        });
    }

    ScenarioTable::new(rows)
}

/// Write the three scenario CSVs (`price.csv`, `weather.csv`, `demand.csv`)
/// into `dir`. Inverse of [`load_scenario_csv`].
pub fn write_scenario_csv(table: &ScenarioTable, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;

    let mut price = BufWriter::new(File::create(dir.join("price.csv"))?);
    let mut weather = BufWriter::new(File::create(dir.join("weather.csv"))?);
    let mut demand = BufWriter::new(File::create(dir.join("demand.csv"))?);

    writeln!(price, "timestamp,pool_price_cad_per_mwh")?;
    writeln!(weather, "timestamp,temp_c,pressure_kpa,rel_humidity_pct")?;
    writeln!(demand, "timestamp,demand_mw")?;

    for row in table.rows() {
        let ts = row.timestamp.format(TIMESTAMP_FMT);
        writeln!(price, "{ts},{}", row.pool_price)?;
        writeln!(
            weather,
            "{ts},{},{},{}",
            row.ambient.temperature, row.ambient.pressure, row.ambient.rel_humidity
        )?;
        writeln!(demand, "{ts},{}", row.demand)?;
    }
    price.flush()?;
    weather.flush()?;
    demand.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_deterministic_in_seed() {
        assert_eq!(generate_weather(42), generate_weather(42));
        assert_eq!(generate_prices(42), generate_prices(42));
        let temps: Vec<f64> = generate_weather(42).iter().map(|a| a.temperature).collect();
        let p = DemandParams::with_seed(42);
        assert_eq!(generate_demand(&p, &temps), generate_demand(&p, &temps));
        assert_ne!(generate_prices(42), generate_prices(43));
    }

    #[test]
    fn weather_respects_clipping_and_winter_is_cold() {
        let weather = generate_weather(0);
        for a in &weather {
            assert!((88.0..=98.0).contains(&a.pressure));
            assert!((5.0..=100.0).contains(&a.rel_humidity));
            a.validate().unwrap();
        }
        // Winter solstice (Dec 21) midnight: hour index 354*24.
        let solstice_midnight = &weather[354 * 24];
        assert!(
            solstice_midnight.temperature < -5.0,
            "got {}",
            solstice_midnight.temperature
        );
    }

    #[test]
    fn prices_clipped_with_plausible_spike_frequency() {
        let (prices, spikes) = generate_prices_counting_spikes(0);
        assert!(prices.iter().all(|p| (0.0..=999.99).contains(p)));
        let freq = spikes as f64 / HOURS_PER_YEAR as f64;
        assert!((0.01..=0.03).contains(&freq), "spike frequency {freq}");
        let mut sorted = prices.clone();
        sorted.sort_by(|a, b| a.total_cmp(b));
        let median = sorted[HOURS_PER_YEAR / 2];
        assert!((30.0..=80.0).contains(&median), "median {median}");
    }

    #[test]
    fn zero_noise_demand_tiles_the_weekly_template() {
        let params = DemandParams {
            noise_fraction: 0.0,
            hot_cold_boost: 0.0,
            holiday_calendar: vec![],
            ..DemandParams::default()
        };
        let temps = vec![10.0; HOURS_PER_YEAR];
        let demand = generate_demand(&params, &temps);
        for (ts, d) in timestamps().zip(&demand) {
            assert_eq!(*d, template_level(ts, &params), "at {ts}");
        }
    }

    #[test]
    fn holidays_zero_all_24_hours() {
        let params = DemandParams::with_seed(5);
        let temps: Vec<f64> = generate_weather(5).iter().map(|a| a.temperature).collect();
        let demand = generate_demand(&params, &temps);
        // Christmas day 2018: day-of-year 359 (0-based 358).
        let start = 358 * 24;
        for h in start..start + 24 {
            assert_eq!(demand[h], 0.0);
        }
    }

    #[test]
    fn demand_has_shift_structure() {
        let table = ScenarioTable::synthetic_year(0);
        let mut day = (0.0, 0u32);
        let mut night = (0.0, 0u32);
        let mut weekend = (0.0, 0u32);
        for row in table.rows() {
            let ts = row.timestamp;
            if matches!(ts.weekday(), Weekday::Sat | Weekday::Sun) {
                weekend = (weekend.0 + row.demand, weekend.1 + 1);
            } else if (7..19).contains(&ts.hour()) {
                day = (day.0 + row.demand, day.1 + 1);
            } else {
                night = (night.0 + row.demand, night.1 + 1);
            }
        }
        let day_mean = day.0 / day.1 as f64;
        let night_mean = night.0 / night.1 as f64;
        let weekend_mean = weekend.0 / weekend.1 as f64;
        assert!(day_mean > night_mean && night_mean > weekend_mean);
    }

    #[test]
    fn csv_round_trip_is_identity() {
        let dir = tempfile::tempdir().unwrap();
        let table = ScenarioTable::synthetic_year(9);
        write_scenario_csv(&table, dir.path()).unwrap();
        let loaded = load_scenario_csv(
            &dir.path().join("price.csv"),
            &dir.path().join("weather.csv"),
            &dir.path().join("demand.csv"),
        )
        .unwrap();
        assert_eq!(table, loaded);
    }

    #[test]
    fn missing_weather_hour_is_an_alignment_error() {
        let dir = tempfile::tempdir().unwrap();
        let table = ScenarioTable::synthetic_year(1);
        write_scenario_csv(&table, dir.path()).unwrap();

        // Drop hour 4000 from the weather file.
        let weather_path = dir.path().join("weather.csv");
        let text = std::fs::read_to_string(&weather_path).unwrap();
        let kept: Vec<&str> = text
            .lines()
            .enumerate()
            .filter(|(i, _)| *i != 4001) // header + 4000 rows before it
            .map(|(_, l)| l)
            .collect();
        std::fs::write(&weather_path, kept.join("\n") + "\n").unwrap();

        let err = load_scenario_csv(
            &dir.path().join("price.csv"),
            &weather_path,
            &dir.path().join("demand.csv"),
        )
        .unwrap_err();
        match err {
            Error::Alignment { timestamp, .. } => {
                assert_eq!(
                    timestamp,
                    table.row(4000).timestamp.format(TIMESTAMP_FMT).to_string()
                );
            }
            other => panic!("expected alignment error, got {other}"),
        }
    }

    #[test]
    fn malformed_price_field_reports_line_number() {
        let dir = tempfile::tempdir().unwrap();
        let table = ScenarioTable::synthetic_year(2);
        write_scenario_csv(&table, dir.path()).unwrap();

        let price_path = dir.path().join("price.csv");
        let text = std::fs::read_to_string(&price_path).unwrap();
        let mut lines: Vec<String> = text.lines().map(str::to_string).collect();
        // Corrupt file line 17 (vector index 16; index 0 is the header).
        let ts = lines[16].split(',').next().unwrap().to_string();
        lines[16] = format!("{ts},not_a_number");
        std::fs::write(&price_path, lines.join("\n") + "\n").unwrap();

        let err = load_scenario_csv(
            &price_path,
            &dir.path().join("weather.csv"),
            &dir.path().join("demand.csv"),
        )
        .unwrap_err();
        match err {
            Error::Parse { line, message, .. } => {
                assert_eq!(line, 17, "{message}");
                assert!(message.contains("pool price"));
            }
            other => panic!("expected parse error, got {other}"),
        }
    }

    #[test]
    fn table_rejects_gap_in_timestamps() {
        let mut rows: Vec<ScenarioRow> = ScenarioTable::synthetic_year(3).rows()[..100].to_vec();
        rows.remove(50);
        assert!(matches!(
            ScenarioTable::new(rows),
            Err(Error::Alignment { .. })
        ));
    }
}
