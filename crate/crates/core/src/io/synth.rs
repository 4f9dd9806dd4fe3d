//! Seeded synthetic household history: demand, occupancy, weather and AC load.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use chrono::{Duration, NaiveDate, NaiveDateTime};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::timeseries::{write_timeseries_csv, TimeSeriesTable};
use crate::error::Result;

/// AC generator: `p[t] = 0.5 p[t-1] + 0.05 T_out[t] + 0.8 occ[t] - 0.05 T_set[t] + noise`,
/// with `occ` the occupancy divided by [`MAX_PERSONS`].
pub const GENERATOR_ALPHA: f64 = -0.5;
pub const GENERATOR_BETA: [f64; 3] = [0.05, 0.8, -0.05];
pub const MAX_PERSONS: f64 = 4.0;
pub const DEFAULT_DAYS: usize = 56;

const TEMP_MIN: f64 = 26.0;
const TEMP_MAX: f64 = 37.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Profile {
    SummerWeekday,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticData {
    pub timestamps: Vec<NaiveDateTime>,
    pub demand_kw: Vec<f64>,
    /// Persons present, 0..=4.
    pub occupancy: Vec<f64>,
    pub outdoor_temp: Vec<f64>,
    pub ac_kw: Vec<f64>,
    pub setpoint: Vec<f64>,
}

impl SyntheticData {
    pub fn hour_of_day(&self) -> Vec<u32> {
        use chrono::Timelike;
        self.timestamps.iter().map(|t| t.hour()).collect()
    }

    /// Occupancy scaled into `[0, 1]` as the AC model sees it.
    pub fn occupancy_fraction(&self) -> Vec<f64> {
        self.occupancy.iter().map(|o| o / MAX_PERSONS).collect()
    }
}

pub fn start_time() -> NaiveDateTime {
    NaiveDate::from_ymd_opt(2023, 7, 3)
        .and_then(|d| d.and_hms_opt(0, 0, 0))
        .expect("valid start date")
}

/// Expected household size and probability that nobody is home, by clock hour.
fn occupancy_shape(hour: u32) -> (f64, f64) {
    match hour {
        0..=7 => (3.0, 0.01),
        8..=9 => (2.0, 0.05),
        10..=16 => (1.5, 0.25),
        17..=18 => (2.5, 0.05),
        _ => (3.2, 0.01),
    }
}

pub fn generate_synthetic(seed: u64, profile: Profile, days: usize) -> SyntheticData {
    let Profile::SummerWeekday = profile;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let unit = Normal::new(0.0, 1.0).expect("unit normal");
    let n = days * 24;
    let t0 = start_time();

    let mut data = SyntheticData {
        timestamps: Vec::with_capacity(n),
        demand_kw: Vec::with_capacity(n),
        occupancy: Vec::with_capacity(n),
        outdoor_temp: Vec::with_capacity(n),
        ac_kw: Vec::with_capacity(n),
        setpoint: Vec::with_capacity(n),
    };
    let mut day_offset = 0.0;
    let mut ac_prev = 1.5;
    for t in 0..n {
        let hour = (t % 24) as u32;
        if hour == 0 {
            day_offset = unit.sample(&mut rng);
        }
        let temp = (31.5
            + 5.5 * (2.0 * PI * (f64::from(hour) - 15.0) / 24.0).cos()
            + day_offset
            + 0.3 * unit.sample(&mut rng))
        .clamp(TEMP_MIN, TEMP_MAX);

        let (size, p_absent) = occupancy_shape(hour);
        let persons = if rng.random::<f64>() < p_absent {
            0.0
        } else {
            (size + 0.7 * unit.sample(&mut rng)).round().clamp(1.0, MAX_PERSONS)
        };
        let setpoint = if persons > 0.0 {
            23.33 + 2.5 * rng.random::<f64>()
        } else {
            23.33 + 5.22 * rng.random::<f64>()
        };

        let x = [temp, persons / MAX_PERSONS, setpoint];
        let drive: f64 = GENERATOR_BETA.iter().zip(&x).map(|(b, v)| b * v).sum();
        let ac = (-GENERATOR_ALPHA * ac_prev + drive + 0.03 * unit.sample(&mut rng)).max(0.0);
        ac_prev = ac;

        let demand = (0.3 + 0.6 * persons + ac + 0.15 * unit.sample(&mut rng)).max(0.05);

        data.timestamps.push(t0 + Duration::hours(t as i64));
        data.demand_kw.push(demand);
        data.occupancy.push(persons);
        data.outdoor_temp.push(temp);
        data.ac_kw.push(ac);
        data.setpoint.push(setpoint);
    }
    data
}

pub const HISTORY_FILE: &str = "history.csv";
pub const COOLING_FILE: &str = "cooling.csv";

/// Writes `history.csv` (timestamp, demand_kw, occupancy) and `cooling.csv`
/// (timestamp, ac_kw, outdoor_temp_c, occupancy, setpoint_c) with occupancy as
/// a fraction of the maximum household size.
pub fn write_synthetic(data: &SyntheticData, dir: &Path) -> Result<Vec<PathBuf>> {
    let history = TimeSeriesTable {
        timestamps: data.timestamps.clone(),
        columns: vec![
            ("demand_kw".into(), data.demand_kw.clone()),
            ("occupancy".into(), data.occupancy.clone()),
        ],
    };
    let cooling = TimeSeriesTable {
        timestamps: data.timestamps.clone(),
        columns: vec![
            ("ac_kw".into(), data.ac_kw.clone()),
            ("outdoor_temp_c".into(), data.outdoor_temp.clone()),
            ("occupancy".into(), data.occupancy_fraction()),
            ("setpoint_c".into(), data.setpoint.clone()),
        ],
    };
    let paths = vec![dir.join(HISTORY_FILE), dir.join(COOLING_FILE)];
    write_timeseries_csv(&history, &paths[0])?;
    write_timeseries_csv(&cooling, &paths[1])?;
    Ok(paths)
}
