//! Bundled household: a 12-hour summer afternoon and evening (clock hours
//! 12..23) for a usually three-person home.
//!
//! Fixture parameters not tied to any measurement:
//! * tariff: time-of-use, 0.08..0.24 $/kWh, peaking 15:00-17:00;
//! * demand-response price `c_c` = 0.05 $/kWh;
//! * washer 1.5 kW and dishwasher 0.5 kW, two-hour cycles, both habitually
//!   started at 15:00;
//! * desired demand: the habitual profile cut to 85% in peak-rate hours and
//!   raised to 115% elsewhere;
//! * ARX model: least-squares fit to two synthetic weeks of cooling data.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::io::synth::{generate_synthetic, Profile, MAX_PERSONS};
use crate::model::{ApplianceSpec, ArxModel, ExogenousInputs, Tariff};
use crate::objectives::{
    derive_demand, CaseConfig, Schedule, DEFAULT_DESIRED_TEMP, DEFAULT_DEV_CAP, DEFAULT_TOTAL_DEV_CAP,
};
use crate::robust::{UncertainParam, DEFAULT_DEVIATION_FRACTION};
use crate::series::{HorizonSeries, Unit};

pub const FIRST_HOUR: u32 = 12;
pub const ARX_TRAINING_SEED: u64 = 7;
pub const ARX_TRAINING_DAYS: usize = 14;

const RATES: [f64; 12] = [0.10, 0.12, 0.16, 0.24, 0.24, 0.24, 0.18, 0.14, 0.12, 0.10, 0.09, 0.08];
const NON_SHIFTABLE: [f64; 12] = [0.35, 0.35, 0.35, 0.35, 0.40, 0.45, 0.60, 0.70, 0.70, 0.60, 0.45, 0.40];
const MISC: [f64; 12] = [0.15, 0.10, 0.10, 0.10, 0.15, 0.20, 0.30, 0.35, 0.30, 0.25, 0.20, 0.15];
const OUTDOOR_TEMP: [f64; 12] = [33.0, 35.0, 36.0, 37.0, 36.5, 35.0, 33.0, 31.0, 29.5, 28.5, 27.5, 27.0];
const PERSONS: [f64; 12] = [1.0, 1.0, 1.0, 2.0, 2.0, 2.0, 3.0, 3.0, 3.0, 3.0, 3.0, 3.0];
const PENALTY_REWARD: f64 = 0.05;
const PEAK_SHARE: f64 = 0.75;
const PEAK_FACTOR: f64 = 0.85;
const OFF_PEAK_FACTOR: f64 = 1.15;

/// Raw household description; [`Household::build`] turns it into a [`CaseConfig`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Household {
    pub horizon: usize,
    pub first_hour: u32,
    pub rates: Vec<f64>,
    pub penalty_reward: f64,
    pub appliances: Vec<ApplianceSpec>,
    pub non_shiftable: Vec<f64>,
    pub misc: Vec<f64>,
    pub outdoor_temp: Vec<f64>,
    /// Occupancy already normalised by the largest training occupancy.
    pub occupancy: Vec<f64>,
    /// `None` derives it from the habitual schedule.
    pub desired_demand: Option<Vec<f64>>,
    pub desired_temp: f64,
    pub deviation_fraction: f64,
    pub dev_cap: f64,
    pub total_dev_cap: f64,
    pub arx: ArxModel,
    pub ac_warmup: Vec<f64>,
}

impl Household {
    pub fn bundled() -> Self {
        let appliance = |name: &str, power_kw: f64| ApplianceSpec {
            name: name.into(),
            power_kw,
            cycle_len: 2,
            window_start: 2,
            window_end: 12,
            preferred_start: 4,
        };
        Self {
            horizon: RATES.len(),
            first_hour: FIRST_HOUR,
            rates: RATES.to_vec(),
            penalty_reward: PENALTY_REWARD,
            appliances: vec![appliance("washer", 1.5), appliance("dishwasher", 0.5)],
            non_shiftable: NON_SHIFTABLE.to_vec(),
            misc: MISC.to_vec(),
            outdoor_temp: OUTDOOR_TEMP.to_vec(),
            occupancy: PERSONS.iter().map(|p| p / MAX_PERSONS).collect(),
            desired_demand: None,
            desired_temp: DEFAULT_DESIRED_TEMP,
            deviation_fraction: DEFAULT_DEVIATION_FRACTION,
            dev_cap: DEFAULT_DEV_CAP,
            total_dev_cap: DEFAULT_TOTAL_DEV_CAP,
            arx: fitted_arx().expect("bundled cooling history is well conditioned"),
            ac_warmup: vec![2.0],
        }
    }

    pub fn build(&self) -> Result<CaseConfig> {
        let h = self.horizon;
        let kw = |v: &[f64]| HorizonSeries::with_len(v.to_vec(), Unit::Kilowatt, h);
        let rate = HorizonSeries::with_len(self.rates.clone(), Unit::DollarPerKwh, h)?;
        let occupancy = HorizonSeries::with_len(self.occupancy.clone(), Unit::Persons, h)?;
        let mut cfg = CaseConfig {
            horizon: h,
            first_hour: self.first_hour,
            tariff: Tariff::new(rate, self.penalty_reward)?,
            appliances: self.appliances.clone(),
            non_shiftable: kw(&self.non_shiftable)?,
            misc: kw(&self.misc)?,
            desired_demand: HorizonSeries::constant(0.0, Unit::Kilowatt, h)?,
            desired_temp: self.desired_temp,
            occupancy: UncertainParam::proportional(occupancy, self.deviation_fraction, 0.0)?,
            demand_deviation: self.deviation_fraction,
            arx: self.arx.clone(),
            ac_warmup: self.ac_warmup.clone(),
            outdoor_temp: HorizonSeries::with_len(self.outdoor_temp.clone(), Unit::Celsius, h)?,
            dev_cap: self.dev_cap,
            total_dev_cap: self.total_dev_cap,
        };
        cfg.validate()?;
        cfg.desired_demand = match &self.desired_demand {
            Some(d) => kw(d)?,
            None => kw(&reshaped_demand(&cfg)?)?,
        };
        Ok(cfg)
    }
}

/// Habitual demand scaled down in peak-rate hours (rate at least 75% of the
/// maximum) and up elsewhere.
pub fn reshaped_demand(cfg: &CaseConfig) -> Result<Vec<f64>> {
    let base = derive_demand(&Schedule::baseline(cfg), cfg)?.total;
    let rates = cfg.tariff.rates();
    let peak = PEAK_SHARE * rates.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(base
        .iter()
        .zip(rates)
        .map(|(p, &c)| p * if c >= peak { PEAK_FACTOR } else { OFF_PEAK_FACTOR })
        .collect())
}

/// First-order ARX model fitted to the synthetic cooling history.
pub fn fitted_arx() -> Result<ArxModel> {
    let data = generate_synthetic(ARX_TRAINING_SEED, Profile::SummerWeekday, ARX_TRAINING_DAYS);
    let occ = data.occupancy_fraction();
    let exog = ExogenousInputs {
        outdoor_temp: &data.outdoor_temp,
        occupancy: &occ,
        setpoint: &data.setpoint,
    };
    ArxModel::fit(&data.ac_kw, exog, &[1])
}

pub fn bundled_case() -> CaseConfig {
    Household::bundled().build().expect("bundled household is valid")
}
