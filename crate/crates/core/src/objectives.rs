//! Objective and constraint evaluation for the four household cases:
//!
//! * (a) nominal data, no demand response: energy cost only;
//! * (b) uncertain data, no demand response: budgeted robust energy cost;
//! * (c) nominal data with demand response: demand excess, discomfort, cost;
//! * (d) uncertain data with demand response: robust versions of (c).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{decompose_load, ApplianceSpec, ArxModel, Exogenous, ExogenousInputs, Tariff};
use crate::robust::{check_budget, robust_penalty, worst_case_direction, UncertainParam};
use crate::series::{HorizonSeries, Unit};

pub const DEFAULT_DESIRED_TEMP: f64 = 23.33;
pub const DEFAULT_DEV_CAP: f64 = 5.22;
pub const DEFAULT_TOTAL_DEV_CAP: f64 = 19.44;

/// Slack used when comparing setpoint deviations against their caps.
pub const SETPOINT_TOL: f64 = 1e-9;

/// Everything the evaluators need to know about one household and horizon.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseConfig {
    pub horizon: usize,
    /// Clock hour of horizon hour 1, used only for report labels.
    pub first_hour: u32,
    pub tariff: Tariff,
    pub appliances: Vec<ApplianceSpec>,
    pub non_shiftable: HorizonSeries,
    pub misc: HorizonSeries,
    pub desired_demand: HorizonSeries,
    pub desired_temp: f64,
    /// Forecast occupancy with its deviation box.
    pub occupancy: UncertainParam,
    /// Demand deviation as a fraction of the candidate's own demand.
    pub demand_deviation: f64,
    pub arx: ArxModel,
    /// AC load for the hours before the horizon, oldest first.
    pub ac_warmup: Vec<f64>,
    pub outdoor_temp: HorizonSeries,
    pub dev_cap: f64,
    pub total_dev_cap: f64,
}

impl CaseConfig {
    pub fn validate(&self) -> Result<()> {
        let h = self.horizon;
        if h == 0 {
            return Err(Error::validation("horizon", "must be at least 1"));
        }
        let series = [
            ("tariff.rate", self.tariff.rate()),
            ("non_shiftable", &self.non_shiftable),
            ("misc", &self.misc),
            ("desired_demand", &self.desired_demand),
            ("occupancy", self.occupancy.nominal()),
            ("outdoor_temp", &self.outdoor_temp),
        ];
        for (name, s) in series {
            if s.horizon() != h {
                return Err(Error::LengthMismatch {
                    what: name.into(),
                    expected: h,
                    got: s.horizon(),
                });
            }
        }
        for a in &self.appliances {
            a.validate(h)?;
        }
        if !(self.dev_cap > 0.0 && self.dev_cap.is_finite()) {
            return Err(Error::validation("dev_cap", "must be positive"));
        }
        if !(self.total_dev_cap > 0.0 && self.total_dev_cap.is_finite()) {
            return Err(Error::validation("total_dev_cap", "must be positive"));
        }
        if !self.desired_temp.is_finite() {
            return Err(Error::validation("desired_temp", "must be finite"));
        }
        if !(0.0..1.0).contains(&self.demand_deviation) {
            return Err(Error::validation("demand_deviation", "must be in [0, 1)"));
        }
        if self.ac_warmup.len() < self.arx.max_lag() {
            return Err(Error::validation(
                "ac_warmup",
                format!("need {} warm-up hours for the ARX lags", self.arx.max_lag()),
            ));
        }
        Ok(())
    }

    pub fn max_budget(&self) -> usize {
        self.horizon
    }
}

/// ON/OFF matrix for the shiftable appliances plus hourly AC setpoints.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    /// `u[s][h]` is 1 when appliance `s` runs in (0-based) hour `h`.
    pub u: Vec<Vec<u8>>,
    pub setpoints: HorizonSeries,
}

impl Schedule {
    /// Preferred start hours and every setpoint at the desired temperature.
    pub fn baseline(cfg: &CaseConfig) -> Self {
        let u = cfg
            .appliances
            .iter()
            .map(|a| a.on_row(a.preferred_start, cfg.horizon))
            .collect();
        let setpoints = HorizonSeries::constant(cfg.desired_temp, Unit::Celsius, cfg.horizon)
            .expect("desired temperature is finite");
        Self { u, setpoints }
    }

    pub fn check_dims(&self, cfg: &CaseConfig) -> Result<()> {
        if self.u.len() != cfg.appliances.len() {
            return Err(Error::LengthMismatch {
                what: "schedule rows".into(),
                expected: cfg.appliances.len(),
                got: self.u.len(),
            });
        }
        if let Some(row) = self.u.iter().find(|r| r.len() != cfg.horizon) {
            return Err(Error::LengthMismatch {
                what: "schedule row".into(),
                expected: cfg.horizon,
                got: row.len(),
            });
        }
        if self.u.iter().flatten().any(|&v| v > 1) {
            return Err(Error::validation("schedule.u", "entries must be 0 or 1"));
        }
        if self.setpoints.horizon() != cfg.horizon {
            return Err(Error::LengthMismatch {
                what: "setpoints".into(),
                expected: cfg.horizon,
                got: self.setpoints.horizon(),
            });
        }
        Ok(())
    }

    /// 1-based ON hours of appliance `s`.
    pub fn on_hours(&self, s: usize) -> Vec<usize> {
        self.u[s]
            .iter()
            .enumerate()
            .filter(|(_, &v)| v == 1)
            .map(|(h, _)| h + 1)
            .collect()
    }
}

/// Hourly demand components for one schedule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DemandProfile {
    pub shift: Vec<f64>,
    pub ac: Vec<f64>,
    /// `p_d' = p_d - p_ac`
    pub non_ac: Vec<f64>,
    pub total: Vec<f64>,
}

impl DemandProfile {
    pub fn total_series(&self) -> HorizonSeries {
        HorizonSeries::new(self.total.clone(), Unit::Kilowatt).expect("demand is non-negative")
    }
}

/// Hourly demand for `schedule` with the nominal occupancy forecast.
pub fn derive_demand(schedule: &Schedule, cfg: &CaseConfig) -> Result<DemandProfile> {
    derive_demand_with_occupancy(schedule, cfg, cfg.occupancy.nominal().values())
}

/// Hourly demand for `schedule` with an explicit occupancy series.
pub fn derive_demand_with_occupancy(schedule: &Schedule, cfg: &CaseConfig, occupancy: &[f64]) -> Result<DemandProfile> {
    schedule.check_dims(cfg)?;
    let h_len = cfg.horizon;
    let shift: Vec<f64> = (0..h_len)
        .map(|h| {
            cfg.appliances
                .iter()
                .zip(&schedule.u)
                .map(|(a, row)| a.power_kw * f64::from(row[h]))
                .sum()
        })
        .collect();
    let exog = ExogenousInputs {
        outdoor_temp: cfg.outdoor_temp.values(),
        occupancy,
        setpoint: schedule.setpoints.values(),
    };
    let ac = cfg.arx.simulate(&cfg.ac_warmup, exog, h_len)?;
    let mut non_ac = Vec::with_capacity(h_len);
    let mut total = Vec::with_capacity(h_len);
    for h in 0..h_len {
        let split = decompose_load(shift[h], cfg.non_shiftable[h], cfg.misc[h], ac[h])?;
        non_ac.push(split.non_ac);
        total.push(split.total);
    }
    Ok(DemandProfile {
        shift,
        ac,
        non_ac,
        total,
    })
}

/// Energy cost with purchased power equal to demand.
pub fn cost_case_a(demand: &[f64], tariff: &Tariff) -> Result<f64> {
    if demand.len() != tariff.rates().len() {
        return Err(Error::LengthMismatch {
            what: "demand".into(),
            expected: tariff.rates().len(),
            got: demand.len(),
        });
    }
    Ok(demand.iter().zip(tariff.rates()).map(|(p, c)| c * p).sum())
}

/// Uncertainty budgets for demand and occupancy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Budgets {
    pub demand: f64,
    pub occupancy: f64,
}

impl Budgets {
    pub const ZERO: Budgets = Budgets {
        demand: 0.0,
        occupancy: 0.0,
    };

    pub fn diagonal(gamma: f64) -> Self {
        Self {
            demand: gamma,
            occupancy: gamma,
        }
    }

    pub fn check(&self, horizon: usize) -> Result<()> {
        check_budget(self.demand, horizon)?;
        check_budget(self.occupancy, horizon)
    }
}

/// Robust energy cost of case (b) with its components.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RobustCost {
    pub nominal: f64,
    pub demand_penalty: f64,
    pub occupancy_penalty: f64,
    pub total: f64,
    /// Worst-case purchased power, `p_u >= p_d` hour by hour.
    pub purchased: Vec<f64>,
}

/// Cost deviation per occupancy hour `j`: the occupancy box times the cost
/// of the AC load it drives, `dOcc_j * sum_k beta_{k,occ} c_{j+k-1}`.
fn occupancy_cost_deltas(cfg: &CaseConfig) -> Vec<f64> {
    let rates = cfg.tariff.rates();
    let dev = cfg.occupancy.deviation();
    (0..cfg.horizon)
        .map(|j| {
            let gain: f64 = cfg
                .arx
                .input_gains(Exogenous::Occupancy)
                .filter_map(|(k, b)| rates.get(j + k - 1).map(|c| b * c))
                .sum();
            dev[j] * gain
        })
        .collect()
}

/// Budgeted robust cost of case (b) for `schedule` (normally the baseline).
///
/// Demand deviations are `demand_deviation * p_d` per hour. Occupancy
/// deviations reach demand through the ARX occupancy gains. Purchased power
/// is set to the worst realisation within both budgets.
pub fn robust_cost_case_b(cfg: &CaseConfig, schedule: &Schedule, budgets: Budgets) -> Result<RobustCost> {
    budgets.check(cfg.horizon)?;
    let demand = derive_demand(schedule, cfg)?;
    let rates = cfg.tariff.rates();
    let nominal = cost_case_a(&demand.total, &cfg.tariff)?;

    let demand_dev: Vec<f64> = demand.total.iter().map(|p| cfg.demand_deviation * p).collect();
    let demand_deltas: Vec<f64> = demand_dev.iter().zip(rates).map(|(d, c)| d * c).collect();
    let occ_deltas = occupancy_cost_deltas(cfg);

    let demand_penalty = robust_penalty(&demand_deltas, budgets.demand)?;
    let occupancy_penalty = robust_penalty(&occ_deltas, budgets.occupancy)?;

    let zd = worst_case_direction(&demand_deltas, budgets.demand)?;
    let zo = worst_case_direction(&occ_deltas, budgets.occupancy)?;
    let occ_dev = cfg.occupancy.deviation();
    let mut purchased: Vec<f64> = (0..cfg.horizon)
        .map(|h| demand.total[h] + zd[h] * demand_dev[h])
        .collect();
    for (k, b) in cfg.arx.input_gains(Exogenous::Occupancy) {
        for (j, z) in zo.iter().enumerate() {
            if let Some(p) = purchased.get_mut(j + k - 1) {
                *p += b * z * occ_dev[j];
            }
        }
    }

    Ok(RobustCost {
        nominal,
        demand_penalty,
        occupancy_penalty,
        total: nominal + demand_penalty + occupancy_penalty,
        purchased,
    })
}

/// `(o1, o2, o3)`: demand excess over the desired profile (kW), occupancy
/// weighted setpoint deviation (degC x persons) and consumer cost ($).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveVector {
    pub o1: f64,
    pub o2: f64,
    pub o3: f64,
}

impl ObjectiveVector {
    pub fn as_array(&self) -> [f64; 3] {
        [self.o1, self.o2, self.o3]
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Self {
            o1: a[0],
            o2: a[1],
            o3: a[2],
        }
    }

    /// Pareto dominance for minimisation.
    pub fn dominates(&self, other: &Self) -> bool {
        let (a, b) = (self.as_array(), other.as_array());
        a.iter().zip(&b).all(|(x, y)| x <= y) && a.iter().zip(&b).any(|(x, y)| x < y)
    }
}

fn demand_excess(total: &[f64], desired: &[f64]) -> f64 {
    // Hours below the desired demand contribute zero.
    total.iter().zip(desired).map(|(p, d)| (p - d).max(0.0)).sum()
}

fn discomfort(setpoints: &[f64], desired_temp: f64, occupancy: &[f64]) -> f64 {
    setpoints
        .iter()
        .zip(occupancy)
        .map(|(t, o)| (t - desired_temp) * o)
        .sum()
}

fn consumer_cost(total: &[f64], desired: &[f64], tariff: &Tariff) -> f64 {
    let cc = tariff.penalty_reward();
    total
        .iter()
        .zip(desired)
        .zip(tariff.rates())
        .map(|((p, d), c)| c * p + cc * (p - d))
        .sum()
}

/// Nominal multi-objective vector of case (c).
pub fn objectives_case_c(schedule: &Schedule, cfg: &CaseConfig) -> Result<ObjectiveVector> {
    let demand = derive_demand(schedule, cfg)?;
    Ok(nominal_objectives(schedule, cfg, &demand))
}

fn nominal_objectives(schedule: &Schedule, cfg: &CaseConfig, demand: &DemandProfile) -> ObjectiveVector {
    let desired = cfg.desired_demand.values();
    ObjectiveVector {
        o1: demand_excess(&demand.total, desired),
        o2: discomfort(
            schedule.setpoints.values(),
            cfg.desired_temp,
            cfg.occupancy.nominal().values(),
        ),
        o3: consumer_cost(&demand.total, desired, &cfg.tariff),
    }
}

/// Nominal objectives and the robust protection added to each.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RobustObjectives {
    pub nominal: ObjectiveVector,
    pub penalty: ObjectiveVector,
    pub robust: ObjectiveVector,
}

/// Robust counterparts of the case (c) objectives:
///
/// * demand excess gains the protection of `demand_deviation * p_d` under the
///   demand budget;
/// * discomfort gains that of `dOcc_h * (T_h - T_des)` under the occupancy budget;
/// * cost gains that of `c_h * demand_deviation * p_d` under the demand budget.
pub fn objectives_case_d(schedule: &Schedule, cfg: &CaseConfig, budgets: Budgets) -> Result<ObjectiveVector> {
    Ok(robust_objectives(schedule, cfg, budgets)?.robust)
}

pub fn robust_objectives(schedule: &Schedule, cfg: &CaseConfig, budgets: Budgets) -> Result<RobustObjectives> {
    budgets.check(cfg.horizon)?;
    let demand = derive_demand(schedule, cfg)?;
    let nominal = nominal_objectives(schedule, cfg, &demand);

    let demand_dev: Vec<f64> = demand.total.iter().map(|p| cfg.demand_deviation * p).collect();
    let bill_dev: Vec<f64> = demand_dev.iter().zip(cfg.tariff.rates()).map(|(d, c)| c * d).collect();
    let comfort_dev: Vec<f64> = schedule
        .setpoints
        .values()
        .iter()
        .zip(cfg.occupancy.deviation())
        .map(|(t, d)| d * (t - cfg.desired_temp))
        .collect();

    let penalty = ObjectiveVector {
        o1: robust_penalty(&demand_dev, budgets.demand)?,
        o2: robust_penalty(&comfort_dev, budgets.occupancy)?,
        o3: robust_penalty(&bill_dev, budgets.demand)?,
    };
    let robust = ObjectiveVector {
        o1: nominal.o1 + penalty.o1,
        o2: nominal.o2 + penalty.o2,
        o3: nominal.o3 + penalty.o3,
    };
    Ok(RobustObjectives {
        nominal,
        penalty,
        robust,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ShiftViolation {
    /// Total ON hours differ from the cycle length.
    CycleLength {
        appliance: usize,
        expected: usize,
        got: usize,
    },
    /// The appliance switched off at `hour` (1-based) before finishing its cycle.
    Interrupted { appliance: usize, hour: usize },
    /// ON at `hour` (1-based) outside the permitted window.
    OutsideWindow { appliance: usize, hour: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict<V> {
    pub violations: Vec<V>,
}

impl<V> Verdict<V> {
    pub fn feasible(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Cycle length, no interruption once started, and the permitted window.
pub fn check_shift_constraints(u: &[Vec<u8>], appliances: &[ApplianceSpec]) -> Result<Verdict<ShiftViolation>> {
    if u.len() != appliances.len() {
        return Err(Error::LengthMismatch {
            what: "schedule rows".into(),
            expected: appliances.len(),
            got: u.len(),
        });
    }
    let horizon = u.first().map_or(0, Vec::len);
    for (row, a) in u.iter().zip(appliances) {
        if row.len() != horizon || a.window_end > horizon {
            return Err(Error::LengthMismatch {
                what: format!("schedule row for {}", a.name),
                expected: horizon.max(a.window_end),
                got: row.len(),
            });
        }
    }
    let mut violations = Vec::new();
    for (s, (row, a)) in u.iter().zip(appliances).enumerate() {
        let n = a.cycle_len;
        let on: usize = row.iter().map(|&v| usize::from(v)).sum();
        if on != n {
            violations.push(ShiftViolation::CycleLength {
                appliance: s,
                expected: n,
                got: on,
            });
        }
        // u[h+1] >= u[h]/N * (N - sum_{tau<=h} u[tau]); hours past the end are OFF.
        let mut cumulative = 0usize;
        for h in 0..row.len() {
            cumulative += usize::from(row[h]);
            let next = row.get(h + 1).copied().unwrap_or(0);
            let required = f64::from(row[h]) / n as f64 * (n as f64 - cumulative as f64);
            if f64::from(next) < required {
                violations.push(ShiftViolation::Interrupted {
                    appliance: s,
                    hour: h + 2,
                });
            }
        }
        for (h, &v) in row.iter().enumerate() {
            let hour = h + 1;
            if v == 1 && (hour < a.window_start || hour > a.window_end) {
                violations.push(ShiftViolation::OutsideWindow { appliance: s, hour });
            }
        }
    }
    Ok(Verdict { violations })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AcViolation {
    /// `|T_h - T_des|` above the per-hour cap at 1-based `hour`.
    HourlyCap { hour: usize, deviation: f64 },
    /// Summed `|T_h - T_des|` above the total cap.
    TotalCap { total: f64 },
    /// Setpoint below the desired temperature (overcooling).
    BelowDesired { hour: usize, setpoint: f64 },
}

/// Per-hour cap, total deviation cap and no overcooling.
pub fn check_ac_constraints(setpoints: &HorizonSeries, cfg: &CaseConfig) -> Verdict<AcViolation> {
    let t_des = cfg.desired_temp;
    let mut violations = Vec::new();
    let mut total = 0.0;
    for (h, &t) in setpoints.values().iter().enumerate() {
        let dev = (t - t_des).abs();
        total += dev;
        if dev > cfg.dev_cap + SETPOINT_TOL {
            violations.push(AcViolation::HourlyCap {
                hour: h + 1,
                deviation: dev,
            });
        }
        if t < t_des - SETPOINT_TOL {
            violations.push(AcViolation::BelowDesired {
                hour: h + 1,
                setpoint: t,
            });
        }
    }
    if total > cfg.total_dev_cap + SETPOINT_TOL {
        violations.push(AcViolation::TotalCap { total });
    }
    Verdict { violations }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn appliance(n: usize, start: usize, end: usize) -> ApplianceSpec {
        ApplianceSpec {
            name: "a".into(),
            power_kw: 1.0,
            cycle_len: n,
            window_start: start,
            window_end: end,
            preferred_start: start,
        }
    }

    fn flat_config(h: usize) -> CaseConfig {
        let kw = |v: f64| HorizonSeries::constant(v, Unit::Kilowatt, h).unwrap();
        CaseConfig {
            horizon: h,
            first_hour: 12,
            tariff: Tariff::new(HorizonSeries::constant(1.0, Unit::DollarPerKwh, h).unwrap(), 1.0).unwrap(),
            appliances: vec![ApplianceSpec {
                name: "washer".into(),
                power_kw: 1.5,
                cycle_len: 1,
                window_start: 1,
                window_end: h,
                preferred_start: 1,
            }],
            non_shiftable: kw(0.6),
            misc: kw(0.4),
            desired_demand: kw(1.0),
            desired_temp: DEFAULT_DESIRED_TEMP,
            occupancy: UncertainParam::proportional(HorizonSeries::constant(3.0, Unit::Persons, h).unwrap(), 0.1, 0.0)
                .unwrap(),
            demand_deviation: 0.1,
            arx: ArxModel::first_order(0.0, [0.0; 3]),
            ac_warmup: vec![0.0],
            outdoor_temp: HorizonSeries::constant(30.0, Unit::Celsius, h).unwrap(),
            dev_cap: DEFAULT_DEV_CAP,
            total_dev_cap: DEFAULT_TOTAL_DEV_CAP,
        }
    }

    #[test]
    fn flat_demand_and_additivity() {
        let cfg = flat_config(4);
        let mut s = Schedule::baseline(&cfg);
        s.u[0] = vec![0; 4];
        let d0 = derive_demand(&s, &cfg).unwrap();
        assert_eq!(d0.total, vec![1.0; 4]);
        s.u[0][2] = 1;
        let d1 = derive_demand(&s, &cfg).unwrap();
        assert_eq!(d1.total[2] - d0.total[2], 1.5);
        assert_eq!(d1.total[1], d0.total[1]);
    }

    #[test]
    fn case_a_cost() {
        let t = Tariff::new(HorizonSeries::constant(1.0, Unit::DollarPerKwh, 2).unwrap(), 0.0).unwrap();
        assert_eq!(cost_case_a(&[2.0, 3.0], &t).unwrap(), 5.0);
        assert_eq!(cost_case_a(&[0.0, 0.0], &t).unwrap(), 0.0);
        assert!(cost_case_a(&[1.0], &t).is_err());
    }

    #[test]
    fn case_c_terms() {
        let tariff = Tariff::new(HorizonSeries::constant(1.0, Unit::DollarPerKwh, 1).unwrap(), 1.0).unwrap();
        assert_eq!(consumer_cost(&[3.0], &[2.0], &tariff), 4.0);
        assert_eq!(consumer_cost(&[1.0], &[2.0], &tariff), 0.0);
        assert_eq!(demand_excess(&[1.0, 5.0], &[2.0, 2.0]), 3.0);

        let cfg = flat_config(3);
        let s = Schedule::baseline(&cfg);
        assert_eq!(objectives_case_c(&s, &cfg).unwrap().o2, 0.0);
    }

    #[test]
    fn zero_budget_collapse_small() {
        let cfg = flat_config(4);
        let s = Schedule::baseline(&cfg);
        let c = objectives_case_c(&s, &cfg).unwrap();
        let d = objectives_case_d(&s, &cfg, Budgets::ZERO).unwrap();
        assert_eq!(c, d);
        let a = cost_case_a(&derive_demand(&s, &cfg).unwrap().total, &cfg.tariff).unwrap();
        assert_eq!(robust_cost_case_b(&cfg, &s, Budgets::ZERO).unwrap().total, a);
    }

    #[test]
    fn budget_bounds() {
        let cfg = flat_config(4);
        let s = Schedule::baseline(&cfg);
        assert!(matches!(
            objectives_case_d(&s, &cfg, Budgets::diagonal(4.5)),
            Err(Error::BudgetOutOfRange { .. })
        ));
        assert!(robust_cost_case_b(
            &cfg,
            &s,
            Budgets {
                demand: 1.0,
                occupancy: -1.0
            }
        )
        .is_err());
    }

    #[test]
    fn desired_setpoints_have_no_comfort_penalty() {
        let cfg = flat_config(4);
        let s = Schedule::baseline(&cfg);
        let r = robust_objectives(&s, &cfg, Budgets::diagonal(4.0)).unwrap();
        assert_eq!(r.robust.o2, 0.0);
    }

    #[test]
    fn shift_examples() {
        let a = appliance(2, 2, 3);
        assert!(check_shift_constraints(&[vec![0, 1, 1, 0]], &[a]).unwrap().feasible());

        let a = appliance(2, 1, 4);
        let v = check_shift_constraints(&[vec![1, 0, 1, 0]], &[a.clone()]).unwrap();
        assert!(v
            .violations
            .contains(&ShiftViolation::Interrupted { appliance: 0, hour: 2 }));

        let v = check_shift_constraints(&[vec![0, 1, 0, 0]], &[a]).unwrap();
        assert!(v.violations.contains(&ShiftViolation::CycleLength {
            appliance: 0,
            expected: 2,
            got: 1
        }));

        let a = appliance(2, 2, 4);
        let v = check_shift_constraints(&[vec![1, 1, 0, 0]], &[a]).unwrap();
        assert_eq!(
            v.violations,
            vec![ShiftViolation::OutsideWindow { appliance: 0, hour: 1 }]
        );
    }

    #[test]
    fn cycle_cut_by_horizon_end() {
        let a = appliance(2, 1, 4);
        let v = check_shift_constraints(&[vec![0, 0, 0, 1]], &[a]).unwrap();
        assert!(!v.feasible());
    }

    #[test]
    fn ac_examples() {
        let cfg = flat_config(4);
        let at = |devs: [f64; 4]| {
            HorizonSeries::new(devs.iter().map(|d| cfg.desired_temp + d).collect(), Unit::Celsius).unwrap()
        };
        assert!(check_ac_constraints(&at([0.0; 4]), &cfg).feasible());

        let v = check_ac_constraints(&at([0.0, 6.0, 0.0, 0.0]), &cfg);
        assert!(matches!(v.violations[..], [AcViolation::HourlyCap { hour: 2, .. }]));
        // 23.33 + 5.22 = 28.55 is the highest permitted setpoint
        assert!(check_ac_constraints(&at([5.22, 0.0, 0.0, 0.0]), &cfg).feasible());

        let v = check_ac_constraints(&at([5.0; 4]), &cfg);
        assert!(matches!(v.violations[..], [AcViolation::TotalCap { .. }]));

        let v = check_ac_constraints(&at([-0.5, 0.0, 0.0, 0.0]), &cfg);
        assert!(matches!(v.violations[..], [AcViolation::BelowDesired { hour: 1, .. }]));
    }
}
