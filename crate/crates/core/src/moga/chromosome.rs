use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::objectives::{CaseConfig, Schedule};
use crate::series::{HorizonSeries, Unit};

/// Start hour (1-based) per appliance plus one setpoint per hour.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Chromosome {
    pub starts: Vec<usize>,
    pub setpoints: Vec<f64>,
}

impl Chromosome {
    pub fn genome_len(&self) -> usize {
        self.starts.len() + self.setpoints.len()
    }

    pub fn check_bounds(&self, cfg: &CaseConfig) -> Result<()> {
        if self.starts.len() != cfg.appliances.len() {
            return Err(Error::LengthMismatch {
                what: "start genes".into(),
                expected: cfg.appliances.len(),
                got: self.starts.len(),
            });
        }
        if self.setpoints.len() != cfg.horizon {
            return Err(Error::LengthMismatch {
                what: "setpoint genes".into(),
                expected: cfg.horizon,
                got: self.setpoints.len(),
            });
        }
        for (a, &g) in cfg.appliances.iter().zip(&self.starts) {
            if !a.start_range().contains(&g) {
                return Err(Error::validation(
                    "start gene",
                    format!("{} cannot start at hour {g}", a.name),
                ));
            }
        }
        for &t in &self.setpoints {
            if !t.is_finite() || t < cfg.desired_temp || t > cfg.desired_temp + cfg.dev_cap {
                return Err(Error::Domain {
                    what: "setpoint gene",
                    value: t,
                });
            }
        }
        Ok(())
    }

    /// Lexicographic order on start genes, then setpoint genes.
    pub fn lex_cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.starts.cmp(&other.starts).then_with(|| {
            self.setpoints
                .iter()
                .zip(&other.setpoints)
                .map(|(a, b)| a.total_cmp(b))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        })
    }
}

/// Setpoint deviations after the total-deviation repair: when they sum past
/// the cap all of them shrink by the same factor.
pub fn repair_setpoints(setpoints: &[f64], desired_temp: f64, dev_cap: f64, total_cap: f64) -> Vec<f64> {
    let devs: Vec<f64> = setpoints
        .iter()
        .map(|t| (t - desired_temp).clamp(0.0, dev_cap))
        .collect();
    let total: f64 = devs.iter().sum();
    let scale = if total > total_cap { total_cap / total } else { 1.0 };
    devs.iter().map(|d| desired_temp + d * scale).collect()
}

/// A start gene `g` switches its appliance on for hours `g..g + N_s`.
pub fn decode(chrom: &Chromosome, cfg: &CaseConfig) -> Schedule {
    let u = cfg
        .appliances
        .iter()
        .zip(&chrom.starts)
        .map(|(a, &g)| a.on_row(g, cfg.horizon))
        .collect();
    let values = repair_setpoints(&chrom.setpoints, cfg.desired_temp, cfg.dev_cap, cfg.total_dev_cap);
    let setpoints = HorizonSeries::new(values, Unit::Celsius).expect("repaired setpoints are finite");
    Schedule { u, setpoints }
}
