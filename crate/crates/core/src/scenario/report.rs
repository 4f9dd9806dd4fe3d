//! CSV and JSON artifacts written under a run's output directory.

use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use super::{CaseKind, CaseReport, SweepResult, Transfer};
use crate::error::{Error, Result};
use crate::io::timeseries::csv_error;
use crate::moga::GenerationStats;
use crate::objectives::{Budgets, ObjectiveVector, RobustCost};

pub const SWEEP_FILE: &str = "sweep.csv";
pub const CONVERGENCE_FILE: &str = "convergence.csv";
pub const SETPOINTS_FILE: &str = "setpoints.csv";
pub const TRANSFERS_FILE: &str = "transfers.csv";
pub const FRONT_FILE: &str = "front.csv";
pub const SCHEDULE_FILE: &str = "schedule.csv";
pub const SUMMARY_FILE: &str = "summary.json";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepCsvRow {
    pub gamma: f64,
    pub cost: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SetpointRow {
    pub hour: u32,
    pub setpoint_c: Option<f64>,
    pub setpoint_d: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransferCsvRow {
    pub case: CaseKind,
    pub appliance: String,
    pub from_hour: u32,
    pub to_hour: u32,
    pub kw: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrontRow {
    pub o1: f64,
    pub o2: f64,
    pub o3: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScheduleRow {
    pub hour: u32,
    /// Appliances ON in this hour, `;`-separated.
    pub running: String,
    pub setpoint: f64,
    pub ac_kw: f64,
    pub demand_kw: f64,
}

/// JSON-friendly digest of a [`CaseReport`]; the full front and convergence
/// history go to their own CSV files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseSummary {
    pub case: CaseKind,
    pub budgets: Budgets,
    pub cost: f64,
    pub energy_cost: f64,
    pub robust_cost: Option<RobustCost>,
    pub objectives: Option<ObjectiveVector>,
    pub nominal_objectives: Option<ObjectiveVector>,
    /// 1-based start hour of each appliance.
    pub starts: Vec<Option<usize>>,
    pub setpoints: Vec<f64>,
    pub demand_kw: Vec<f64>,
    pub transfers: Vec<Transfer>,
    pub shift_feasible: bool,
    pub ac_feasible: bool,
    pub ga: Option<GaSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaSummary {
    pub evaluations: usize,
    pub generations: usize,
    pub front_size: usize,
    pub reference_point: [f64; 3],
    pub final_hypervolume: f64,
}

impl From<&CaseReport> for CaseSummary {
    fn from(r: &CaseReport) -> Self {
        Self {
            case: r.case,
            budgets: r.budgets,
            cost: r.cost,
            energy_cost: r.energy_cost,
            robust_cost: r.robust_cost.clone(),
            objectives: r.objectives,
            nominal_objectives: r.nominal_objectives,
            starts: (0..r.schedule.u.len())
                .map(|s| r.schedule.on_hours(s).first().copied())
                .collect(),
            setpoints: r.schedule.setpoints.values().to_vec(),
            demand_kw: r.demand.total.clone(),
            transfers: r.transfers.rows.clone(),
            shift_feasible: r.shift_feasible,
            ac_feasible: r.ac_feasible,
            ga: r.ga.as_ref().map(|g| GaSummary {
                evaluations: g.evaluations,
                generations: g.history.len().saturating_sub(1),
                front_size: g.front.len(),
                reference_point: g.reference_point,
                final_hypervolume: g.history.last().map_or(0.0, |h| h.hypervolume),
            }),
        }
    }
}

pub fn write_rows<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_error(path, 0, e))?;
    for (i, r) in rows.iter().enumerate() {
        w.serialize(r).map_err(|e| csv_error(path, i + 1, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn read_rows<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    if !path.exists() {
        return Err(Error::MissingFile(path.to_path_buf()));
    }
    let mut r = csv::Reader::from_path(path).map_err(|e| csv_error(path, 0, e))?;
    r.deserialize()
        .enumerate()
        .map(|(i, rec)| rec.map_err(|e| csv_error(path, i + 1, e)))
        .collect()
}

pub fn sweep_rows(sweep: &SweepResult) -> Vec<SweepCsvRow> {
    sweep
        .rows
        .iter()
        .map(|r| SweepCsvRow {
            gamma: r.gamma,
            cost: r.cost,
        })
        .collect()
}

pub fn setpoint_rows(first_hour: u32, case_c: Option<&CaseReport>, case_d: Option<&CaseReport>) -> Vec<SetpointRow> {
    let h = case_c.or(case_d).map_or(0, |r| r.schedule.setpoints.horizon());
    let at = |r: Option<&CaseReport>, i: usize| r.map(|r| r.schedule.setpoints[i]);
    (0..h)
        .map(|i| SetpointRow {
            hour: first_hour + i as u32,
            setpoint_c: at(case_c, i),
            setpoint_d: at(case_d, i),
        })
        .collect()
}

pub fn transfer_rows(report: &CaseReport) -> Vec<TransferCsvRow> {
    report
        .transfers
        .rows
        .iter()
        .map(|t: &Transfer| TransferCsvRow {
            case: report.case,
            appliance: t.appliance.clone(),
            from_hour: t.from_hour,
            to_hour: t.to_hour,
            kw: t.kw,
        })
        .collect()
}

pub fn schedule_rows(report: &CaseReport, names: &[String], first_hour: u32) -> Vec<ScheduleRow> {
    (0..report.schedule.setpoints.horizon())
        .map(|h| ScheduleRow {
            hour: first_hour + h as u32,
            running: names
                .iter()
                .zip(&report.schedule.u)
                .filter(|(_, row)| row[h] == 1)
                .map(|(n, _)| n.as_str())
                .collect::<Vec<_>>()
                .join(";"),
            setpoint: report.schedule.setpoints[h],
            ac_kw: report.demand.ac[h],
            demand_kw: report.demand.total[h],
        })
        .collect()
}

pub fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::validation("json", e.to_string()))?;
    fs::write(path, text + "\n").map_err(|e| Error::io(path, e))
}

/// Writes the per-case CSVs for one report; returns the files written.
pub fn write_case_files(dir: &Path, report: &CaseReport, names: &[String], first_hour: u32) -> Result<Vec<PathBuf>> {
    ensure_dir(dir)?;
    let mut written = Vec::new();
    let p = dir.join(SCHEDULE_FILE);
    write_rows(&p, &schedule_rows(report, names, first_hour))?;
    written.push(p);
    if let Some(ga) = &report.ga {
        let p = dir.join(CONVERGENCE_FILE);
        write_rows::<GenerationStats>(&p, &ga.history)?;
        written.push(p);
        let p = dir.join(FRONT_FILE);
        let front: Vec<FrontRow> = ga
            .front
            .iter()
            .map(|m| FrontRow {
                o1: m.objectives.o1,
                o2: m.objectives.o2,
                o3: m.objectives.o3,
            })
            .collect();
        write_rows(&p, &front)?;
        written.push(p);
        let p = dir.join(TRANSFERS_FILE);
        write_rows(&p, &transfer_rows(report))?;
        written.push(p);
        let p = dir.join(SETPOINTS_FILE);
        let (c, d) = match report.case {
            CaseKind::C => (Some(report), None),
            _ => (None, Some(report)),
        };
        write_rows(&p, &setpoint_rows(first_hour, c, d))?;
        written.push(p);
    }
    Ok(written)
}
