//! Case studies (a)-(d), the diagonal budget sweep and schedule comparison.

pub mod fixture;
pub mod report;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::ApplianceSpec;
use crate::moga::{decode, evolve, select_solution, Chromosome, GaCase, GaParams, GaResult};
use crate::objectives::{
    check_ac_constraints, check_shift_constraints, cost_case_a, derive_demand, robust_cost_case_b, robust_objectives,
    Budgets, CaseConfig, DemandProfile, ObjectiveVector, RobustCost, Schedule,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CaseKind {
    A,
    B,
    C,
    D,
}

impl CaseKind {
    pub const ALL: [CaseKind; 4] = [CaseKind::A, CaseKind::B, CaseKind::C, CaseKind::D];

    pub fn letter(self) -> char {
        match self {
            CaseKind::A => 'a',
            CaseKind::B => 'b',
            CaseKind::C => 'c',
            CaseKind::D => 'd',
        }
    }

    pub fn uses_ga(self) -> bool {
        matches!(self, CaseKind::C | CaseKind::D)
    }
}

impl fmt::Display for CaseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

impl FromStr for CaseKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "a" => Ok(CaseKind::A),
            "b" => Ok(CaseKind::B),
            "c" => Ok(CaseKind::C),
            "d" => Ok(CaseKind::D),
            other => Err(Error::validation("case", format!("unknown case {other:?}"))),
        }
    }
}

/// One moved ON hour of a shiftable appliance, in clock hours.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Transfer {
    pub appliance: String,
    pub from_hour: u32,
    pub to_hour: u32,
    pub kw: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TransferReport {
    pub rows: Vec<Transfer>,
}

/// Pairs the ON hours each appliance left with the ON hours it gained,
/// earliest with earliest. Hour labels are `first_hour + index`.
pub fn compare_schedules(
    baseline: &Schedule,
    optimized: &Schedule,
    appliances: &[ApplianceSpec],
    first_hour: u32,
) -> Result<TransferReport> {
    for (what, s) in [("baseline", baseline), ("optimized", optimized)] {
        if s.u.len() != appliances.len() {
            return Err(Error::LengthMismatch {
                what: format!("{what} schedule rows"),
                expected: appliances.len(),
                got: s.u.len(),
            });
        }
    }
    let mut rows = Vec::new();
    for (s, a) in appliances.iter().enumerate() {
        let (before, after) = (&baseline.u[s], &optimized.u[s]);
        if before.len() != after.len() {
            return Err(Error::LengthMismatch {
                what: format!("optimized row for {}", a.name),
                expected: before.len(),
                got: after.len(),
            });
        }
        let left: Vec<usize> = (0..before.len()).filter(|&h| before[h] == 1 && after[h] == 0).collect();
        let gained: Vec<usize> = (0..after.len()).filter(|&h| after[h] == 1 && before[h] == 0).collect();
        for (&from, &to) in left.iter().zip(&gained) {
            rows.push(Transfer {
                appliance: a.name.clone(),
                from_hour: first_hour + from as u32,
                to_hour: first_hour + to as u32,
                kw: a.power_kw,
            });
        }
    }
    Ok(TransferReport { rows })
}

/// Outcome of one case run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseReport {
    pub case: CaseKind,
    pub budgets: Budgets,
    /// Habitual schedule for (a)/(b), the selected GA solution for (c)/(d).
    pub schedule: Schedule,
    pub demand: DemandProfile,
    /// (a) energy cost, (b) robust energy cost, (c) cost objective,
    /// (d) robust cost objective.
    pub cost: f64,
    /// `sum c_h p_h` of the schedule at nominal data.
    pub energy_cost: f64,
    pub robust_cost: Option<RobustCost>,
    pub objectives: Option<ObjectiveVector>,
    pub nominal_objectives: Option<ObjectiveVector>,
    pub transfers: TransferReport,
    pub ga: Option<GaResult>,
    pub shift_feasible: bool,
    pub ac_feasible: bool,
}

pub fn run_case(case: CaseKind, cfg: &CaseConfig, budgets: Budgets, ga: &GaParams) -> Result<CaseReport> {
    cfg.validate()?;
    budgets.check(cfg.horizon)?;
    let baseline = Schedule::baseline(cfg);

    let (schedule, cost, robust_cost, objectives, nominal_objectives, ga_result) = match case {
        CaseKind::A => {
            let demand = derive_demand(&baseline, cfg)?;
            let cost = cost_case_a(&demand.total, &cfg.tariff)?;
            (baseline.clone(), cost, None, None, None, None)
        }
        CaseKind::B => {
            let rc = robust_cost_case_b(cfg, &baseline, budgets)?;
            (baseline.clone(), rc.total, Some(rc), None, None, None)
        }
        CaseKind::C | CaseKind::D => {
            let ga_case = if case == CaseKind::C {
                GaCase::Nominal
            } else {
                GaCase::Robust(budgets)
            };
            let result = evolve(cfg, ga_case, ga)?;
            let chosen = select_solution(&result.front)?;
            let schedule = decode(&chosen.chromosome, cfg);
            let ro = robust_objectives(
                &schedule,
                cfg,
                if case == CaseKind::C { Budgets::ZERO } else { budgets },
            )?;
            let obj = chosen.objectives;
            (schedule, obj.o3, None, Some(obj), Some(ro.nominal), Some(result))
        }
    };

    let demand = derive_demand(&schedule, cfg)?;
    let energy_cost = cost_case_a(&demand.total, &cfg.tariff)?;
    let transfers = compare_schedules(&baseline, &schedule, &cfg.appliances, cfg.first_hour)?;
    let shift_feasible = check_shift_constraints(&schedule.u, &cfg.appliances)?.feasible();
    let ac_feasible = check_ac_constraints(&schedule.setpoints, cfg).feasible();
    Ok(CaseReport {
        case,
        budgets,
        schedule,
        demand,
        cost,
        energy_cost,
        robust_cost,
        objectives,
        nominal_objectives,
        transfers,
        ga: ga_result,
        shift_feasible,
        ac_feasible,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub gamma: f64,
    pub cost: f64,
    pub objectives: Option<ObjectiveVector>,
    pub schedule: Schedule,
    /// Case (d): cost objective of the compromise solution picked from this
    /// budget's own GA front.
    pub selected_cost: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub case: CaseKind,
    pub rows: Vec<SweepRow>,
    /// Budgets at which the cost fell below the previous row's.
    pub decreases: Vec<f64>,
}

impl SweepResult {
    pub fn is_monotone(&self) -> bool {
        self.decreases.is_empty()
    }
}

/// Default sweep grid `0, 1, ..., H`.
pub fn default_gammas(cfg: &CaseConfig) -> Vec<f64> {
    (0..=cfg.horizon).map(|g| g as f64).collect()
}

#[cfg(feature = "parallel")]
fn map_all<T: Sync, U: Send>(items: &[T], f: impl Fn(&T) -> Result<U> + Sync + Send) -> Result<Vec<U>> {
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn map_all<T, U>(items: &[T], f: impl Fn(&T) -> Result<U>) -> Result<Vec<U>> {
    items.iter().map(f).collect()
}

/// Runs case (b) or (d) with both budgets equal to each `gamma`.
///
/// Case (b) rows are the robust cost of the habitual schedule. For case (d)
/// every budget gets its own GA run; the fronts of all runs are pooled and
/// each row reports the cheapest pooled schedule under that row's budget, so
/// the cost column is the robust cost frontier over one fixed candidate set.
pub fn budget_sweep(cfg: &CaseConfig, case: CaseKind, gammas: &[f64], ga: &GaParams) -> Result<SweepResult> {
    if !matches!(case, CaseKind::B | CaseKind::D) {
        return Err(Error::validation(
            "case",
            format!("budget sweeps apply to cases b and d, not {case}"),
        ));
    }
    for &g in gammas {
        Budgets::diagonal(g).check(cfg.horizon)?;
    }
    let reports = map_all(gammas, |g| run_case(case, cfg, Budgets::diagonal(*g), ga))?;

    let rows: Vec<SweepRow> = if case == CaseKind::B {
        gammas
            .iter()
            .zip(reports)
            .map(|(&gamma, r)| SweepRow {
                gamma,
                cost: r.cost,
                objectives: None,
                schedule: r.schedule,
                selected_cost: None,
            })
            .collect()
    } else {
        let mut pool: Vec<Chromosome> = reports
            .iter()
            .flat_map(|r| r.ga.iter().flat_map(|g| g.front.iter().map(|m| m.chromosome.clone())))
            .collect();
        pool.sort_by(Chromosome::lex_cmp);
        pool.dedup_by(|a, b| a.lex_cmp(b).is_eq());
        gammas
            .iter()
            .zip(&reports)
            .map(|(&gamma, r)| {
                let case = GaCase::Robust(Budgets::diagonal(gamma));
                let objs = map_all(&pool, |c| case.evaluate(c, cfg))?;
                // Pool is lex-sorted, so the first minimum breaks ties.
                let best = (0..pool.len())
                    .reduce(|a, b| if objs[b].o3 < objs[a].o3 { b } else { a })
                    .ok_or(Error::EmptyFront)?;
                Ok(SweepRow {
                    gamma,
                    cost: objs[best].o3,
                    objectives: Some(objs[best]),
                    schedule: decode(&pool[best], cfg),
                    selected_cost: Some(r.cost),
                })
            })
            .collect::<Result<_>>()?
    };

    let decreases = rows
        .windows(2)
        .filter(|w| w[1].gamma >= w[0].gamma && w[1].cost < w[0].cost)
        .map(|w| w[1].gamma)
        .collect();
    Ok(SweepResult { case, rows, decreases })
}
