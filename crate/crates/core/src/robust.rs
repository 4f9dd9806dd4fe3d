//! Box uncertainty with a budget on the number of simultaneous deviations.
//!
//! For deviations `d` and budget `g` the protection term
//! `sup { d.z : |z|_inf <= 1, |z|_1 <= g }` equals the split form
//! `min { sum|Z_l| + g * max|W_l| : Z + W = d }`. Both reduce to the sum of the
//! `floor(g)` largest `|d_l|` plus `(g - floor(g))` times the next one.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::HorizonSeries;

/// Default box half-width as a fraction of the nominal value (0.9x .. 1.1x).
pub const DEFAULT_DEVIATION_FRACTION: f64 = 0.1;

/// Nominal series with per-hour deviation magnitudes and a budget.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UncertainParam {
    nominal: HorizonSeries,
    deviation: Vec<f64>,
    budget: f64,
}

impl UncertainParam {
    pub fn new(nominal: HorizonSeries, deviation: Vec<f64>, budget: f64) -> Result<Self> {
        if deviation.len() != nominal.horizon() {
            return Err(Error::LengthMismatch {
                what: "deviation".into(),
                expected: nominal.horizon(),
                got: deviation.len(),
            });
        }
        if let Some(d) = deviation.iter().find(|d| !(d.is_finite() && **d >= 0.0)) {
            return Err(Error::validation("deviation", format!("{d} must be finite and >= 0")));
        }
        check_budget(budget, deviation.len())?;
        Ok(Self {
            nominal,
            deviation,
            budget,
        })
    }

    /// Deviation `fraction * |nominal|` in every hour.
    pub fn proportional(nominal: HorizonSeries, fraction: f64, budget: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&fraction) {
            return Err(Error::validation(
                "deviation_fraction",
                format!("{fraction} not in [0, 1)"),
            ));
        }
        let deviation = nominal.values().iter().map(|v| fraction * v.abs()).collect();
        Self::new(nominal, deviation, budget)
    }

    pub fn nominal(&self) -> &HorizonSeries {
        &self.nominal
    }

    pub fn deviation(&self) -> &[f64] {
        &self.deviation
    }

    pub fn budget(&self) -> f64 {
        self.budget
    }

    pub fn with_budget(&self, budget: f64) -> Result<Self> {
        check_budget(budget, self.deviation.len())?;
        Ok(Self { budget, ..self.clone() })
    }
}

pub(crate) fn check_budget(budget: f64, len: usize) -> Result<()> {
    if !(budget.is_finite() && budget >= 0.0 && budget <= len as f64) {
        return Err(Error::BudgetOutOfRange { budget, max: len });
    }
    Ok(())
}

/// Worst-case protection term for deviations `deltas` under `budget`.
pub fn robust_penalty(deltas: &[f64], budget: f64) -> Result<f64> {
    check_deltas(deltas)?;
    check_budget(budget, deltas.len())?;
    let mags = sorted_magnitudes(deltas);
    let whole = budget.floor() as usize;
    let mut value: f64 = mags.iter().take(whole).sum();
    if let Some(next) = mags.get(whole) {
        value += (budget - whole as f64) * next;
    }
    Ok(value)
}

fn check_deltas(deltas: &[f64]) -> Result<()> {
    if let Some(d) = deltas.iter().find(|d| !d.is_finite()) {
        return Err(Error::validation("deviations", format!("non-finite value {d}")));
    }
    Ok(())
}

fn sorted_magnitudes(deltas: &[f64]) -> Vec<f64> {
    let mut mags: Vec<f64> = deltas.iter().map(|d| d.abs()).collect();
    mags.sort_by(|a, b| b.total_cmp(a));
    mags
}

/// A maximiser `z` of `deltas . z` over the budgeted box: full sign-matched
/// deviations on the `floor(budget)` largest magnitudes and a fractional one
/// on the next. Ties keep the earlier index first.
pub fn worst_case_direction(deltas: &[f64], budget: f64) -> Result<Vec<f64>> {
    check_deltas(deltas)?;
    check_budget(budget, deltas.len())?;
    let mut order: Vec<usize> = (0..deltas.len()).collect();
    order.sort_by(|&a, &b| deltas[b].abs().total_cmp(&deltas[a].abs()).then(a.cmp(&b)));
    let mut z = vec![0.0; deltas.len()];
    let mut left = budget;
    for i in order {
        if left <= 0.0 {
            break;
        }
        let step = left.min(1.0);
        z[i] = if deltas[i] < 0.0 { -step } else { step };
        left -= step;
    }
    Ok(z)
}

/// Explicit auxiliary split `Z + W = delta`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RobustSplit {
    pub z: Vec<f64>,
    pub w: Vec<f64>,
    pub value: f64,
}

impl RobustSplit {
    /// `sum|Z| + budget * max|W|` for this split.
    pub fn objective(&self, budget: f64) -> f64 {
        let max_w = self.w.iter().fold(0.0_f64, |m, w| m.max(w.abs()));
        self.z.iter().map(|z| z.abs()).sum::<f64>() + budget * max_w
    }
}

/// An optimal split for the penalty: `W` is `delta` clipped to the level
/// `t = |delta|_(ceil(budget))` (the largest magnitude when the budget is 0),
/// `Z` carries the overflow above that level.
pub fn robust_penalty_dual(deltas: &[f64], budget: f64) -> Result<RobustSplit> {
    check_deltas(deltas)?;
    check_budget(budget, deltas.len())?;
    let mags = sorted_magnitudes(deltas);
    let level = match budget.ceil() as usize {
        0 => mags.first().copied().unwrap_or(0.0),
        k => mags[k - 1],
    };
    let mut z = Vec::with_capacity(deltas.len());
    let mut w = Vec::with_capacity(deltas.len());
    for &d in deltas {
        if d.abs() <= level {
            w.push(d);
            z.push(0.0);
        } else {
            let wl = level.copysign(d);
            w.push(wl);
            z.push(d - wl);
        }
    }
    let mut split = RobustSplit { z, w, value: 0.0 };
    split.value = split.objective(budget);
    Ok(split)
}

/// Tight bound for `|x|` under the linearisation `-a <= x <= a`.
pub fn linearize_abs(x: f64) -> f64 {
    x.abs()
}

/// Whether `bound` is feasible for `x` in `-bound <= x <= bound`.
pub fn abs_bound_holds(x: f64, bound: f64) -> bool {
    -bound <= x && x <= bound
}

/// Nominal plus deviation in every hour: the adversarial direction for
/// coefficients that raise cost.
pub fn perturb_worst_case(param: &UncertainParam) -> HorizonSeries {
    let values = param
        .nominal()
        .values()
        .iter()
        .zip(param.deviation())
        .map(|(n, d)| n + d)
        .collect();
    HorizonSeries::new(values, param.nominal().unit()).expect("adding non-negative deviations keeps a valid series")
}
