//! Household load model: shiftable appliances, the ARX cooling-load
//! predictor, the time-of-use tariff and the load decomposition.
//!
//! Hours exposed to users are 1-based (`1..=H`); slices are indexed 0-based.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{HorizonSeries, Unit};

/// A shiftable appliance that runs one contiguous cycle inside its window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApplianceSpec {
    pub name: String,
    /// kW drawn during each ON hour.
    pub power_kw: f64,
    /// Cycle length in hours.
    pub cycle_len: usize,
    /// First permitted hour (1-based, inclusive).
    pub window_start: usize,
    /// Last permitted hour (1-based, inclusive).
    pub window_end: usize,
    /// Start hour the household uses without demand response.
    pub preferred_start: usize,
}

impl ApplianceSpec {
    pub fn validate(&self, horizon: usize) -> Result<()> {
        let field = |f: &str| format!("appliance {}.{f}", self.name);
        if !(self.power_kw.is_finite() && self.power_kw >= 0.0) {
            return Err(Error::validation(field("power_kw"), "must be finite and >= 0"));
        }
        if self.window_start < 1 || self.window_start > self.window_end || self.window_end > horizon {
            return Err(Error::validation(
                field("window"),
                format!(
                    "need 1 <= start ({}) <= end ({}) <= H ({horizon})",
                    self.window_start, self.window_end
                ),
            ));
        }
        if self.cycle_len < 1 || self.cycle_len > self.window_end - self.window_start + 1 {
            return Err(Error::validation(
                field("cycle_len"),
                format!("cycle of {} h does not fit the window", self.cycle_len),
            ));
        }
        if !self.start_range().contains(&self.preferred_start) {
            return Err(Error::validation(
                field("preferred_start"),
                format!("{} is not a feasible start hour", self.preferred_start),
            ));
        }
        Ok(())
    }

    /// Feasible start hours (1-based) such that the whole cycle fits the window.
    pub fn start_range(&self) -> std::ops::RangeInclusive<usize> {
        self.window_start..=(self.window_end + 1).saturating_sub(self.cycle_len)
    }

    /// ON/OFF row for a cycle starting at `start` (1-based).
    pub fn on_row(&self, start: usize, horizon: usize) -> Vec<u8> {
        (1..=horizon)
            .map(|h| u8::from(h >= start && h < start + self.cycle_len))
            .collect()
    }
}

/// Time-of-use energy rate plus the constant demand-response penalty/reward price.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tariff {
    rate: HorizonSeries,
    penalty_reward: f64,
}

impl Tariff {
    pub fn new(rate: HorizonSeries, penalty_reward: f64) -> Result<Self> {
        if let Some((h, v)) = rate.values().iter().enumerate().find(|(_, v)| **v <= 0.0) {
            return Err(Error::validation(
                format!("tariff.rate[{h}]"),
                format!("{v} must be > 0"),
            ));
        }
        if !(penalty_reward.is_finite() && penalty_reward >= 0.0) {
            return Err(Error::validation("tariff.penalty_reward", "must be finite and >= 0"));
        }
        Ok(Self {
            rate: HorizonSeries::new(rate.into_values(), Unit::DollarPerKwh)?,
            penalty_reward,
        })
    }

    pub fn rate(&self) -> &HorizonSeries {
        &self.rate
    }

    pub fn rates(&self) -> &[f64] {
        self.rate.values()
    }

    pub fn penalty_reward(&self) -> f64 {
        self.penalty_reward
    }
}

/// Exogenous inputs to the cooling-load model, in coefficient order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Exogenous {
    OutdoorTemp,
    Occupancy,
    Setpoint,
}

impl Exogenous {
    pub const ALL: [Exogenous; 3] = [Exogenous::OutdoorTemp, Exogenous::Occupancy, Exogenous::Setpoint];

    pub fn name(self) -> &'static str {
        match self {
            Exogenous::OutdoorTemp => "outdoor_temp",
            Exogenous::Occupancy => "occupancy",
            Exogenous::Setpoint => "setpoint",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

/// Hourly exogenous series, all 0-based by hour.
#[derive(Debug, Clone, Copy)]
pub struct ExogenousInputs<'a> {
    pub outdoor_temp: &'a [f64],
    pub occupancy: &'a [f64],
    pub setpoint: &'a [f64],
}

impl<'a> ExogenousInputs<'a> {
    pub fn get(&self, input: Exogenous) -> &'a [f64] {
        match input {
            Exogenous::OutdoorTemp => self.outdoor_temp,
            Exogenous::Occupancy => self.occupancy,
            Exogenous::Setpoint => self.setpoint,
        }
    }

    fn len(&self) -> usize {
        self.outdoor_temp
            .len()
            .min(self.occupancy.len())
            .min(self.setpoint.len())
    }
}

/// Past AC load: `warmup` holds the hours before hour 0 (oldest first),
/// `known` the hours from 0 onwards.
#[derive(Debug, Clone, Copy)]
pub struct AcHistory<'a> {
    pub warmup: &'a [f64],
    pub known: &'a [f64],
}

impl AcHistory<'_> {
    fn at(&self, idx: isize) -> Option<f64> {
        if idx >= 0 {
            self.known.get(idx as usize).copied()
        } else {
            let back = (-idx) as usize;
            self.warmup.len().checked_sub(back).map(|i| self.warmup[i])
        }
    }
}

/// Auto-regressive cooling-load model with outdoor temperature, occupancy
/// and AC setpoint as exogenous inputs:
///
/// `p_ac[h] = sum_k ( -alpha_k * p_ac[h-k] + sum_m beta_{k,m} * x_m[h-k+1] )`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArxModel {
    lags: Vec<usize>,
    alpha: Vec<f64>,
    /// `beta[i][m]` pairs lag `lags[i]` with `Exogenous::ALL[m]`.
    beta: Vec<[f64; 3]>,
}

impl ArxModel {
    pub fn new(lags: Vec<usize>, alpha: Vec<f64>, beta: Vec<[f64; 3]>) -> Result<Self> {
        if lags.is_empty() {
            return Err(Error::validation("arx.lags", "at least one lag is required"));
        }
        if lags.contains(&0) {
            return Err(Error::validation("arx.lags", "lags start at 1"));
        }
        let mut sorted = lags.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != lags.len() {
            return Err(Error::validation("arx.lags", "duplicate lag"));
        }
        if alpha.len() != lags.len() {
            return Err(Error::LengthMismatch {
                what: "arx.alpha".into(),
                expected: lags.len(),
                got: alpha.len(),
            });
        }
        if beta.len() != lags.len() {
            return Err(Error::LengthMismatch {
                what: "arx.beta".into(),
                expected: lags.len(),
                got: beta.len(),
            });
        }
        if alpha.iter().chain(beta.iter().flatten()).any(|c| !c.is_finite()) {
            return Err(Error::validation("arx", "coefficients must be finite"));
        }
        Ok(Self { lags, alpha, beta })
    }

    /// Single-lag model `p[h] = -alpha p[h-1] + beta . x[h]`.
    pub fn first_order(alpha: f64, beta: [f64; 3]) -> Self {
        Self {
            lags: vec![1],
            alpha: vec![alpha],
            beta: vec![beta],
        }
    }

    pub fn lags(&self) -> &[usize] {
        &self.lags
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn beta(&self) -> &[[f64; 3]] {
        &self.beta
    }

    pub fn max_lag(&self) -> usize {
        self.lags.iter().copied().max().unwrap_or(1)
    }

    /// `(lag, beta)` pairs for one exogenous input.
    pub fn input_gains(&self, input: Exogenous) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.lags
            .iter()
            .zip(&self.beta)
            .map(move |(&k, b)| (k, b[input.index()]))
    }

    /// Unclamped model output at 0-based hour `h`.
    pub fn predict_raw(&self, history: AcHistory<'_>, exog: ExogenousInputs<'_>, h: usize) -> Result<f64> {
        let mut out = 0.0;
        for ((&k, &a), b) in self.lags.iter().zip(&self.alpha).zip(&self.beta) {
            let past = history
                .at(h as isize - k as isize)
                .ok_or(Error::MissingHistory { hour: h, lag: k })?;
            // exogenous index h - k + 1
            let xi = (h + 1)
                .checked_sub(k)
                .filter(|&i| i < exog.len())
                .ok_or(Error::MissingHistory { hour: h, lag: k })?;
            out -= a * past;
            for input in Exogenous::ALL {
                out += b[input.index()] * exog.get(input)[xi];
            }
        }
        Ok(out)
    }

    /// AC load at 0-based hour `h`, clamped below at 0 kW.
    pub fn predict(&self, history: AcHistory<'_>, exog: ExogenousInputs<'_>, h: usize) -> Result<f64> {
        Ok(self.predict_raw(history, exog, h)?.max(0.0))
    }

    /// Rolls the model forward over `horizon` hours, feeding each clamped
    /// prediction back as history.
    pub fn simulate(&self, warmup: &[f64], exog: ExogenousInputs<'_>, horizon: usize) -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(horizon);
        for h in 0..horizon {
            let p = self.predict(AcHistory { warmup, known: &out }, exog, h)?;
            out.push(p);
        }
        Ok(out)
    }

    /// Ordinary least squares fit over every hour with a full set of lags.
    pub fn fit(ac: &[f64], exog: ExogenousInputs<'_>, lags: &[usize]) -> Result<Self> {
        let skeleton = Self::new(lags.to_vec(), vec![0.0; lags.len()], vec![[0.0; 3]; lags.len()])?;
        let n = ac.len();
        if exog.len() < n {
            return Err(Error::LengthMismatch {
                what: "exogenous inputs".into(),
                expected: n,
                got: exog.len(),
            });
        }
        let max_lag = skeleton.max_lag();
        let n_coef = lags.len() * 4;
        let rows = n.saturating_sub(max_lag);
        if rows < n_coef {
            return Err(Error::InsufficientData(format!(
                "{n} samples give {rows} regression rows for {n_coef} coefficients"
            )));
        }

        let mut names = Vec::with_capacity(n_coef);
        let mut columns: Vec<Vec<f64>> = Vec::with_capacity(n_coef);
        for &k in lags {
            names.push(format!("ac(t-{k})"));
            columns.push((max_lag..n).map(|t| ac[t - k]).collect());
        }
        for &k in lags {
            for input in Exogenous::ALL {
                names.push(lagged_name(input.name(), k - 1));
                let x = exog.get(input);
                columns.push((max_lag..n).map(|t| x[t + 1 - k]).collect());
            }
        }
        let target: Vec<f64> = ac[max_lag..].to_vec();

        let coef = least_squares(&columns, &target, &names)?;
        let alpha = coef[..lags.len()].iter().map(|c| -c).collect();
        let beta = coef[lags.len()..].chunks(3).map(|c| [c[0], c[1], c[2]]).collect();
        Self::new(lags.to_vec(), alpha, beta)
    }
}

fn lagged_name(base: &str, back: usize) -> String {
    if back == 0 {
        format!("{base}(t)")
    } else {
        format!("{base}(t-{back})")
    }
}

/// Solves `min ||X c - y||` by modified Gram-Schmidt QR with one
/// re-orthogonalisation pass. Columns with zero variance, or whose
/// orthogonal remainder vanishes, are reported as rank deficiency.
fn least_squares(columns: &[Vec<f64>], y: &[f64], names: &[String]) -> Result<Vec<f64>> {
    let p = columns.len();
    for (j, col) in columns.iter().enumerate() {
        let (lo, hi) = col.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
        if hi - lo <= 0.0 {
            return Err(Error::RankDeficient {
                columns: vec![names[j].clone()],
            });
        }
    }

    let mut q: Vec<Vec<f64>> = Vec::with_capacity(p);
    let mut r = vec![vec![0.0; p]; p];
    for (j, col) in columns.iter().enumerate() {
        let norm0 = dot(col, col).sqrt();
        let mut v = col.clone();
        for _pass in 0..2 {
            for (i, qi) in q.iter().enumerate() {
                let proj = dot(qi, &v);
                r[i][j] += proj;
                axpy(-proj, qi, &mut v);
            }
        }
        let norm = dot(&v, &v).sqrt();
        if norm <= 1e-10 * norm0 {
            let mut collinear: Vec<String> = (0..j)
                .filter(|&i| r[i][j].abs() > 1e-8 * norm0)
                .map(|i| names[i].clone())
                .collect();
            collinear.push(names[j].clone());
            return Err(Error::RankDeficient { columns: collinear });
        }
        r[j][j] = norm;
        v.iter_mut().for_each(|x| *x /= norm);
        q.push(v);
    }

    let qty: Vec<f64> = q.iter().map(|qi| dot(qi, y)).collect();
    let mut coef = vec![0.0; p];
    for i in (0..p).rev() {
        let s: f64 = (i + 1..p).map(|j| r[i][j] * coef[j]).sum();
        coef[i] = (qty[i] - s) / r[i][i];
    }
    Ok(coef)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(a: f64, x: &[f64], y: &mut [f64]) {
    y.iter_mut().zip(x).for_each(|(yi, xi)| *yi += a * xi);
}

/// Hourly demand split into its total and the non-AC part.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoadSplit {
    pub total: f64,
    pub non_ac: f64,
}

/// `p_d = p_shift + p_nshift + p_mis + p_ac`, with `p_d' = p_d - p_ac`.
pub fn decompose_load(shift: f64, n_shift: f64, mis: f64, ac: f64) -> Result<LoadSplit> {
    for (what, value) in [
        ("shiftable load", shift),
        ("non-shiftable load", n_shift),
        ("misc load", mis),
        ("AC load", ac),
    ] {
        if value < 0.0 || !value.is_finite() {
            return Err(Error::Domain { what, value });
        }
    }
    let non_ac = shift + n_shift + mis;
    Ok(LoadSplit {
        total: non_ac + ac,
        non_ac,
    })
}
