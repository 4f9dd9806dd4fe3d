//! WebAssembly bindings for the static demo page in `www/`.
//!
//! Each export returns a JSON string; errors surface as JavaScript
//! exceptions carrying the library's error message.

use hems_core::moga::{decode, evolve, select_solution, GaCase, GaParams};
use hems_core::objectives::Budgets;
use hems_core::robust::robust_penalty;
use hems_core::scenario::fixture::Household;
use hems_core::scenario::{budget_sweep, default_gammas, CaseKind};
use serde::Serialize;
use wasm_bindgen::prelude::*;

#[derive(Debug, Serialize)]
pub struct CurvePoint {
    pub gamma: f64,
    pub penalty: f64,
}

/// Protection term for budgets `0, step, 2 step, ..., n`.
pub fn penalty_points(deltas: &[f64], step: f64) -> hems_core::Result<Vec<CurvePoint>> {
    if !(step > 0.0) {
        return Err(hems_core::Error::validation("step", "must be positive"));
    }
    let n = deltas.len() as f64;
    let count = (n / step).floor() as usize;
    let mut gammas: Vec<f64> = (0..=count).map(|i| i as f64 * step).collect();
    if gammas.last().is_some_and(|g| *g < n) {
        gammas.push(n);
    }
    gammas
        .into_iter()
        .map(|gamma| {
            Ok(CurvePoint {
                gamma,
                penalty: robust_penalty(deltas, gamma)?,
            })
        })
        .collect()
}

#[derive(Debug, Serialize)]
pub struct SweepPoint {
    pub gamma: f64,
    pub cost: f64,
}

/// Case (b) cost of the bundled household for every budget `0..=H`.
pub fn case_b_sweep(deviation_fraction: f64) -> hems_core::Result<Vec<SweepPoint>> {
    let cfg = Household {
        deviation_fraction,
        ..Household::bundled()
    }
    .build()?;
    let sweep = budget_sweep(&cfg, CaseKind::B, &default_gammas(&cfg), &GaParams::default())?;
    Ok(sweep
        .rows
        .iter()
        .map(|r| SweepPoint {
            gamma: r.gamma,
            cost: r.cost,
        })
        .collect())
}

#[derive(Debug, Serialize)]
pub struct FrontView {
    /// `[o1, o2, o3]` per front member.
    pub front: Vec<[f64; 3]>,
    pub selected: [f64; 3],
    pub selected_setpoints: Vec<f64>,
    pub desired_temp: f64,
    pub first_hour: u32,
    pub hypervolume: Vec<f64>,
}

/// Case (d) GA on the bundled household with both budgets at `gamma`.
pub fn robust_front(gamma: f64, generations: usize, seed: u64) -> hems_core::Result<FrontView> {
    let cfg = Household::bundled().build()?;
    let params = GaParams {
        pop_size: 60,
        generations,
        seed,
        ..GaParams::default()
    };
    let result = evolve(&cfg, GaCase::Robust(Budgets::diagonal(gamma)), &params)?;
    let chosen = select_solution(&result.front)?;
    Ok(FrontView {
        front: result.front.iter().map(|m| m.objectives.as_array()).collect(),
        selected: chosen.objectives.as_array(),
        selected_setpoints: decode(&chosen.chromosome, &cfg).setpoints.values().to_vec(),
        desired_temp: cfg.desired_temp,
        first_hour: cfg.first_hour,
        hypervolume: result.history.iter().map(|h| h.hypervolume).collect(),
    })
}

fn to_js<T: Serialize>(r: hems_core::Result<T>) -> Result<String, JsError> {
    let value = r.map_err(|e| JsError::new(&e.to_string()))?;
    serde_json::to_string(&value).map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen(js_name = penaltyCurve)]
pub fn penalty_curve(deltas: Vec<f64>, step: f64) -> Result<String, JsError> {
    to_js(penalty_points(&deltas, step))
}

#[wasm_bindgen(js_name = caseBSweep)]
pub fn case_b_sweep_js(deviation_fraction: f64) -> Result<String, JsError> {
    to_js(case_b_sweep(deviation_fraction))
}

#[wasm_bindgen(js_name = robustFront)]
pub fn robust_front_js(gamma: f64, generations: u32, seed: u32) -> Result<String, JsError> {
    to_js(robust_front(gamma, generations as usize, u64::from(seed)))
}
