//! Random households and schedules shared by the integration tests.
#![allow(dead_code)]

use hems_core::model::{ApplianceSpec, ArxModel};
use hems_core::moga::{decode, Chromosome};
use hems_core::objectives::{CaseConfig, Schedule};
use hems_core::scenario::fixture::Household;
use rand::Rng;

#[derive(Debug, Clone, Copy)]
pub struct FixtureOpts {
    pub horizon: usize,
    /// Zero autoregressive term, so occupancy reaches demand only through
    /// the direct ARX gains.
    pub static_arx: bool,
    /// Occupancy gain of the ARX model; `None` draws a positive one.
    pub occupancy_gain: Option<f64>,
    /// `None` draws `c_c` at random.
    pub penalty_reward: Option<f64>,
    /// Desired demand of zero in every hour instead of the reshaped profile.
    pub zero_desired: bool,
}

impl FixtureOpts {
    pub fn random(horizon: usize) -> Self {
        Self {
            horizon,
            static_arx: false,
            occupancy_gain: None,
            penalty_reward: None,
            zero_desired: false,
        }
    }
}

fn uniform_vec<R: Rng>(rng: &mut R, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(lo..hi)).collect()
}

pub fn random_appliances<R: Rng>(rng: &mut R, horizon: usize, count: usize) -> Vec<ApplianceSpec> {
    (0..count)
        .map(|i| {
            let cycle_len = rng.random_range(1..=horizon.min(3));
            let window_start = rng.random_range(1..=horizon + 1 - cycle_len);
            let window_end = rng.random_range(window_start + cycle_len - 1..=horizon);
            let preferred_start = rng.random_range(window_start..=window_end + 1 - cycle_len);
            ApplianceSpec {
                name: format!("appliance{i}"),
                power_kw: rng.random_range(0.2..2.5),
                cycle_len,
                window_start,
                window_end,
                preferred_start,
            }
        })
        .collect()
}

pub fn random_household<R: Rng>(rng: &mut R, opts: FixtureOpts) -> Household {
    let h = opts.horizon;
    let alpha = if opts.static_arx {
        0.0
    } else {
        rng.random_range(-0.6..0.0)
    };
    let beta = [
        rng.random_range(0.05..0.1),
        opts.occupancy_gain.unwrap_or_else(|| rng.random_range(0.2..1.0)),
        rng.random_range(-0.02..-0.005),
    ];
    let n_app = rng.random_range(1..=3);
    Household {
        horizon: h,
        first_hour: rng.random_range(0..=(24 - h as u32)),
        rates: uniform_vec(rng, h, 0.05, 0.3),
        penalty_reward: opts.penalty_reward.unwrap_or_else(|| rng.random_range(0.0..0.1)),
        appliances: random_appliances(rng, h, n_app),
        non_shiftable: uniform_vec(rng, h, 0.2, 0.8),
        misc: uniform_vec(rng, h, 0.0, 0.4),
        outdoor_temp: uniform_vec(rng, h, 25.0, 38.0),
        occupancy: uniform_vec(rng, h, 0.0, 1.0),
        desired_demand: opts.zero_desired.then(|| vec![0.0; h]),
        desired_temp: 23.33,
        deviation_fraction: 0.1,
        dev_cap: 5.22,
        total_dev_cap: 19.44,
        arx: ArxModel::first_order(alpha, beta),
        ac_warmup: vec![rng.random_range(0.5..2.5)],
    }
}

pub fn random_case<R: Rng>(rng: &mut R, opts: FixtureOpts) -> CaseConfig {
    random_household(rng, opts).build().expect("random household is valid")
}

pub fn random_chromosome<R: Rng>(rng: &mut R, cfg: &CaseConfig) -> Chromosome {
    Chromosome {
        starts: cfg
            .appliances
            .iter()
            .map(|a| rng.random_range(a.start_range()))
            .collect(),
        setpoints: (0..cfg.horizon)
            .map(|_| cfg.desired_temp + rng.random_range(0.0..=cfg.dev_cap))
            .collect(),
    }
}

/// A feasible schedule: random starts, random setpoints after repair.
pub fn random_schedule<R: Rng>(rng: &mut R, cfg: &CaseConfig) -> Schedule {
    decode(&random_chromosome(rng, cfg), cfg)
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

/// Every extreme point of `{z : |z_i| <= 1, sum |z_i| <= gamma}`: `floor(gamma)`
/// entries at +-1 and, when `gamma` is fractional, one more at
/// +-(gamma - floor(gamma)).
pub fn polytope_vertices(n: usize, gamma: f64) -> Vec<Vec<f64>> {
    let full = (gamma.floor() as usize).min(n);
    let frac = if full < n { gamma - full as f64 } else { 0.0 };
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != full {
            continue;
        }
        let extra: Vec<Option<usize>> = if frac > 0.0 {
            (0..n).filter(|i| mask & (1 << i) == 0).map(Some).collect()
        } else {
            vec![None]
        };
        for e in extra {
            let support: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).chain(e).collect();
            for signs in 0u32..(1 << support.len()) {
                let mut z = vec![0.0; n];
                for (b, &i) in support.iter().enumerate() {
                    let mag = if Some(i) == e { frac } else { 1.0 };
                    z[i] = if signs & (1 << b) != 0 { -mag } else { mag };
                }
                out.push(z);
            }
        }
    }
    out
}

/// `max_z sum_i delta_i z_i` over the same extreme points as
/// [`polytope_vertices`], enumerated without materialising them.
pub fn vertex_max(deltas: &[f64], gamma: f64) -> f64 {
    let n = deltas.len();
    let full = (gamma.floor() as usize).min(n);
    let frac = if full < n { gamma - full as f64 } else { 0.0 };
    let mut best = f64::NEG_INFINITY;
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != full {
            continue;
        }
        let support: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let extras: Vec<Option<usize>> = if frac > 0.0 {
            (0..n).filter(|i| mask & (1 << i) == 0).map(Some).collect()
        } else {
            vec![None]
        };
        for e in extras {
            let k = support.len() + usize::from(e.is_some());
            for signs in 0u32..(1 << k) {
                let mut v = 0.0;
                for (b, &i) in support.iter().enumerate() {
                    v += if signs & (1 << b) != 0 { -deltas[i] } else { deltas[i] };
                }
                if let Some(i) = e {
                    let b = support.len();
                    v += frac * if signs & (1 << b) != 0 { -deltas[i] } else { deltas[i] };
                }
                best = best.max(v);
            }
        }
    }
    best
}

/// Two appliances over four hours, small enough to enumerate.
pub fn toy_case() -> CaseConfig {
    let app = |name: &str, power_kw: f64, window_start: usize, window_end: usize| ApplianceSpec {
        name: name.into(),
        power_kw,
        cycle_len: 2,
        window_start,
        window_end,
        preferred_start: window_start,
    };
    Household {
        horizon: 4,
        first_hour: 14,
        rates: vec![0.24, 0.18, 0.12, 0.09],
        penalty_reward: 0.05,
        appliances: vec![app("washer", 1.5, 1, 4), app("dishwasher", 0.5, 1, 4)],
        non_shiftable: vec![0.4, 0.5, 0.6, 0.5],
        misc: vec![0.1, 0.2, 0.3, 0.2],
        outdoor_temp: vec![36.0, 34.0, 31.0, 29.0],
        occupancy: vec![0.25, 0.5, 0.75, 0.75],
        desired_demand: None,
        desired_temp: 23.33,
        deviation_fraction: 0.1,
        dev_cap: 5.22,
        total_dev_cap: 19.44,
        arx: ArxModel::first_order(-0.5, [0.05, 0.8, -0.05]),
        ac_warmup: vec![1.5],
    }
    .build()
    .expect("toy household is valid")
}

/// Every chromosome of `cfg` with setpoints drawn from `levels`.
pub fn enumerate_chromosomes(cfg: &CaseConfig, levels: &[f64]) -> Vec<Chromosome> {
    let mut starts: Vec<Vec<usize>> = vec![vec![]];
    for a in &cfg.appliances {
        starts = starts
            .into_iter()
            .flat_map(|s| {
                a.start_range().map(move |g| {
                    let mut s = s.clone();
                    s.push(g);
                    s
                })
            })
            .collect();
    }
    let mut setpoints: Vec<Vec<f64>> = vec![vec![]];
    for _ in 0..cfg.horizon {
        setpoints = setpoints
            .into_iter()
            .flat_map(|s| {
                levels.iter().map(move |&l| {
                    let mut s = s.clone();
                    s.push(l);
                    s
                })
            })
            .collect();
    }
    starts
        .iter()
        .flat_map(|st| {
            setpoints.iter().map(move |sp| Chromosome {
                starts: st.clone(),
                setpoints: sp.clone(),
            })
        })
        .collect()
}

/// Distinct non-dominated objective vectors by pairwise comparison.
pub fn pareto_set(points: &[[f64; 3]]) -> Vec<[f64; 3]> {
    let dominates = |a: &[f64; 3], b: &[f64; 3]| a.iter().zip(b).all(|(x, y)| x <= y) && a != b;
    let mut out: Vec<[f64; 3]> = points
        .iter()
        .filter(|p| !points.iter().any(|q| dominates(q, p)))
        .copied()
        .collect();
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    out.dedup();
    out
}
