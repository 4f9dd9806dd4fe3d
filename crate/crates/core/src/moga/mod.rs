//! Elitist multi-objective genetic algorithm over appliance start hours and
//! AC setpoints.
//!
//! The population is managed NSGA-II style (non-dominated ranks, crowding,
//! parents+offspring truncation). Every non-dominated objective vector ever
//! evaluated is also kept in an unbounded archive, which is what [`evolve`]
//! returns as the front and what the hypervolume history is measured on.

mod chromosome;
mod hypervolume;
mod sort;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

pub use chromosome::{decode, repair_setpoints, Chromosome};
pub use hypervolume::hypervolume_3d;
pub use sort::{crowding_distance, non_dominated_sort};

use crate::error::{Error, Result};
use crate::objectives::{objectives_case_c, objectives_case_d, Budgets, CaseConfig, ObjectiveVector};

/// Which objective vector the search minimises.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum GaCase {
    /// Nominal objectives.
    Nominal,
    /// Robust objectives under the given budgets.
    Robust(Budgets),
}

impl GaCase {
    pub fn evaluate(&self, chrom: &Chromosome, cfg: &CaseConfig) -> Result<ObjectiveVector> {
        let schedule = decode(chrom, cfg);
        match self {
            GaCase::Nominal => objectives_case_c(&schedule, cfg),
            GaCase::Robust(b) => objectives_case_d(&schedule, cfg, *b),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GaParams {
    pub pop_size: usize,
    pub generations: usize,
    pub crossover_rate: f64,
    /// Per-gene mutation probability; `None` means one over the genome length.
    pub mutation_rate: Option<f64>,
    /// Gaussian mutation width as a fraction of the per-hour deviation cap.
    pub mutation_sigma: f64,
    /// BLX-alpha extension for setpoint crossover.
    pub blend_alpha: f64,
    /// Restrict setpoints to this many evenly spaced levels in
    /// `[T_des, T_des + dev_cap]`.
    pub setpoint_levels: Option<usize>,
    pub seed: u64,
}

impl Default for GaParams {
    fn default() -> Self {
        Self {
            pop_size: 100,
            generations: 300,
            crossover_rate: 0.9,
            mutation_rate: None,
            mutation_sigma: 0.1,
            blend_alpha: 0.5,
            setpoint_levels: None,
            seed: 42,
        }
    }
}

impl GaParams {
    pub fn validate(&self) -> Result<()> {
        if self.pop_size < 4 || !self.pop_size.is_multiple_of(2) {
            return Err(Error::validation(
                "ga.pop_size",
                format!("{} must be even and at least 4", self.pop_size),
            ));
        }
        if self.generations == 0 {
            return Err(Error::validation("ga.generations", "must be at least 1"));
        }
        let unit = |v: f64| (0.0..=1.0).contains(&v);
        if !unit(self.crossover_rate) {
            return Err(Error::validation(
                "ga.crossover_rate",
                format!("{} not in [0, 1]", self.crossover_rate),
            ));
        }
        if let Some(m) = self.mutation_rate {
            if !unit(m) {
                return Err(Error::validation("ga.mutation_rate", format!("{m} not in [0, 1]")));
            }
        }
        if !(self.mutation_sigma >= 0.0 && self.mutation_sigma.is_finite()) {
            return Err(Error::validation(
                "ga.mutation_sigma",
                "must be finite and non-negative",
            ));
        }
        if !(self.blend_alpha >= 0.0 && self.blend_alpha.is_finite()) {
            return Err(Error::validation("ga.blend_alpha", "must be finite and non-negative"));
        }
        if self.setpoint_levels.is_some_and(|l| l < 2) {
            return Err(Error::validation("ga.setpoint_levels", "need at least 2 levels"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Member {
    pub chromosome: Chromosome,
    pub objectives: ObjectiveVector,
    pub rank: usize,
    pub crowding: f64,
}

/// One archived non-dominated solution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrontMember {
    pub chromosome: Chromosome,
    pub objectives: ObjectiveVector,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenerationStats {
    pub generation: usize,
    pub best_o1: f64,
    pub best_o2: f64,
    pub best_o3: f64,
    pub hypervolume: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaResult {
    /// Archived front, sorted by objective vector.
    pub front: Vec<FrontMember>,
    pub history: Vec<GenerationStats>,
    pub reference_point: [f64; 3],
    pub evaluations: usize,
}

/// Unbounded set of mutually non-dominated, objective-distinct solutions.
#[derive(Debug, Clone, Default)]
pub struct Archive {
    members: Vec<FrontMember>,
}

impl Archive {
    /// Returns true when the candidate entered the archive.
    pub fn insert(&mut self, chromosome: &Chromosome, objectives: ObjectiveVector) -> bool {
        if self
            .members
            .iter()
            .any(|m| m.objectives == objectives || m.objectives.dominates(&objectives))
        {
            return false;
        }
        self.members.retain(|m| !objectives.dominates(&m.objectives));
        self.members.push(FrontMember {
            chromosome: chromosome.clone(),
            objectives,
        });
        true
    }

    pub fn members(&self) -> &[FrontMember] {
        &self.members
    }

    pub fn into_sorted(mut self) -> Vec<FrontMember> {
        self.members.sort_by(|a, b| {
            let (x, y) = (a.objectives.as_array(), b.objectives.as_array());
            x.iter()
                .zip(&y)
                .map(|(p, q)| p.total_cmp(q))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
                .then_with(|| a.chromosome.lex_cmp(&b.chromosome))
        });
        self.members
    }
}

/// Stepwise driver; [`evolve`] runs it to completion.
pub struct Nsga2<'a> {
    cfg: &'a CaseConfig,
    case: GaCase,
    params: GaParams,
    rng: ChaCha8Rng,
    population: Vec<Member>,
    archive: Archive,
    reference: [f64; 3],
    generation: usize,
    evaluations: usize,
    history: Vec<GenerationStats>,
}

impl<'a> Nsga2<'a> {
    pub fn new(cfg: &'a CaseConfig, case: GaCase, params: GaParams) -> Result<Self> {
        params.validate()?;
        cfg.validate()?;
        if let GaCase::Robust(b) = case {
            b.check(cfg.horizon)?;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
        let chroms: Vec<Chromosome> = (0..params.pop_size)
            .map(|_| random_chromosome(cfg, &params, &mut rng))
            .collect();
        let objs = evaluate_all(&chroms, cfg, &case)?;

        let mut reference = [f64::NEG_INFINITY; 3];
        let mut lo = [f64::INFINITY; 3];
        for o in &objs {
            for (m, v) in o.as_array().into_iter().enumerate() {
                reference[m] = reference[m].max(v);
                lo[m] = lo[m].min(v);
            }
        }
        for m in 0..3 {
            let span = reference[m] - lo[m];
            reference[m] += 0.1 * span.max(reference[m].abs() * 1e-3).max(1e-6);
        }

        let mut ga = Self {
            cfg,
            case,
            params,
            rng,
            population: Vec::new(),
            archive: Archive::default(),
            reference,
            generation: 0,
            evaluations: chroms.len(),
            history: Vec::new(),
        };
        for (c, o) in chroms.iter().zip(&objs) {
            ga.archive.insert(c, *o);
        }
        ga.population = rank_and_truncate(chroms, objs, ga.params.pop_size);
        ga.record();
        Ok(ga)
    }

    pub fn population(&self) -> &[Member] {
        &self.population
    }

    pub fn archive(&self) -> &Archive {
        &self.archive
    }

    pub fn generation(&self) -> usize {
        self.generation
    }

    pub fn history(&self) -> &[GenerationStats] {
        &self.history
    }

    /// Breeds one generation of offspring and keeps the best `pop_size` of
    /// parents plus offspring.
    pub fn step(&mut self) -> Result<()> {
        let n = self.params.pop_size;
        let genome = self.cfg.appliances.len() + self.cfg.horizon;
        let pm = self.params.mutation_rate.unwrap_or(1.0 / genome as f64);

        let mut offspring: Vec<Chromosome> = Vec::with_capacity(n);
        while offspring.len() < n {
            let a = self.tournament();
            let b = self.tournament();
            let (mut c1, mut c2) = (
                self.population[a].chromosome.clone(),
                self.population[b].chromosome.clone(),
            );
            if self.rng.random::<f64>() < self.params.crossover_rate {
                self.crossover(&mut c1, &mut c2);
            }
            self.mutate(&mut c1, pm);
            self.mutate(&mut c2, pm);
            offspring.push(c1);
            offspring.push(c2);
        }

        // Offspring identical to a parent or an earlier child add nothing.
        let mut fresh: Vec<Chromosome> = Vec::with_capacity(n);
        for c in offspring {
            if !self.population.iter().any(|m| m.chromosome == c) && !fresh.contains(&c) {
                fresh.push(c);
            }
        }
        let objs = evaluate_all(&fresh, self.cfg, &self.case)?;
        self.evaluations += fresh.len();
        for (c, o) in fresh.iter().zip(&objs) {
            self.archive.insert(c, *o);
        }

        let (mut chroms, mut all_objs): (Vec<_>, Vec<_>) = std::mem::take(&mut self.population)
            .into_iter()
            .map(|m| (m.chromosome, m.objectives))
            .unzip();
        chroms.extend(fresh);
        all_objs.extend(objs);
        self.population = rank_and_truncate(chroms, all_objs, n);
        self.generation += 1;
        self.record();
        Ok(())
    }

    pub fn finish(self) -> GaResult {
        GaResult {
            front: self.archive.into_sorted(),
            history: self.history,
            reference_point: self.reference,
            evaluations: self.evaluations,
        }
    }

    fn record(&mut self) {
        let pts: Vec<[f64; 3]> = self.archive.members().iter().map(|m| m.objectives.as_array()).collect();
        let best = |m: usize| pts.iter().map(|p| p[m]).fold(f64::INFINITY, f64::min);
        self.history.push(GenerationStats {
            generation: self.generation,
            best_o1: best(0),
            best_o2: best(1),
            best_o3: best(2),
            hypervolume: hypervolume_3d(&pts, self.reference),
        });
    }

    fn tournament(&mut self) -> usize {
        let n = self.population.len();
        let i = self.rng.random_range(0..n);
        let j = self.rng.random_range(0..n);
        let (a, b) = (&self.population[i], &self.population[j]);
        let a_wins =
            a.rank < b.rank || (a.rank == b.rank && (a.crowding > b.crowding || (a.crowding == b.crowding && i <= j)));
        if a_wins {
            i
        } else {
            j
        }
    }

    fn crossover(&mut self, c1: &mut Chromosome, c2: &mut Chromosome) {
        for s in 0..c1.starts.len() {
            if self.rng.random::<bool>() {
                std::mem::swap(&mut c1.starts[s], &mut c2.starts[s]);
            }
        }
        let (lo, hi) = (self.cfg.desired_temp, self.cfg.desired_temp + self.cfg.dev_cap);
        let alpha = self.params.blend_alpha;
        for h in 0..c1.setpoints.len() {
            let (a, b) = (c1.setpoints[h], c2.setpoints[h]);
            let (mn, mx) = (a.min(b), a.max(b));
            let d = mx - mn;
            let (from, to) = ((mn - alpha * d).max(lo), (mx + alpha * d).min(hi));
            for c in [&mut *c1, &mut *c2] {
                let u: f64 = self.rng.random();
                c.setpoints[h] = self.snap(from + u * (to - from));
            }
        }
    }

    fn mutate(&mut self, c: &mut Chromosome, pm: f64) {
        for (s, a) in self.cfg.appliances.iter().enumerate() {
            if self.rng.random::<f64>() < pm {
                c.starts[s] = self.rng.random_range(a.start_range());
            }
        }
        let (lo, hi) = (self.cfg.desired_temp, self.cfg.desired_temp + self.cfg.dev_cap);
        let sigma = self.params.mutation_sigma * self.cfg.dev_cap;
        for h in 0..c.setpoints.len() {
            if self.rng.random::<f64>() >= pm {
                continue;
            }
            c.setpoints[h] = match self.params.setpoint_levels {
                Some(k) => {
                    let levels = setpoint_levels(self.cfg, k);
                    *levels.choose(&mut self.rng).expect("at least two levels")
                }
                None => {
                    let z: f64 = Normal::new(0.0, 1.0).expect("unit normal").sample(&mut self.rng);
                    (c.setpoints[h] + sigma * z).clamp(lo, hi)
                }
            };
        }
    }

    fn snap(&self, t: f64) -> f64 {
        match self.params.setpoint_levels {
            Some(k) => {
                let levels = setpoint_levels(self.cfg, k);
                *levels
                    .iter()
                    .min_by(|a, b| (*a - t).abs().total_cmp(&(*b - t).abs()))
                    .expect("at least two levels")
            }
            None => t,
        }
    }
}

/// Evenly spaced setpoints from `T_des` to `T_des + dev_cap`.
pub fn setpoint_levels(cfg: &CaseConfig, count: usize) -> Vec<f64> {
    let step = cfg.dev_cap / (count - 1) as f64;
    (0..count)
        .map(|i| {
            if i + 1 == count {
                cfg.desired_temp + cfg.dev_cap
            } else {
                cfg.desired_temp + step * i as f64
            }
        })
        .collect()
}

fn random_chromosome(cfg: &CaseConfig, params: &GaParams, rng: &mut ChaCha8Rng) -> Chromosome {
    let starts = cfg
        .appliances
        .iter()
        .map(|a| rng.random_range(a.start_range()))
        .collect();
    let setpoints = match params.setpoint_levels {
        Some(k) => {
            let levels = setpoint_levels(cfg, k);
            (0..cfg.horizon)
                .map(|_| *levels.choose(rng).expect("at least two levels"))
                .collect()
        }
        None => (0..cfg.horizon)
            .map(|_| cfg.desired_temp + rng.random::<f64>() * cfg.dev_cap)
            .collect(),
    };
    Chromosome { starts, setpoints }
}

fn evaluate_all(chroms: &[Chromosome], cfg: &CaseConfig, case: &GaCase) -> Result<Vec<ObjectiveVector>> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        chroms.par_iter().map(|c| case.evaluate(c, cfg)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        chroms.iter().map(|c| case.evaluate(c, cfg)).collect()
    }
}

/// Ranks the pool and keeps the first `n` by (rank, crowding desc, index).
fn rank_and_truncate(chroms: Vec<Chromosome>, objs: Vec<ObjectiveVector>, n: usize) -> Vec<Member> {
    let ranks = non_dominated_sort(&objs);
    let max_rank = ranks.iter().copied().max().unwrap_or(0);
    let mut crowding = vec![0.0; objs.len()];
    for r in 1..=max_rank {
        let front: Vec<usize> = (0..objs.len()).filter(|&i| ranks[i] == r).collect();
        for (k, d) in crowding_distance(&objs, &front).into_iter().enumerate() {
            crowding[front[k]] = d;
        }
    }
    let mut order: Vec<usize> = (0..objs.len()).collect();
    order.sort_by(|&a, &b| {
        ranks[a]
            .cmp(&ranks[b])
            .then(crowding[b].total_cmp(&crowding[a]))
            .then(a.cmp(&b))
    });
    order.truncate(n);
    order.sort_unstable();
    let mut slots: Vec<Option<Chromosome>> = chroms.into_iter().map(Some).collect();
    order
        .into_iter()
        .map(|i| Member {
            chromosome: slots[i].take().expect("each index kept once"),
            objectives: objs[i],
            rank: ranks[i],
            crowding: crowding[i],
        })
        .collect()
}

pub fn evolve(cfg: &CaseConfig, case: GaCase, params: &GaParams) -> Result<GaResult> {
    let mut ga = Nsga2::new(cfg, case, params.clone())?;
    for _ in 0..params.generations {
        ga.step()?;
    }
    Ok(ga.finish())
}

/// Member minimising the sum of objectives normalised to `[0, 1]` over the
/// front; ties go to the lower cost, then the lexicographically smaller genes.
pub fn select_solution(front: &[FrontMember]) -> Result<&FrontMember> {
    if front.is_empty() {
        return Err(Error::EmptyFront);
    }
    let mut lo = [f64::INFINITY; 3];
    let mut hi = [f64::NEG_INFINITY; 3];
    for m in front {
        for (k, v) in m.objectives.as_array().into_iter().enumerate() {
            lo[k] = lo[k].min(v);
            hi[k] = hi[k].max(v);
        }
    }
    let score = |m: &FrontMember| -> f64 {
        m.objectives
            .as_array()
            .into_iter()
            .enumerate()
            .map(|(k, v)| {
                if hi[k] > lo[k] {
                    (v - lo[k]) / (hi[k] - lo[k])
                } else {
                    0.0
                }
            })
            .sum()
    };
    Ok(front
        .iter()
        .min_by(|a, b| {
            score(a)
                .total_cmp(&score(b))
                .then(a.objectives.o3.total_cmp(&b.objectives.o3))
                .then_with(|| a.chromosome.lex_cmp(&b.chromosome))
        })
        .expect("front is non-empty"))
}
