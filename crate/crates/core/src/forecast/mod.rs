//! Occupancy forecasting from lagged household demand.
//!
//! Three regressors share one feature pipeline: a bagged random forest,
//! gradient-boosted trees and a small MLP. Features are min-max scaled with
//! training-set bounds; the MLP additionally scales its target into the
//! sigmoid range.

mod dataset;
mod forest;
mod gbm;
mod metrics;
mod mlp;
mod tree;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use dataset::{build_features, SupervisedDataset};
pub use forest::{ForestParams, RandomForest};
pub use gbm::{Gbm, GbmParams};
pub use metrics::{evaluate_metrics, select_best_model, MetricReport};
pub use mlp::{Mlp, MlpConfig};
pub use tree::{MaxFeatures, Node, RegressionTree, TreeParams};

use crate::error::{Error, Result};

/// Number of demand lags; with the two hour-of-day terms this gives 15 inputs.
pub const DEFAULT_LAG_COUNT: usize = 13;

/// Declaration order is the tie-break order used by [`select_best_model`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    RandomForest,
    Gbm,
    Mlp,
}

impl ModelKind {
    pub const ALL: [ModelKind; 3] = [ModelKind::RandomForest, ModelKind::Gbm, ModelKind::Mlp];

    pub fn short_name(self) -> &'static str {
        match self {
            ModelKind::RandomForest => "rf",
            ModelKind::Gbm => "gbm",
            ModelKind::Mlp => "mlp",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rf" | "random_forest" => Ok(ModelKind::RandomForest),
            "gbm" => Ok(ModelKind::Gbm),
            "mlp" => Ok(ModelKind::Mlp),
            other => Err(Error::validation("model", format!("unknown model kind {other:?}"))),
        }
    }
}

/// Affine map of `[lo, hi]` onto `[0, 1]`; a degenerate range maps to 0.5.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MinMax {
    pub lo: f64,
    pub hi: f64,
}

impl MinMax {
    pub fn fit(values: impl IntoIterator<Item = f64>) -> Self {
        let (lo, hi) = values
            .into_iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
        Self { lo, hi }
    }

    pub fn apply(&self, v: f64) -> f64 {
        if self.hi > self.lo {
            (v - self.lo) / (self.hi - self.lo)
        } else {
            0.5
        }
    }

    pub fn invert(&self, s: f64) -> f64 {
        if self.hi > self.lo {
            self.lo + s * (self.hi - self.lo)
        } else {
            self.lo
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Regressor {
    RandomForest(RandomForest),
    Gbm(Gbm),
    Mlp(Mlp),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForecastModel {
    pub regressor: Regressor,
    pub feature_scale: Vec<MinMax>,
    pub target_scale: Option<MinMax>,
}

impl ForecastModel {
    pub fn kind(&self) -> ModelKind {
        match self.regressor {
            Regressor::RandomForest(_) => ModelKind::RandomForest,
            Regressor::Gbm(_) => ModelKind::Gbm,
            Regressor::Mlp(_) => ModelKind::Mlp,
        }
    }

    pub fn predict(&self, row: &[f64]) -> f64 {
        let x: Vec<f64> = row.iter().zip(&self.feature_scale).map(|(v, s)| s.apply(*v)).collect();
        let raw = match &self.regressor {
            Regressor::RandomForest(f) => f.predict(&x),
            Regressor::Gbm(g) => g.predict(&x),
            Regressor::Mlp(m) => m.forward(&x),
        };
        self.target_scale.map_or(raw, |s| s.invert(raw))
    }

    pub fn predict_rows(&self, data: &SupervisedDataset, idx: &[usize]) -> Vec<f64> {
        idx.iter().map(|&i| self.predict(&data.features[i])).collect()
    }

    pub fn evaluate(&self, data: &SupervisedDataset, idx: &[usize]) -> Result<MetricReport> {
        evaluate_metrics(&self.predict_rows(data, idx), &data.targets_at(idx))
    }
}

struct Prepared {
    rows: Vec<Vec<f64>>,
    targets: Vec<f64>,
    scale: Vec<MinMax>,
}

impl Prepared {
    fn new(data: &SupervisedDataset) -> Result<Self> {
        if data.train.len() < 2 {
            return Err(Error::InsufficientData(format!(
                "{} training rows; at least 2 are needed",
                data.train.len()
            )));
        }
        let scale: Vec<MinMax> = (0..data.n_features())
            .map(|j| MinMax::fit(data.train.iter().map(|&i| data.features[i][j])))
            .collect();
        let rows = data
            .train
            .iter()
            .map(|&i| data.features[i].iter().zip(&scale).map(|(v, s)| s.apply(*v)).collect())
            .collect();
        Ok(Self {
            rows,
            targets: data.targets_at(&data.train),
            scale,
        })
    }

    fn x(&self) -> Vec<&[f64]> {
        self.rows.iter().map(Vec::as_slice).collect()
    }
}

pub fn fit_random_forest(data: &SupervisedDataset, params: &ForestParams, seed: u64) -> Result<ForecastModel> {
    if params.n_trees == 0 {
        return Err(Error::validation("n_trees", "a forest needs at least one tree"));
    }
    let p = Prepared::new(data)?;
    Ok(ForecastModel {
        regressor: Regressor::RandomForest(RandomForest::fit(&p.x(), &p.targets, params, seed)),
        feature_scale: p.scale,
        target_scale: None,
    })
}

pub fn fit_gbm(data: &SupervisedDataset, params: &GbmParams, seed: u64) -> Result<ForecastModel> {
    if !(params.learning_rate > 0.0 && params.learning_rate <= 1.0) {
        return Err(Error::Domain {
            what: "learning_rate",
            value: params.learning_rate,
        });
    }
    let p = Prepared::new(data)?;
    Ok(ForecastModel {
        regressor: Regressor::Gbm(Gbm::fit(&p.x(), &p.targets, params, seed)),
        feature_scale: p.scale,
        target_scale: None,
    })
}

pub fn fit_mlp(data: &SupervisedDataset, config: &MlpConfig, seed: u64) -> Result<ForecastModel> {
    let p = Prepared::new(data)?;
    let target_scale = MinMax::fit(p.targets.iter().copied());
    let y: Vec<f64> = p.targets.iter().map(|t| target_scale.apply(*t)).collect();
    Ok(ForecastModel {
        regressor: Regressor::Mlp(Mlp::train(&p.x(), &y, config, seed)?),
        feature_scale: p.scale,
        target_scale: Some(target_scale),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ForecastConfig {
    pub lag_count: usize,
    pub test_fraction: f64,
    pub forest: ForestParams,
    pub gbm: GbmParams,
    pub mlp: MlpConfig,
}

impl Default for ForecastConfig {
    fn default() -> Self {
        Self {
            lag_count: DEFAULT_LAG_COUNT,
            test_fraction: 0.2,
            forest: ForestParams::default(),
            gbm: GbmParams::default(),
            mlp: MlpConfig::default(),
        }
    }
}

impl ForecastConfig {
    pub fn fit(&self, kind: ModelKind, data: &SupervisedDataset, seed: u64) -> Result<ForecastModel> {
        match kind {
            ModelKind::RandomForest => fit_random_forest(data, &self.forest, seed),
            ModelKind::Gbm => fit_gbm(data, &self.gbm, seed),
            ModelKind::Mlp => fit_mlp(data, &self.mlp, seed),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelScore {
    pub kind: ModelKind,
    pub train: MetricReport,
    pub test: MetricReport,
    pub test_predictions: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForecastReport {
    pub scores: Vec<ModelScore>,
    pub best: ModelKind,
    pub zero_variance_columns: Vec<String>,
    /// Source-history row index of each test sample.
    pub test_rows: Vec<usize>,
    pub test_actual: Vec<f64>,
    pub max_training_occupancy: f64,
}

impl ForecastReport {
    pub fn best_score(&self) -> &ModelScore {
        self.scores
            .iter()
            .find(|s| s.kind == self.best)
            .expect("best is one of the scores")
    }
}

/// Fits each requested model on the training rows and scores it on the test rows.
pub fn compare_models(
    data: &SupervisedDataset,
    kinds: &[ModelKind],
    config: &ForecastConfig,
    seed: u64,
) -> Result<ForecastReport> {
    if data.test.is_empty() {
        return Err(Error::InsufficientData("empty test partition".into()));
    }
    let mut scores = Vec::with_capacity(kinds.len());
    for &kind in kinds {
        let model = config.fit(kind, data, seed)?;
        let test_predictions = model.predict_rows(data, &data.test);
        scores.push(ModelScore {
            kind,
            train: model.evaluate(data, &data.train)?,
            test: evaluate_metrics(&test_predictions, &data.targets_at(&data.test))?,
            test_predictions,
        });
    }
    let pairs: Vec<(ModelKind, MetricReport)> = scores.iter().map(|s| (s.kind, s.test)).collect();
    let best = select_best_model(&pairs).ok_or_else(|| Error::validation("model", "no models requested"))?;
    let max_training_occupancy = data.train.iter().map(|&i| data.targets[i]).fold(0.0, f64::max);
    Ok(ForecastReport {
        scores,
        best,
        zero_variance_columns: data.zero_variance_columns(),
        test_rows: data.test.iter().map(|&i| data.source_rows[i]).collect(),
        test_actual: data.targets_at(&data.test),
        max_training_occupancy,
    })
}

/// Scales a forecast into the optimizer's unit range by the largest training occupancy.
pub fn normalize_occupancy(forecast: &[f64], max_training_occupancy: f64) -> Result<Vec<f64>> {
    if !(max_training_occupancy > 0.0) {
        return Err(Error::Domain {
            what: "max training occupancy",
            value: max_training_occupancy,
        });
    }
    Ok(forecast.iter().map(|v| (v / max_training_occupancy).max(0.0)).collect())
}
