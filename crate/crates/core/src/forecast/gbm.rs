use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::tree::{MaxFeatures, RegressionTree, TreeParams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GbmParams {
    pub n_trees: usize,
    pub learning_rate: f64,
    /// `None` grows each stage until no split improves the residual fit.
    pub num_leaves: Option<usize>,
    pub max_depth: Option<usize>,
    pub min_samples_leaf: usize,
}

impl Default for GbmParams {
    fn default() -> Self {
        Self {
            n_trees: 400,
            learning_rate: 0.1,
            num_leaves: Some(31),
            max_depth: None,
            min_samples_leaf: 20,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Gbm {
    pub(crate) base: f64,
    pub(crate) learning_rate: f64,
    pub(crate) trees: Vec<RegressionTree>,
    /// Training MSE before the first stage and after each stage.
    pub(crate) stage_loss: Vec<f64>,
}

impl Gbm {
    pub(crate) fn fit(x: &[&[f64]], y: &[f64], params: &GbmParams, seed: u64) -> Self {
        let n = y.len();
        let base = y.iter().sum::<f64>() / n as f64;
        let mut fitted = vec![base; n];
        let mse = |f: &[f64]| f.iter().zip(y).map(|(a, b)| (a - b).powi(2)).sum::<f64>() / n as f64;
        let mut stage_loss = vec![mse(&fitted)];
        let tree_params = TreeParams {
            max_depth: params.max_depth,
            min_samples_leaf: params.min_samples_leaf,
            max_leaves: params.num_leaves,
            max_features: MaxFeatures::All,
        };
        let samples: Vec<usize> = (0..n).collect();
        let mut master = ChaCha8Rng::seed_from_u64(seed);
        let mut trees = Vec::with_capacity(params.n_trees);
        for _ in 0..params.n_trees {
            let residual: Vec<f64> = y.iter().zip(&fitted).map(|(a, b)| a - b).collect();
            let mut rng = ChaCha8Rng::seed_from_u64(master.random());
            let tree = RegressionTree::fit(x, &residual, &samples, &tree_params, &mut rng);
            for (f, row) in fitted.iter_mut().zip(x) {
                *f += params.learning_rate * tree.predict(row);
            }
            stage_loss.push(mse(&fitted));
            trees.push(tree);
        }
        Self {
            base,
            learning_rate: params.learning_rate,
            trees,
            stage_loss,
        }
    }

    pub fn predict(&self, row: &[f64]) -> f64 {
        self.base + self.learning_rate * self.trees.iter().map(|t| t.predict(row)).sum::<f64>()
    }

    pub fn stage_loss(&self) -> &[f64] {
        &self.stage_loss
    }

    pub fn trees(&self) -> &[RegressionTree] {
        &self.trees
    }
}
