use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::tree::{MaxFeatures, RegressionTree, TreeParams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ForestParams {
    pub n_trees: usize,
    pub max_features: MaxFeatures,
    pub bootstrap: bool,
    pub max_depth: Option<usize>,
    pub min_samples_leaf: usize,
}

impl Default for ForestParams {
    fn default() -> Self {
        Self {
            n_trees: 400,
            max_features: MaxFeatures::All,
            bootstrap: true,
            max_depth: None,
            min_samples_leaf: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandomForest {
    pub(crate) trees: Vec<RegressionTree>,
}

impl RandomForest {
    /// Each tree gets its own generator seeded from a sequential draw, so the
    /// result does not depend on how trees are scheduled across workers.
    pub(crate) fn fit(x: &[&[f64]], y: &[f64], params: &ForestParams, seed: u64) -> Self {
        let mut master = ChaCha8Rng::seed_from_u64(seed);
        let seeds: Vec<u64> = (0..params.n_trees).map(|_| master.random()).collect();
        let tree_params = TreeParams {
            max_depth: params.max_depth,
            min_samples_leaf: params.min_samples_leaf,
            max_leaves: None,
            max_features: params.max_features,
        };
        let n = y.len();
        let grow = |s: &u64| {
            let mut rng = ChaCha8Rng::seed_from_u64(*s);
            let samples: Vec<usize> = if params.bootstrap {
                (0..n).map(|_| rng.random_range(0..n)).collect()
            } else {
                (0..n).collect()
            };
            RegressionTree::fit(x, y, &samples, &tree_params, &mut rng)
        };
        #[cfg(feature = "parallel")]
        let trees = {
            use rayon::prelude::*;
            seeds.par_iter().map(grow).collect()
        };
        #[cfg(not(feature = "parallel"))]
        let trees = seeds.iter().map(grow).collect();
        Self { trees }
    }

    pub fn predict(&self, row: &[f64]) -> f64 {
        self.trees.iter().map(|t| t.predict(row)).sum::<f64>() / self.trees.len() as f64
    }

    pub fn trees(&self) -> &[RegressionTree] {
        &self.trees
    }
}
