//! CART regression tree grown best-first on squared error.

use rand::Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Node {
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
    Leaf {
        value: f64,
    },
}

/// Rule for the number of features examined at each split.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MaxFeatures {
    All,
    Sqrt,
    Log2,
    Count(usize),
}

impl MaxFeatures {
    pub fn resolve(self, n_features: usize) -> usize {
        let n = match self {
            MaxFeatures::All => n_features,
            MaxFeatures::Sqrt => (n_features as f64).sqrt().floor() as usize,
            MaxFeatures::Log2 => (n_features as f64).log2().floor() as usize,
            MaxFeatures::Count(c) => c,
        };
        n.clamp(1, n_features.max(1))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TreeParams {
    pub max_depth: Option<usize>,
    pub min_samples_leaf: usize,
    pub max_leaves: Option<usize>,
    pub max_features: MaxFeatures,
}

impl Default for TreeParams {
    fn default() -> Self {
        Self {
            max_depth: None,
            min_samples_leaf: 1,
            max_leaves: None,
            max_features: MaxFeatures::All,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionTree {
    nodes: Vec<Node>,
}

struct SplitCandidate {
    gain: f64,
    feature: usize,
    threshold: f64,
    left: Vec<usize>,
    right: Vec<usize>,
}

struct Pending {
    node: usize,
    depth: usize,
    split: SplitCandidate,
}

impl RegressionTree {
    /// Fits on `samples` (row indices into `x`; repeats allowed for bootstrap draws).
    pub fn fit<R: Rng>(x: &[&[f64]], y: &[f64], samples: &[usize], params: &TreeParams, rng: &mut R) -> Self {
        let n_features = x.first().map_or(0, |r| r.len());
        let k = params.max_features.resolve(n_features);
        let min_leaf = params.min_samples_leaf.max(1);
        let max_leaves = params.max_leaves.unwrap_or(usize::MAX).max(1);

        let mut nodes = vec![Node::Leaf {
            value: mean(y, samples),
        }];
        let mut pending: Vec<Pending> = Vec::new();
        let consider = |node: usize, depth: usize, idx: Vec<usize>, rng: &mut R, pending: &mut Vec<Pending>| {
            if params.max_depth.is_some_and(|d| depth >= d) || idx.len() < 2 * min_leaf {
                return;
            }
            let features = pick_features(n_features, k, rng);
            if let Some(split) = best_split(x, y, idx, &features, min_leaf) {
                pending.push(Pending { node, depth, split });
            }
        };
        consider(0, 0, samples.to_vec(), rng, &mut pending);

        let mut leaves = 1;
        while leaves < max_leaves && !pending.is_empty() {
            // largest gain first; earlier nodes win ties
            let best = (0..pending.len())
                .reduce(|a, b| {
                    let (pa, pb) = (&pending[a], &pending[b]);
                    if pb.split.gain > pa.split.gain || (pb.split.gain == pa.split.gain && pb.node < pa.node) {
                        b
                    } else {
                        a
                    }
                })
                .expect("pending is non-empty");
            let Pending { node, depth, split } = pending.swap_remove(best);
            let left = nodes.len();
            let right = left + 1;
            nodes.push(Node::Leaf {
                value: mean(y, &split.left),
            });
            nodes.push(Node::Leaf {
                value: mean(y, &split.right),
            });
            nodes[node] = Node::Split {
                feature: split.feature,
                threshold: split.threshold,
                left,
                right,
            };
            leaves += 1;
            consider(left, depth + 1, split.left, rng, &mut pending);
            consider(right, depth + 1, split.right, rng, &mut pending);
        }
        Self { nodes }
    }

    pub fn predict(&self, row: &[f64]) -> f64 {
        let mut i = 0;
        loop {
            match self.nodes[i] {
                Node::Leaf { value } => return value,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => i = if row[feature] <= threshold { left } else { right },
            }
        }
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn n_leaves(&self) -> usize {
        self.nodes.iter().filter(|n| matches!(n, Node::Leaf { .. })).count()
    }
}

fn mean(y: &[f64], idx: &[usize]) -> f64 {
    if idx.is_empty() {
        return 0.0;
    }
    idx.iter().map(|&i| y[i]).sum::<f64>() / idx.len() as f64
}

fn pick_features<R: Rng>(n: usize, k: usize, rng: &mut R) -> Vec<usize> {
    if k >= n {
        return (0..n).collect();
    }
    let mut f = rand::seq::index::sample(rng, n, k).into_vec();
    f.sort_unstable();
    f
}

fn best_split(x: &[&[f64]], y: &[f64], idx: Vec<usize>, features: &[usize], min_leaf: usize) -> Option<SplitCandidate> {
    let n = idx.len();
    let (lo, hi) = idx.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &i| {
        (lo.min(y[i]), hi.max(y[i]))
    });
    if hi - lo <= 0.0 {
        return None;
    }
    let total: f64 = idx.iter().map(|&i| y[i]).sum();
    let scale = idx.iter().map(|&i| y[i] * y[i]).sum::<f64>().max(f64::MIN_POSITIVE);

    let mut best: Option<(f64, usize, f64)> = None;
    let mut order = idx.clone();
    for &f in features {
        order.sort_by(|&a, &b| x[a][f].total_cmp(&x[b][f]).then(a.cmp(&b)));
        let mut left_sum = 0.0;
        for p in 1..n {
            left_sum += y[order[p - 1]];
            let (a, b) = (x[order[p - 1]][f], x[order[p]][f]);
            if p < min_leaf || n - p < min_leaf || a == b {
                continue;
            }
            let (nl, nr) = (p as f64, (n - p) as f64);
            let diff = left_sum / nl - (total - left_sum) / nr;
            let gain = nl * nr / n as f64 * diff * diff;
            if gain > 1e-14 * scale && best.is_none_or(|(g, _, _)| gain > g) {
                let mid = 0.5 * (a + b);
                let threshold = if mid < b { mid } else { a };
                best = Some((gain, f, threshold));
            }
        }
    }

    let (gain, feature, threshold) = best?;
    let (left, right) = idx.into_iter().partition(|&i| x[i][feature] <= threshold);
    Some(SplitCandidate {
        gain,
        feature,
        threshold,
        left,
        right,
    })
}
