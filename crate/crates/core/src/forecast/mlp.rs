//! Fully connected regressor: ReLU hidden layers, sigmoid output, Adam updates.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MlpConfig {
    pub hidden: Vec<usize>,
    /// L2 penalty on weights.
    pub alpha: f64,
    pub learning_rate: f64,
    /// `None` means `min(200, n_samples)`.
    pub batch_size: Option<usize>,
    /// Maximum number of epochs.
    pub max_iter: usize,
    pub shuffle: bool,
    /// Stop once the epoch loss fails to improve by `tol` for more than
    /// `n_iter_no_change` consecutive epochs; `None` always runs `max_iter`.
    pub tol: Option<f64>,
    pub n_iter_no_change: usize,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
}

impl Default for MlpConfig {
    fn default() -> Self {
        Self {
            hidden: vec![10, 5],
            alpha: 1e-4,
            learning_rate: 1e-3,
            batch_size: None,
            max_iter: 4000,
            shuffle: true,
            tol: Some(1e-4),
            n_iter_no_change: 10,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
        }
    }
}

/// Parameters are stored flat: for each layer the row-major weight matrix
/// (outputs x inputs) followed by the bias vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mlp {
    sizes: Vec<usize>,
    params: Vec<f64>,
    loss_curve: Vec<f64>,
}

impl Mlp {
    pub fn zeros(sizes: &[usize]) -> Self {
        let n = layout(sizes).last().map_or(0, |l| l.b + l.n_out);
        Self {
            sizes: sizes.to_vec(),
            params: vec![0.0; n],
            loss_curve: Vec::new(),
        }
    }

    /// Glorot-uniform initialisation.
    pub fn init<R: Rng>(sizes: &[usize], rng: &mut R) -> Self {
        let mut m = Self::zeros(sizes);
        let layers = layout(sizes);
        let last = layers.len() - 1;
        for (i, l) in layers.iter().enumerate() {
            let factor = if i == last { 2.0 } else { 6.0 };
            let bound = (factor / (l.n_in + l.n_out) as f64).sqrt();
            for p in &mut m.params[l.w..l.b + l.n_out] {
                *p = rng.random_range(-bound..bound);
            }
        }
        m
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn set_params(&mut self, params: &[f64]) -> Result<()> {
        if params.len() != self.params.len() {
            return Err(Error::LengthMismatch {
                what: "mlp parameters".into(),
                expected: self.params.len(),
                got: params.len(),
            });
        }
        self.params.copy_from_slice(params);
        Ok(())
    }

    pub fn set_output_bias(&mut self, value: f64) {
        let l = *layout(&self.sizes).last().expect("at least one layer");
        self.params[l.b] = value;
    }

    /// Per-epoch training objective (data loss plus L2 term).
    pub fn loss_curve(&self) -> &[f64] {
        &self.loss_curve
    }

    pub fn forward(&self, x: &[f64]) -> f64 {
        *self.activations(x).last().and_then(|a| a.first()).expect("one output")
    }

    fn activations(&self, x: &[f64]) -> Vec<Vec<f64>> {
        let layers = layout(&self.sizes);
        let last = layers.len() - 1;
        let mut acts = vec![x.to_vec()];
        for (i, l) in layers.iter().enumerate() {
            let input = &acts[i];
            let out: Vec<f64> = (0..l.n_out)
                .map(|o| {
                    let w = &self.params[l.w + o * l.n_in..l.w + (o + 1) * l.n_in];
                    let z = self.params[l.b + o] + w.iter().zip(input).map(|(a, b)| a * b).sum::<f64>();
                    if i == last {
                        sigmoid(z)
                    } else {
                        z.max(0.0)
                    }
                })
                .collect();
            acts.push(out);
        }
        acts
    }

    /// Squared data loss `0.5 * mean((f(x) - y)^2)`.
    pub fn data_loss(&self, x: &[&[f64]], y: &[f64]) -> f64 {
        let n = y.len() as f64;
        x.iter().zip(y).map(|(r, t)| (self.forward(r) - t).powi(2)).sum::<f64>() * 0.5 / n
    }

    /// Objective `0.5 * mean((f(x) - y)^2) + alpha / (2n) * |W|^2` and its gradient.
    pub fn loss_and_gradient(&self, x: &[&[f64]], y: &[f64], alpha: f64) -> (f64, Vec<f64>) {
        let layers = layout(&self.sizes);
        let n = y.len() as f64;
        let mut grad = vec![0.0; self.params.len()];
        let mut loss = 0.0;
        for (row, &target) in x.iter().zip(y) {
            let acts = self.activations(row);
            let out = acts[layers.len()][0];
            loss += 0.5 * (out - target).powi(2);
            let mut delta = vec![(out - target) * out * (1.0 - out) / n];
            for (i, l) in layers.iter().enumerate().rev() {
                let input = &acts[i];
                for (o, d) in delta.iter().enumerate() {
                    grad[l.b + o] += d;
                    for (j, a) in input.iter().enumerate() {
                        grad[l.w + o * l.n_in + j] += d * a;
                    }
                }
                if i > 0 {
                    delta = (0..l.n_in)
                        .map(|j| {
                            if input[j] <= 0.0 {
                                return 0.0;
                            }
                            (0..l.n_out).map(|o| self.params[l.w + o * l.n_in + j] * delta[o]).sum()
                        })
                        .collect();
                }
            }
        }
        let mut penalty = 0.0;
        for l in &layers {
            for k in l.w..l.b {
                penalty += self.params[k] * self.params[k];
                grad[k] += alpha * self.params[k] / n;
            }
        }
        (loss / n + 0.5 * alpha * penalty / n, grad)
    }

    pub(crate) fn train(x: &[&[f64]], y: &[f64], config: &MlpConfig, seed: u64) -> Result<Self> {
        let n_in = x.first().map_or(0, |r| r.len());
        let mut sizes = vec![n_in];
        sizes.extend(&config.hidden);
        sizes.push(1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut net = Self::init(&sizes, &mut rng);

        let n = y.len();
        let batch = config.batch_size.unwrap_or(200).clamp(1, n.max(1));
        let mut m = vec![0.0; net.params.len()];
        let mut v = vec![0.0; net.params.len()];
        let mut order: Vec<usize> = (0..n).collect();
        let mut step = 0i32;
        let mut best = f64::INFINITY;
        let mut stale = 0;

        for epoch in 0..config.max_iter {
            if config.shuffle {
                order.shuffle(&mut rng);
            }
            let mut epoch_loss = 0.0;
            for chunk in order.chunks(batch) {
                let bx: Vec<&[f64]> = chunk.iter().map(|&i| x[i]).collect();
                let by: Vec<f64> = chunk.iter().map(|&i| y[i]).collect();
                let (loss, grad) = net.loss_and_gradient(&bx, &by, config.alpha);
                epoch_loss += loss * chunk.len() as f64;
                step = step.saturating_add(1);
                let lr =
                    config.learning_rate * (1.0 - config.beta2.powi(step)).sqrt() / (1.0 - config.beta1.powi(step));
                for k in 0..grad.len() {
                    m[k] = config.beta1 * m[k] + (1.0 - config.beta1) * grad[k];
                    v[k] = config.beta2 * v[k] + (1.0 - config.beta2) * grad[k] * grad[k];
                    net.params[k] -= lr * m[k] / (v[k].sqrt() + config.epsilon);
                }
            }
            let epoch_loss = epoch_loss / n as f64;
            if !epoch_loss.is_finite() || net.params.iter().any(|p| !p.is_finite()) {
                return Err(Error::Divergence {
                    iteration: epoch + 1,
                    loss: epoch_loss,
                });
            }
            net.loss_curve.push(epoch_loss);
            if let Some(tol) = config.tol {
                if epoch_loss > best - tol {
                    stale += 1;
                } else {
                    stale = 0;
                }
                best = best.min(epoch_loss);
                if stale > config.n_iter_no_change {
                    break;
                }
            }
        }
        Ok(net)
    }
}

fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

#[derive(Debug, Clone, Copy)]
struct Layer {
    n_in: usize,
    n_out: usize,
    w: usize,
    b: usize,
}

fn layout(sizes: &[usize]) -> Vec<Layer> {
    let mut off = 0;
    sizes
        .windows(2)
        .map(|p| {
            let l = Layer {
                n_in: p[0],
                n_out: p[1],
                w: off,
                b: off + p[0] * p[1],
            };
            off = l.b + p[1];
            l
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_network_outputs_sigmoid_of_bias() {
        let mut m = Mlp::zeros(&[15, 10, 5, 1]);
        assert_eq!(m.params().len(), 15 * 10 + 10 + 10 * 5 + 5 + 5 + 1);
        m.set_output_bias(0.7);
        let y = m.forward(&[0.0; 15]);
        assert!((y - sigmoid(0.7)).abs() < 1e-15);
    }

    #[test]
    fn single_sample_is_fitted() {
        let row = [0.2, 0.9, 0.4];
        let config = MlpConfig {
            tol: None,
            ..MlpConfig::default()
        };
        let net = Mlp::train(&[&row[..]], &[0.8], &config, 42).unwrap();
        assert_eq!(net.loss_curve().len(), 4000);
        assert!(net.data_loss(&[&row[..]], &[0.8]) < 1e-4);
    }

    #[test]
    fn huge_step_diverges() {
        let rows: Vec<Vec<f64>> = (0..20).map(|i| vec![i as f64 * 1e150, 1.0]).collect();
        let x: Vec<&[f64]> = rows.iter().map(Vec::as_slice).collect();
        let y: Vec<f64> = (0..20).map(|i| (i % 2) as f64).collect();
        let config = MlpConfig {
            learning_rate: 1e200,
            max_iter: 50,
            ..MlpConfig::default()
        };
        let err = Mlp::train(&x, &y, &config, 1).unwrap_err();
        assert!(matches!(err, Error::Divergence { .. }));
    }
}
