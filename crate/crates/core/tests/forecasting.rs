//! Forecasting: gradient checks, ensemble invariances, the imbalance argument
//! for regression, and the end-to-end pipeline on synthetic history.

use hems_core::forecast::{
    build_features, compare_models, evaluate_metrics, fit_gbm, fit_mlp, fit_random_forest, ForecastConfig,
    ForestParams, GbmParams, MaxFeatures, Mlp, MlpConfig, ModelKind, SupervisedDataset,
};
use hems_core::io::synth::{generate_synthetic, Profile};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

const SIZES: [usize; 4] = [15, 10, 5, 1];

fn random_batch(rng: &mut ChaCha8Rng, n: usize) -> (Vec<Vec<f64>>, Vec<f64>) {
    let x = (0..n)
        .map(|_| (0..SIZES[0]).map(|_| rng.random_range(0.0..1.0)).collect())
        .collect();
    let y = (0..n).map(|_| rng.random_range(0.0..1.0)).collect();
    (x, y)
}

/// Largest componentwise relative error between the analytic gradient and
/// central differences with step 1e-5.
fn gradient_error(net: &Mlp, x: &[&[f64]], y: &[f64], alpha: f64) -> f64 {
    let (_, grad) = net.loss_and_gradient(x, y, alpha);
    let eps = 1e-5;
    let mut worst: f64 = 0.0;
    for i in 0..grad.len() {
        let mut p = net.params().to_vec();
        p[i] += eps;
        let mut plus = net.clone();
        plus.set_params(&p).unwrap();
        p[i] -= 2.0 * eps;
        let mut minus = net.clone();
        minus.set_params(&p).unwrap();
        let fd = (plus.loss_and_gradient(x, y, alpha).0 - minus.loss_and_gradient(x, y, alpha).0) / (2.0 * eps);
        let scale = grad[i].abs().max(fd.abs()).max(1e-7);
        worst = worst.max((grad[i] - fd).abs() / scale);
    }
    worst
}

#[test]
fn mlp_gradient_matches_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(51);
    for point in 0..10 {
        let net = Mlp::init(&SIZES, &mut rng);
        let (xs, y) = random_batch(&mut rng, 16);
        let x: Vec<&[f64]> = xs.iter().map(Vec::as_slice).collect();
        let alpha = if point % 2 == 0 { 0.0 } else { 1e-3 };
        let err = gradient_error(&net, &x, &y, alpha);
        assert!(err < 1e-4, "point {point}: relative error {err}");
    }
}

#[test]
fn mlp_regularised_loss_adds_weight_penalty() {
    let mut rng = ChaCha8Rng::seed_from_u64(52);
    let net = Mlp::init(&SIZES, &mut rng);
    let (xs, y) = random_batch(&mut rng, 8);
    let x: Vec<&[f64]> = xs.iter().map(Vec::as_slice).collect();
    let (plain, _) = net.loss_and_gradient(&x, &y, 0.0);
    let (reg, _) = net.loss_and_gradient(&x, &y, 0.5);
    assert!((plain - net.data_loss(&x, &y)).abs() < 1e-15);
    assert!(reg > plain);
}

fn noisy_dataset(rng: &mut ChaCha8Rng, n: usize) -> SupervisedDataset {
    let noise = Normal::new(0.0, 0.3).unwrap();
    let mut feats = Vec::with_capacity(n);
    let mut targets = Vec::with_capacity(n);
    for _ in 0..n {
        let row: Vec<f64> = (0..4).map(|_| rng.random_range(-2.0..2.0)).collect();
        targets.push(row[0].sin() + 0.5 * row[1] * row[1] + noise.sample(rng));
        feats.push(row);
    }
    SupervisedDataset::new(feats, targets)
        .unwrap()
        .split_chronological(0.3)
        .unwrap()
}

/// Applies a strictly increasing map to every feature value.
fn transformed(data: &SupervisedDataset) -> SupervisedDataset {
    let mut out = data.clone();
    for row in out.features.iter_mut() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = match j % 3 {
                0 => v.exp(),
                1 => v.powi(3) + 2.0 * *v,
                _ => 10.0 - 1.0 / (3.0 + *v),
            };
        }
    }
    out
}

#[test]
fn tree_ensembles_ignore_monotone_feature_transforms() {
    let mut rng = ChaCha8Rng::seed_from_u64(53);
    for trial in 0..5 {
        let data = noisy_dataset(&mut rng, 120);
        let moved = transformed(&data);
        // Every tree must see every training row: midpoint thresholds are
        // not invariant for out-of-bag rows.
        let forest = ForestParams {
            n_trees: 20,
            bootstrap: false,
            max_features: MaxFeatures::Sqrt,
            ..ForestParams::default()
        };
        let gbm = GbmParams {
            n_trees: 30,
            min_samples_leaf: 3,
            ..GbmParams::default()
        };
        let pairs = [
            (
                fit_random_forest(&data, &forest, trial).unwrap(),
                fit_random_forest(&moved, &forest, trial).unwrap(),
            ),
            (
                fit_gbm(&data, &gbm, trial).unwrap(),
                fit_gbm(&moved, &gbm, trial).unwrap(),
            ),
        ];
        for (a, b) in &pairs {
            assert_eq!(
                a.predict_rows(&data, &data.train),
                b.predict_rows(&moved, &moved.train),
                "{:?}",
                a.kind()
            );
        }
    }
}

#[test]
fn fitters_are_reproducible() {
    let mut rng = ChaCha8Rng::seed_from_u64(54);
    let data = noisy_dataset(&mut rng, 80);
    let cfg = ForecastConfig {
        forest: ForestParams {
            n_trees: 10,
            ..ForestParams::default()
        },
        gbm: GbmParams {
            n_trees: 10,
            ..GbmParams::default()
        },
        mlp: MlpConfig {
            hidden: vec![6],
            max_iter: 50,
            ..MlpConfig::default()
        },
        ..ForecastConfig::default()
    };
    for kind in ModelKind::ALL {
        let a = cfg.fit(kind, &data, 3).unwrap();
        let b = cfg.fit(kind, &data, 3).unwrap();
        assert_eq!(a, b, "{kind}");
    }
}

/// Binary precision and recall of the positive class; no positive
/// predictions counts as zero precision.
fn precision_recall(pred: &[bool], actual: &[bool]) -> (f64, f64) {
    let tp = pred.iter().zip(actual).filter(|(p, a)| **p && **a).count() as f64;
    let pp = pred.iter().filter(|p| **p).count() as f64;
    let ap = actual.iter().filter(|a| **a).count() as f64;
    (
        if pp > 0.0 { tp / pp } else { 0.0 },
        if ap > 0.0 { tp / ap } else { 0.0 },
    )
}

/// With rare high-occupancy hours, a thresholded sigmoid classifier learns
/// the base rate and never predicts the minority class.
#[test]
fn imbalanced_classifier_misses_the_minority_class() {
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    let n = 1000;
    let feats: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..4).map(|_| rng.random_range(0.0..1.0)).collect())
        .collect();
    // About 3% positives, only weakly tied to the features.
    let labels: Vec<bool> = feats
        .iter()
        .map(|r| rng.random_range(0.0..1.0) < 0.02 + 0.02 * r[0])
        .collect();
    let targets: Vec<f64> = labels.iter().map(|&l| f64::from(u8::from(l))).collect();
    assert!(labels.iter().any(|l| *l));
    let data = SupervisedDataset::new(feats, targets)
        .unwrap()
        .split_chronological(0.3)
        .unwrap();
    let cfg = MlpConfig {
        max_iter: 300,
        ..MlpConfig::default()
    };
    let model = fit_mlp(&data, &cfg, 1).unwrap();
    let pred: Vec<bool> = model
        .predict_rows(&data, &data.test)
        .iter()
        .map(|p| *p >= 0.5)
        .collect();
    let actual: Vec<bool> = data.targets_at(&data.test).iter().map(|t| *t >= 0.5).collect();
    assert!(actual.iter().any(|a| *a), "test split needs minority samples");
    let (precision, recall) = precision_recall(&pred, &actual);
    assert_eq!((precision, recall), (0.0, 0.0));
    let accuracy = pred.iter().zip(&actual).filter(|(p, a)| p == a).count() as f64 / pred.len() as f64;
    assert!(
        accuracy > 0.9,
        "accuracy {accuracy} looks good while the minority class is lost"
    );
}

#[test]
fn synthetic_history_end_to_end() {
    let data = generate_synthetic(3, Profile::SummerWeekday, 21);
    let ds = build_features(&data.demand_kw, &data.occupancy, &data.hour_of_day(), 13)
        .unwrap()
        .split_chronological(0.2)
        .unwrap();
    assert_eq!(ds.n_features(), 15);
    let cfg = ForecastConfig {
        forest: ForestParams {
            n_trees: 40,
            ..ForestParams::default()
        },
        gbm: GbmParams {
            n_trees: 60,
            ..GbmParams::default()
        },
        mlp: MlpConfig {
            max_iter: 300,
            ..MlpConfig::default()
        },
        ..ForecastConfig::default()
    };
    let report = compare_models(&ds, &ModelKind::ALL, &cfg, 11).unwrap();
    assert_eq!(report.scores.len(), 3);
    assert_eq!(report.test_rows.len(), ds.test.len());
    // Occupancy follows demand, so every model beats the mean predictor.
    let mean = ds.targets_at(&ds.train).iter().sum::<f64>() / ds.train.len() as f64;
    let baseline = evaluate_metrics(&vec![mean; ds.test.len()], &report.test_actual).unwrap();
    for s in &report.scores {
        assert!(
            s.test.rmse < baseline.rmse,
            "{}: {} vs {}",
            s.kind,
            s.test.rmse,
            baseline.rmse
        );
        assert!(s.test_predictions.iter().all(|p| p.is_finite()));
    }
    assert!(report.max_training_occupancy > 0.0);
}

proptest! {
    #[test]
    fn metric_identities(pairs in prop::collection::vec((-50.0f64..50.0, -50.0f64..50.0), 1..40)) {
        let (p, a): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
        let m = evaluate_metrics(&p, &a).unwrap();
        prop_assert!(m.mse >= 0.0 && m.rmse >= 0.0 && m.mae >= 0.0);
        prop_assert!((m.rmse * m.rmse - m.mse).abs() <= 1e-12 * m.mse.max(1.0));
        prop_assert!(m.mae <= m.rmse + 1e-12);
    }
}
