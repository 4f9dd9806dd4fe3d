use serde::{Deserialize, Serialize};

use super::ModelKind;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub mse: f64,
    pub rmse: f64,
    pub mae: f64,
}

pub fn evaluate_metrics(predicted: &[f64], actual: &[f64]) -> Result<MetricReport> {
    if predicted.len() != actual.len() {
        return Err(Error::LengthMismatch {
            what: "predicted".into(),
            expected: actual.len(),
            got: predicted.len(),
        });
    }
    if actual.is_empty() {
        return Err(Error::InsufficientData("no samples to score".into()));
    }
    let n = actual.len() as f64;
    let (sq, abs) = predicted.iter().zip(actual).fold((0.0, 0.0), |(sq, abs), (p, a)| {
        (sq + (p - a) * (p - a), abs + (p - a).abs())
    });
    let mse = sq / n;
    Ok(MetricReport {
        mse,
        rmse: mse.sqrt(),
        mae: abs / n,
    })
}

/// Lowest RMSE wins; ties fall to MAE, then MSE, then the fixed kind order.
pub fn select_best_model(reports: &[(ModelKind, MetricReport)]) -> Option<ModelKind> {
    reports
        .iter()
        .min_by(|(ka, a), (kb, b)| {
            a.rmse
                .total_cmp(&b.rmse)
                .then(a.mae.total_cmp(&b.mae))
                .then(a.mse.total_cmp(&b.mse))
                .then(ka.cmp(kb))
        })
        .map(|(k, _)| *k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_examples() {
        assert_eq!(
            evaluate_metrics(&[1.0, 2.0], &[1.0, 2.0]).unwrap(),
            MetricReport {
                mse: 0.0,
                rmse: 0.0,
                mae: 0.0
            }
        );
        assert_eq!(
            evaluate_metrics(&[0.0, 0.0], &[1.0, 1.0]).unwrap(),
            MetricReport {
                mse: 1.0,
                rmse: 1.0,
                mae: 1.0
            }
        );
        let r = evaluate_metrics(&[1.0, 4.0], &[2.0, 2.0]).unwrap();
        assert_eq!(r.mse, 2.5);
        assert_eq!(r.rmse, 2.5f64.sqrt());
        assert_eq!(r.mae, 1.5);
        assert!(evaluate_metrics(&[1.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn published_scores_pick_the_forest() {
        let r = |mse, rmse, mae| MetricReport { mse, rmse, mae };
        let reports = [
            (ModelKind::Mlp, r(0.97357, 0.98645, 0.66541)),
            (ModelKind::Gbm, r(0.93923, 0.96914, 0.62905)),
            (ModelKind::RandomForest, r(0.56307, 0.75038, 0.39525)),
        ];
        assert_eq!(select_best_model(&reports), Some(ModelKind::RandomForest));
    }

    #[test]
    fn ties_use_kind_order() {
        let r = MetricReport {
            mse: 1.0,
            rmse: 1.0,
            mae: 1.0,
        };
        assert_eq!(
            select_best_model(&[(ModelKind::Mlp, r), (ModelKind::Gbm, r)]),
            Some(ModelKind::Gbm)
        );
        assert_eq!(select_best_model(&[(ModelKind::Mlp, r)]), Some(ModelKind::Mlp));
        assert_eq!(select_best_model(&[]), None);
    }
}
