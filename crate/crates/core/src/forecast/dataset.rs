use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Lagged-demand features with occupancy targets and a train/test partition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupervisedDataset {
    pub features: Vec<Vec<f64>>,
    pub targets: Vec<f64>,
    pub feature_names: Vec<String>,
    /// Row index of each sample in the source history.
    pub source_rows: Vec<usize>,
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

impl SupervisedDataset {
    pub fn new(features: Vec<Vec<f64>>, targets: Vec<f64>) -> Result<Self> {
        if features.len() != targets.len() {
            return Err(Error::LengthMismatch {
                what: "targets".into(),
                expected: features.len(),
                got: targets.len(),
            });
        }
        let width = features.first().map_or(0, Vec::len);
        if features.iter().any(|r| r.len() != width) {
            return Err(Error::validation("features", "rows have different widths"));
        }
        let n = features.len();
        Ok(Self {
            feature_names: (0..width).map(|j| format!("x{j}")).collect(),
            source_rows: (0..n).collect(),
            train: (0..n).collect(),
            test: Vec::new(),
            features,
            targets,
        })
    }

    pub fn len(&self) -> usize {
        self.targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }

    pub fn n_features(&self) -> usize {
        self.feature_names.len()
    }

    /// Chronological split: the last `test_fraction` of rows become the test set.
    pub fn split_chronological(mut self, test_fraction: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&test_fraction) {
            return Err(Error::validation(
                "test_fraction",
                format!("{test_fraction} not in [0, 1)"),
            ));
        }
        let n = self.len();
        let n_test = (n as f64 * test_fraction).round() as usize;
        self.train = (0..n - n_test).collect();
        self.test = (n - n_test..n).collect();
        Ok(self)
    }

    pub fn rows(&self, idx: &[usize]) -> Vec<&[f64]> {
        idx.iter().map(|&i| self.features[i].as_slice()).collect()
    }

    pub fn targets_at(&self, idx: &[usize]) -> Vec<f64> {
        idx.iter().map(|&i| self.targets[i]).collect()
    }

    /// Names of feature columns that are constant over all rows.
    pub fn zero_variance_columns(&self) -> Vec<String> {
        (0..self.n_features())
            .filter(|&j| {
                let mut it = self.features.iter().map(|r| r[j]);
                match it.next() {
                    Some(first) => it.all(|v| v == first),
                    None => true,
                }
            })
            .map(|j| self.feature_names[j].clone())
            .collect()
    }
}

/// Row `t` holds `[demand[t-1], ..., demand[t-lag_count], sin(hour), cos(hour)]`
/// with target `occupancy[t]`; the first `lag_count` hours have no row.
pub fn build_features(
    demand: &[f64],
    occupancy: &[f64],
    hour_of_day: &[u32],
    lag_count: usize,
) -> Result<SupervisedDataset> {
    let n = demand.len();
    for (what, len) in [("occupancy", occupancy.len()), ("hour_of_day", hour_of_day.len())] {
        if len != n {
            return Err(Error::LengthMismatch {
                what: what.into(),
                expected: n,
                got: len,
            });
        }
    }
    if lag_count == 0 {
        return Err(Error::validation("lag_count", "must be at least 1"));
    }
    if n <= lag_count {
        return Err(Error::InsufficientData(format!(
            "history of {n} hours cannot supply {lag_count} lags"
        )));
    }

    let mut features = Vec::with_capacity(n - lag_count);
    for t in lag_count..n {
        let mut row: Vec<f64> = (1..=lag_count).map(|k| demand[t - k]).collect();
        let angle = 2.0 * PI * f64::from(hour_of_day[t] % 24) / 24.0;
        row.push(angle.sin());
        row.push(angle.cos());
        features.push(row);
    }
    let mut names: Vec<String> = (1..=lag_count).map(|k| format!("demand(t-{k})")).collect();
    names.push("hour_sin".into());
    names.push("hour_cos".into());

    let mut data = SupervisedDataset::new(features, occupancy[lag_count..].to_vec())?;
    data.feature_names = names;
    data.source_rows = (lag_count..n).collect();
    Ok(data)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lag_rows() {
        let d = build_features(&[1.0, 2.0, 3.0, 4.0], &[0.0, 1.0, 2.0, 3.0], &[0, 1, 2, 3], 2).unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(&d.features[0][..2], &[2.0, 1.0]);
        assert_eq!(&d.features[1][..2], &[3.0, 2.0]);
        assert_eq!(d.targets, vec![2.0, 3.0]);
        assert_eq!(d.n_features(), 4);
    }

    #[test]
    fn too_short() {
        let err = build_features(&[1.0, 2.0], &[0.0, 0.0], &[0, 1], 2).unwrap_err();
        assert!(matches!(err, Error::InsufficientData(_)));
    }

    #[test]
    fn constant_history_flagged() {
        let d = build_features(&[5.0; 10], &[1.0; 10], &(0..10).collect::<Vec<_>>(), 3).unwrap();
        assert_eq!(
            d.zero_variance_columns(),
            vec!["demand(t-1)", "demand(t-2)", "demand(t-3)"]
        );
    }

    #[test]
    fn split_is_disjoint() {
        let d = build_features(&[1.0; 20], &[1.0; 20], &[0; 20], 2)
            .unwrap()
            .split_chronological(0.25)
            .unwrap();
        assert_eq!(d.train.len() + d.test.len(), 18);
        assert!(d.test.iter().all(|t| !d.train.contains(t)));
    }
}
