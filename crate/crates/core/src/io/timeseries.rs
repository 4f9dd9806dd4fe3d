//! Hourly time-series CSV files with a leading `timestamp` column.

use std::path::Path;

use chrono::{Duration, NaiveDateTime};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const TIMESTAMP_FORMAT: &str = "%Y-%m-%dT%H:%M:%S";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeriesTable {
    pub timestamps: Vec<NaiveDateTime>,
    pub columns: Vec<(String, Vec<f64>)>,
}

impl TimeSeriesTable {
    pub fn len(&self) -> usize {
        self.timestamps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.timestamps.is_empty()
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.columns.iter().find(|(n, _)| n == name).map(|(_, v)| v.as_slice())
    }
}

/// Missing hours between two consecutive rows.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gap {
    /// 1-based data row after which the gap starts.
    pub after_row: usize,
    pub after: NaiveDateTime,
    pub missing_hours: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoadedSeries {
    pub table: TimeSeriesTable,
    pub gaps: Vec<Gap>,
}

fn parse_timestamp(s: &str) -> Option<NaiveDateTime> {
    let s = s.trim();
    NaiveDateTime::parse_from_str(s, TIMESTAMP_FORMAT)
        .or_else(|_| NaiveDateTime::parse_from_str(s, "%Y-%m-%d %H:%M:%S"))
        .or_else(|_| NaiveDateTime::parse_from_str(s, "%Y-%m-%dT%H:%M"))
        .ok()
}

/// Reads `timestamp` plus the `expected` columns (any order, extra columns
/// ignored). Timestamps must rise in whole hours; skipped hours are reported
/// as gaps. Row numbers in errors count data rows from 1.
pub fn load_timeseries_csv(path: &Path, expected: &[&str]) -> Result<LoadedSeries> {
    if !path.exists() {
        return Err(Error::MissingFile(path.to_path_buf()));
    }
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| csv_error(path, 0, e))?;
    let headers = reader.headers().map_err(|e| csv_error(path, 0, e))?.clone();
    let find = |name: &str| headers.iter().position(|h| h == name);
    let ts_col = find("timestamp").ok_or_else(|| Error::Csv {
        path: path.to_path_buf(),
        row: 0,
        message: "header has no timestamp column".into(),
    })?;
    let mut cols = Vec::with_capacity(expected.len());
    for name in expected {
        cols.push(find(name).ok_or_else(|| Error::Csv {
            path: path.to_path_buf(),
            row: 0,
            message: format!("header is missing column {name:?}"),
        })?);
    }

    let mut timestamps: Vec<NaiveDateTime> = Vec::new();
    let mut values: Vec<Vec<f64>> = vec![Vec::new(); expected.len()];
    let mut gaps = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let row = i + 1;
        let record = record.map_err(|e| csv_error(path, row, e))?;
        let bad = |message: String| Error::Csv {
            path: path.to_path_buf(),
            row,
            message,
        };
        let raw_ts = record.get(ts_col).unwrap_or("");
        let ts = parse_timestamp(raw_ts).ok_or_else(|| bad(format!("unparseable timestamp {raw_ts:?}")))?;
        if let Some(&prev) = timestamps.last() {
            let step = ts - prev;
            if step <= Duration::zero() {
                return Err(bad(format!("timestamp {ts} does not increase (previous {prev})")));
            }
            if step.num_seconds() % 3600 != 0 {
                return Err(bad(format!("timestamp {ts} is not on the hourly grid")));
            }
            if step > Duration::hours(1) {
                gaps.push(Gap {
                    after_row: row - 1,
                    after: prev,
                    missing_hours: step.num_hours() - 1,
                });
            }
        }
        timestamps.push(ts);
        for (k, &c) in cols.iter().enumerate() {
            let raw = record.get(c).unwrap_or("");
            let v: f64 = raw
                .parse()
                .map_err(|_| bad(format!("column {:?}: {raw:?} is not a number", expected[k])))?;
            if !v.is_finite() {
                return Err(bad(format!("column {:?}: non-finite value", expected[k])));
            }
            values[k].push(v);
        }
    }
    Ok(LoadedSeries {
        table: TimeSeriesTable {
            timestamps,
            columns: expected.iter().map(|s| s.to_string()).zip(values).collect(),
        },
        gaps,
    })
}

pub fn write_timeseries_csv(table: &TimeSeriesTable, path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_error(path, 0, e))?;
    let mut header = vec!["timestamp".to_string()];
    header.extend(table.columns.iter().map(|(n, _)| n.clone()));
    w.write_record(&header).map_err(|e| csv_error(path, 0, e))?;
    for (i, ts) in table.timestamps.iter().enumerate() {
        let mut rec = vec![ts.format(TIMESTAMP_FORMAT).to_string()];
        rec.extend(table.columns.iter().map(|(_, v)| v[i].to_string()));
        w.write_record(&rec).map_err(|e| csv_error(path, i + 1, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn csv_error(path: &Path, row: usize, e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::Csv {
            path: path.to_path_buf(),
            row,
            message: format!("{other:?}"),
        },
    }
}
