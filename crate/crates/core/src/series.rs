//! Fixed-length hourly series.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_HORIZON: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Unit {
    #[serde(rename = "kW")]
    Kilowatt,
    #[serde(rename = "persons")]
    Persons,
    #[serde(rename = "$/kWh")]
    DollarPerKwh,
    #[serde(rename = "degC")]
    Celsius,
}

impl Unit {
    fn non_negative(self) -> bool {
        matches!(self, Unit::Kilowatt | Unit::Persons)
    }
}

/// One value per hour of the scheduling horizon.
///
/// Construction checks that every value is finite and that load and
/// occupancy series carry no negative entries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HorizonSeries {
    values: Vec<f64>,
    unit: Unit,
}

impl HorizonSeries {
    pub fn new(values: Vec<f64>, unit: Unit) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::validation("series", "horizon must be at least one hour"));
        }
        for (h, &v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::validation(
                    format!("series[{h}]"),
                    format!("non-finite value {v}"),
                ));
            }
            if unit.non_negative() && v < 0.0 {
                return Err(Error::validation(
                    format!("series[{h}]"),
                    format!("{v} must be non-negative for {unit:?}"),
                ));
            }
        }
        Ok(Self { values, unit })
    }

    pub fn with_len(values: Vec<f64>, unit: Unit, horizon: usize) -> Result<Self> {
        if values.len() != horizon {
            return Err(Error::LengthMismatch {
                what: format!("{unit:?} series"),
                expected: horizon,
                got: values.len(),
            });
        }
        Self::new(values, unit)
    }

    pub fn constant(value: f64, unit: Unit, horizon: usize) -> Result<Self> {
        Self::new(vec![value; horizon], unit)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn unit(&self) -> Unit {
        self.unit
    }

    pub fn horizon(&self) -> usize {
        self.values.len()
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
}

impl std::ops::Index<usize> for HorizonSeries {
    type Output = f64;

    fn index(&self, h: usize) -> &f64 {
        &self.values[h]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_negative_load() {
        assert!(HorizonSeries::new(vec![1.0, -0.1], Unit::Kilowatt).is_err());
        assert!(HorizonSeries::new(vec![1.0, -0.1], Unit::Celsius).is_ok());
    }

    #[test]
    fn length_is_checked() {
        let err = HorizonSeries::with_len(vec![1.0; 11], Unit::Kilowatt, 12).unwrap_err();
        assert!(matches!(
            err,
            Error::LengthMismatch {
                expected: 12,
                got: 11,
                ..
            }
        ));
    }

    #[test]
    fn rejects_nan() {
        assert!(HorizonSeries::new(vec![f64::NAN], Unit::Celsius).is_err());
    }
}
