//! JSON run configuration. Every field is optional; omitted fields take the
//! bundled household's values, so `{}` is a complete configuration.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::timeseries::load_timeseries_csv;
use crate::error::{Error, Result};
use crate::forecast::ForecastConfig;
use crate::model::{ApplianceSpec, ArxModel};
use crate::moga::GaParams;
use crate::objectives::{Budgets, CaseConfig};
use crate::scenario::fixture::{fitted_arx, Household};

/// Either inline values or a column of an hourly CSV file (path relative to
/// the configuration file).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SeriesSource {
    Values(Vec<f64>),
    File { file: PathBuf, column: String },
}

impl SeriesSource {
    fn resolve(&mut self, base: &Path) -> Result<()> {
        if let SeriesSource::File { file, column } = self {
            let path = base.join(&*file);
            let loaded = load_timeseries_csv(&path, &[column.as_str()])?;
            let values = loaded
                .table
                .columns
                .into_iter()
                .next()
                .map(|(_, v)| v)
                .unwrap_or_default();
            *self = SeriesSource::Values(values);
        }
        Ok(())
    }

    fn values(&self, field: &str) -> Result<Vec<f64>> {
        match self {
            SeriesSource::Values(v) => Ok(v.clone()),
            SeriesSource::File { file, .. } => Err(Error::validation(
                field,
                format!("{} has not been loaded", file.display()),
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ArxSource {
    Model(ArxModel),
    /// JSON file holding a model, as written by `fit-arx`.
    File {
        file: PathBuf,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TariffConfig {
    pub rates: SeriesSource,
    pub penalty_reward: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct UncertaintyConfig {
    /// Box half-width as a fraction of nominal demand and occupancy.
    pub deviation_fraction: f64,
    /// Budgets for `sweep-budgets`; `None` means `0, 1, ..., H`.
    pub sweep: Option<Vec<f64>>,
    /// Budgets for single robust runs; `None` means `H` for both.
    pub budgets: Option<Budgets>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Seeds {
    pub forecast: u64,
    pub synthetic: u64,
}

impl Default for Seeds {
    fn default() -> Self {
        Self {
            forecast: 42,
            synthetic: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub horizon: usize,
    pub first_hour: u32,
    pub tariff: TariffConfig,
    pub appliances: Vec<ApplianceSpec>,
    pub non_shiftable: SeriesSource,
    pub misc: SeriesSource,
    pub outdoor_temp: SeriesSource,
    /// Normalised occupancy forecast.
    pub occupancy: SeriesSource,
    pub desired_demand: Option<SeriesSource>,
    pub desired_temp: f64,
    pub dev_cap: f64,
    pub total_dev_cap: f64,
    pub uncertainty: UncertaintyConfig,
    /// `None` uses the model fitted to the bundled cooling history.
    pub arx: Option<ArxSource>,
    pub ac_warmup: Vec<f64>,
    pub ga: GaParams,
    pub forecast: ForecastConfig,
    pub seeds: Seeds,
}

impl Default for RunConfig {
    fn default() -> Self {
        let h = Household::bundled();
        Self {
            horizon: h.horizon,
            first_hour: h.first_hour,
            tariff: TariffConfig {
                rates: SeriesSource::Values(h.rates),
                penalty_reward: h.penalty_reward,
            },
            appliances: h.appliances,
            non_shiftable: SeriesSource::Values(h.non_shiftable),
            misc: SeriesSource::Values(h.misc),
            outdoor_temp: SeriesSource::Values(h.outdoor_temp),
            occupancy: SeriesSource::Values(h.occupancy),
            desired_demand: None,
            desired_temp: h.desired_temp,
            dev_cap: h.dev_cap,
            total_dev_cap: h.total_dev_cap,
            uncertainty: UncertaintyConfig::default(),
            arx: None,
            ac_warmup: h.ac_warmup,
            ga: GaParams::default(),
            forecast: ForecastConfig::default(),
            seeds: Seeds::default(),
        }
    }
}

impl Default for TariffConfig {
    fn default() -> Self {
        RunConfig::default().tariff
    }
}

impl Default for UncertaintyConfig {
    fn default() -> Self {
        Self {
            deviation_fraction: crate::robust::DEFAULT_DEVIATION_FRACTION,
            sweep: None,
            budgets: None,
        }
    }
}

impl RunConfig {
    /// Parses JSON text; file references are resolved against `base`.
    pub fn from_json(text: &str, origin: &Path, base: &Path) -> Result<Self> {
        let mut cfg: RunConfig = serde_json::from_str(text).map_err(|e| Error::Parse {
            path: origin.to_path_buf(),
            line: e.line(),
            message: e.to_string(),
        })?;
        cfg.resolve_files(base)?;
        cfg.validate()?;
        Ok(cfg)
    }

    fn resolve_files(&mut self, base: &Path) -> Result<()> {
        let series = [
            &mut self.tariff.rates,
            &mut self.non_shiftable,
            &mut self.misc,
            &mut self.outdoor_temp,
            &mut self.occupancy,
        ];
        for s in series {
            s.resolve(base)?;
        }
        if let Some(d) = &mut self.desired_demand {
            d.resolve(base)?;
        }
        if let Some(ArxSource::File { file }) = &self.arx {
            let path = base.join(file);
            let text = fs::read_to_string(&path).map_err(|e| match e.kind() {
                std::io::ErrorKind::NotFound => Error::MissingFile(path.clone()),
                _ => Error::io(&path, e),
            })?;
            let model: ArxModel = serde_json::from_str(&text).map_err(|e| Error::Parse {
                path: path.clone(),
                line: e.line(),
                message: e.to_string(),
            })?;
            self.arx = Some(ArxSource::Model(model));
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.horizon == 0 {
            return Err(Error::validation("horizon", "must be at least 1"));
        }
        let f = self.uncertainty.deviation_fraction;
        if !(0.0..1.0).contains(&f) {
            return Err(Error::validation(
                "uncertainty.deviation_fraction",
                format!("{f} not in [0, 1)"),
            ));
        }
        self.ga.validate()?;
        for g in self.sweep_gammas() {
            Budgets::diagonal(g).check(self.horizon)?;
        }
        self.budgets().check(self.horizon)?;
        self.case_config().map(|_| ())
    }

    pub fn sweep_gammas(&self) -> Vec<f64> {
        self.uncertainty
            .sweep
            .clone()
            .unwrap_or_else(|| (0..=self.horizon).map(|g| g as f64).collect())
    }

    pub fn budgets(&self) -> Budgets {
        self.uncertainty
            .budgets
            .unwrap_or_else(|| Budgets::diagonal(self.horizon as f64))
    }

    pub fn arx_model(&self) -> Result<ArxModel> {
        match &self.arx {
            None => fitted_arx(),
            Some(ArxSource::Model(m)) => ArxModel::new(m.lags().to_vec(), m.alpha().to_vec(), m.beta().to_vec()),
            Some(ArxSource::File { file }) => Err(Error::validation(
                "arx",
                format!("{} has not been loaded", file.display()),
            )),
        }
    }

    pub fn household(&self) -> Result<Household> {
        Ok(Household {
            horizon: self.horizon,
            first_hour: self.first_hour,
            rates: self.tariff.rates.values("tariff.rates")?,
            penalty_reward: self.tariff.penalty_reward,
            appliances: self.appliances.clone(),
            non_shiftable: self.non_shiftable.values("non_shiftable")?,
            misc: self.misc.values("misc")?,
            outdoor_temp: self.outdoor_temp.values("outdoor_temp")?,
            occupancy: self.occupancy.values("occupancy")?,
            desired_demand: self
                .desired_demand
                .as_ref()
                .map(|d| d.values("desired_demand"))
                .transpose()?,
            desired_temp: self.desired_temp,
            deviation_fraction: self.uncertainty.deviation_fraction,
            dev_cap: self.dev_cap,
            total_dev_cap: self.total_dev_cap,
            arx: self.arx_model()?,
            ac_warmup: self.ac_warmup.clone(),
        })
    }

    pub fn case_config(&self) -> Result<CaseConfig> {
        self.household()?.build()
    }
}

pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = fs::read_to_string(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => Error::MissingFile(path.to_path_buf()),
        _ => Error::io(path, e),
    })?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    RunConfig::from_json(&text, path, base)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<RunConfig> {
        RunConfig::from_json(text, Path::new("cfg.json"), Path::new("."))
    }

    #[test]
    fn empty_document_is_the_bundled_household() {
        let cfg = parse("{}").unwrap();
        assert_eq!(cfg.horizon, 12);
        assert_eq!(cfg.uncertainty.deviation_fraction, 0.1);
        assert_eq!(cfg.sweep_gammas().len(), 13);
        assert_eq!(cfg.desired_temp, 23.33);
        assert_eq!(cfg.case_config().unwrap(), crate::scenario::fixture::bundled_case());
    }

    #[test]
    fn zero_horizon_names_the_field() {
        match parse(r#"{"horizon": 0}"#).unwrap_err() {
            Error::Validation { field, .. } => assert_eq!(field, "horizon"),
            e => panic!("{e}"),
        }
    }

    #[test]
    fn parse_errors_carry_lines() {
        match parse("{\n  \"horizon\": 12,\n  \"ga\": {\"pop_size\": }\n}").unwrap_err() {
            Error::Parse { line, .. } => assert_eq!(line, 3),
            e => panic!("{e}"),
        }
        assert!(matches!(parse(r#"{"horizn": 12}"#), Err(Error::Parse { .. })));
    }

    #[test]
    fn missing_series_file_is_named() {
        let err = parse(r#"{"tariff": {"rates": {"file": "no_such_tariff.csv", "column": "rate"}}}"#).unwrap_err();
        match err {
            Error::MissingFile(p) => assert!(p.ends_with("no_such_tariff.csv")),
            e => panic!("{e}"),
        }
    }

    #[test]
    fn series_from_csv() {
        let dir = tempfile::tempdir().unwrap();
        let mut body = String::from("timestamp,rate\n");
        for h in 0..12 {
            body.push_str(&format!("2023-07-03T{:02}:00:00,{}\n", h + 12, 0.1 + 0.01 * h as f64));
        }
        fs::write(dir.path().join("tariff.csv"), body).unwrap();
        let cfg_path = dir.path().join("run.json");
        fs::write(
            &cfg_path,
            r#"{"tariff": {"rates": {"file": "tariff.csv", "column": "rate"}}}"#,
        )
        .unwrap();
        let cfg = load_config(&cfg_path).unwrap();
        let case = cfg.case_config().unwrap();
        assert_eq!(case.tariff.rates()[3], 0.1 + 0.03);
    }

    #[test]
    fn out_of_range_values() {
        assert!(parse(r#"{"uncertainty": {"deviation_fraction": 1.0}}"#).is_err());
        assert!(parse(r#"{"uncertainty": {"sweep": [0, 13]}}"#).is_err());
        assert!(parse(r#"{"horizon": 4}"#).is_err());
    }
}
