//! Configuration loading, hourly CSV ingestion and synthetic data.

pub mod config;
pub mod synth;
pub mod timeseries;

pub use config::{load_config, RunConfig};
pub use synth::{generate_synthetic, write_synthetic, Profile, SyntheticData};
pub use timeseries::{load_timeseries_csv, write_timeseries_csv, Gap, LoadedSeries, TimeSeriesTable};
