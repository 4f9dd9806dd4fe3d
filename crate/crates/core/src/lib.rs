//! Robust demand-response scheduling for a single smart home.
//!
//! * [`model`]: domain types, load decomposition and the ARX cooling model;
//! * [`robust`]: budgeted box uncertainty and its protection term;
//! * [`objectives`]: the four case formulations and constraint checks;
//! * [`moga`]: the multi-objective genetic search;
//! * [`forecast`]: occupancy regressors;
//! * [`scenario`]: case runs, budget sweeps and reports;
//! * [`io`]: configuration, CSV files and synthetic data.

pub mod error;
pub mod forecast;
pub mod io;
pub mod model;
pub mod moga;
pub mod objectives;
pub mod robust;
pub mod scenario;
pub mod series;

pub use error::{Error, Result};
