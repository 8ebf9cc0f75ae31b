//! Experiment harness over `tfl-core`: JSON configs, CSV logs and result tables,
//! timed metric runs, parallel sweeps and the benchmark behind the timing plots.

pub mod bench;
pub mod config;
mod error;
pub mod experiment;
pub mod io;
pub mod report;
pub mod sweep;

pub use error::{Error, Result};
