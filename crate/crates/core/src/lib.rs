//! Temporal fairness measurement for repeated multi-agent resource competition.
//!
//! This crate simulates the multi-agent Battle of the Exes (MBoE): `n` agents race
//! toward one shared resource every episode, a lone arrival takes the full reward and
//! simultaneous arrivals split a reduced one. It then scores the resulting win history
//! with three metric families:
//!
//! - classic aggregates ([`metrics::classic`]): efficiency and reward fairness;
//! - the sliding-window ALT family ([`metrics::alt`]): six batch scores averaged over
//!   every width-`n` window of the episode sequence, `O(ν·n)` in its direct form;
//! - rotational periodicity ([`metrics::rp`]): per-agent inter-win gap regularity (RS)
//!   and waiting-period counts (WPE), computed in a single forward pass.
//!
//! Perfect alternation (every agent the sole winner exactly once per block of `n`
//! episodes, see [`log::make_pa_log`]) scores `1.0` under every temporal metric.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the experiment harness
//! and the command line live in the companion `tfl` crate.
//!
//! ```
//! use tfl_core::log::make_pa_log;
//! use tfl_core::metrics::alt::{alt_metric, AltVariant};
//!
//! let log = make_pa_log(3, 4).unwrap();
//! assert_eq!(alt_metric(&log, AltVariant::Calt).unwrap(), 1.0);
//! ```
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod agents;
pub mod analysis;
pub mod budget;
pub mod env;
mod error;
pub mod log;
pub mod metrics;
pub mod sim;

pub use error::{Error, Result};
