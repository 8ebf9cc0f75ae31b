//! Per-run reports and timing records.

use std::collections::BTreeMap;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use tfl_core::budget::BudgetMode;
use tfl_core::metrics::{MetricLookup, MetricSet};

use crate::config::{policy_label, reward_label, state_label, ExperimentConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MetricFamily {
    #[serde(rename = "RP")]
    Rp,
    #[serde(rename = "ALT")]
    Alt,
    #[serde(rename = "classic")]
    Classic,
}

/// Floor applied to measured durations so a record never reports zero time.
pub const MIN_WALL_SECONDS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimingRecord {
    pub family: MetricFamily,
    /// Which implementation was timed, e.g. `windowed` or `incremental` for ALT.
    pub kernel: String,
    pub wall_seconds: f64,
    pub n: usize,
    pub episodes: usize,
    pub note: String,
}

impl TimingRecord {
    pub fn new(family: MetricFamily, kernel: &str, elapsed: Duration, n: usize, episodes: usize, note: String) -> Self {
        Self {
            family,
            kernel: kernel.to_owned(),
            wall_seconds: elapsed.as_secs_f64().max(MIN_WALL_SECONDS),
            n,
            episodes,
            note,
        }
    }
}

/// Architecture and OS, attached to timing records.
pub fn machine_note() -> String {
    format!("{}-{}, single thread", std::env::consts::ARCH, std::env::consts::OS)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub label: String,
    /// Absent when metrics were recomputed from a bare log.
    pub config: Option<ExperimentConfig>,
    pub budget_mode: BudgetMode,
    pub n: usize,
    pub episodes: usize,
    pub metrics: BTreeMap<String, f64>,
    pub reward_fairness_degenerate: bool,
    pub timings: Vec<TimingRecord>,
}

impl MetricReport {
    pub fn new(
        label: String,
        config: Option<ExperimentConfig>,
        budget_mode: BudgetMode,
        n: usize,
        episodes: usize,
        set: &MetricSet,
        timings: Vec<TimingRecord>,
    ) -> Self {
        Self {
            label,
            config,
            budget_mode,
            n,
            episodes,
            metrics: set.entries().into_iter().map(|(k, v)| (k.to_owned(), v)).collect(),
            reward_fairness_degenerate: set.reward_fairness_degenerate,
            timings,
        }
    }

    /// The results-table row; `None` without a config, since rows need provenance.
    pub fn to_row(&self) -> Option<ResultRow> {
        let c = self.config.as_ref()?;
        Some(ResultRow {
            label: self.label.clone(),
            n: self.n,
            episodes: self.episodes,
            state_type: state_label(c.state_type).to_owned(),
            reward: reward_label(c.reward).to_owned(),
            policy: policy_label(c.policy).to_owned(),
            seed: c.seed,
            metrics: self.metrics.clone(),
        })
    }
}

impl MetricLookup for MetricReport {
    fn metric(&self, key: &str) -> Option<f64> {
        self.metrics.get(key).copied()
    }
}

/// One line of the results CSV: provenance plus metric values.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub label: String,
    pub n: usize,
    pub episodes: usize,
    pub state_type: String,
    pub reward: String,
    pub policy: String,
    pub seed: u64,
    pub metrics: BTreeMap<String, f64>,
}

impl MetricLookup for ResultRow {
    fn metric(&self, key: &str) -> Option<f64> {
        self.metrics.get(key).copied()
    }
}
