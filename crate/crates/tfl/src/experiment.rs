//! Single runs: simulate, measure, persist.

use std::path::{Path, PathBuf};
use std::time::Instant;

use tfl_core::budget::BudgetMode;
use tfl_core::log::EpisodeLog;
use tfl_core::metrics::alt::alt_family;
use tfl_core::metrics::rp::{rp_family, PriorityVector, RpWeights};
use tfl_core::metrics::{classic_pair, MetricSet};
use tfl_core::sim::simulate;

use crate::config::ExperimentConfig;
use crate::error::Result;
use crate::io::{write_json, write_log_csv};
use crate::report::{machine_note, MetricFamily, MetricReport, TimingRecord};

/// Overrides the default output root.
pub const RESULTS_DIR_ENV: &str = "TFL_RESULTS_DIR";
pub const DEFAULT_RESULTS_DIR: &str = "results";

/// An explicit path wins, then the environment override, then `./results`.
pub fn results_root(explicit: Option<&Path>) -> PathBuf {
    explicit
        .map(Path::to_path_buf)
        .or_else(|| std::env::var_os(RESULTS_DIR_ENV).filter(|v| !v.is_empty()).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_RESULTS_DIR))
}

/// Every metric of `log`, with each family timed on the current thread.
pub fn measure(
    log: &EpisodeLog,
    r_high: f64,
    weights: &RpWeights,
    priorities: Option<&PriorityVector>,
) -> Result<(MetricSet, Vec<TimingRecord>)> {
    let (n, episodes) = (log.n(), log.len());
    let note = machine_note();

    let t = Instant::now();
    let (efficiency, rf) = classic_pair(log, r_high)?;
    let classic = TimingRecord::new(MetricFamily::Classic, "single-pass", t.elapsed(), n, episodes, note.clone());

    let t = Instant::now();
    let alt = alt_family(log)?;
    let alt_time = TimingRecord::new(MetricFamily::Alt, "incremental", t.elapsed(), n, episodes, note.clone());

    let t = Instant::now();
    let rp = rp_family(log, weights, priorities)?;
    let rp_time = TimingRecord::new(MetricFamily::Rp, "single-pass", t.elapsed(), n, episodes, note);

    Ok((MetricSet::from_parts(n, efficiency, rf, alt, rp)?, vec![rp_time, alt_time, classic]))
}

/// Simulates `config` and measures the log. Pure given the config.
pub fn execute(config: &ExperimentConfig, mode: BudgetMode) -> Result<(EpisodeLog, MetricReport)> {
    let spec = config.simulation_spec(mode)?;
    let log = simulate(&spec)?.log;
    let priorities = config.priority_vector()?;
    let (set, timings) = measure(&log, config.r_high, &config.rp_weights, priorities.as_ref())?;
    let report = MetricReport::new(config.label(), Some(config.clone()), mode, log.n(), log.len(), &set, timings);
    Ok((log, report))
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub log: EpisodeLog,
    pub report: MetricReport,
    pub log_path: Option<PathBuf>,
    pub report_path: PathBuf,
}

/// [`execute`], then writes `<label>.report.json` (and `<label>.log.csv` when
/// `write_log` is set) under `dir`.
pub fn run_experiment(config: &ExperimentConfig, mode: BudgetMode, dir: &Path, write_log: bool) -> Result<RunOutput> {
    run_labelled(config, mode, dir, write_log, &config.label())
}

pub(crate) fn run_labelled(
    config: &ExperimentConfig,
    mode: BudgetMode,
    dir: &Path,
    write_log: bool,
    label: &str,
) -> Result<RunOutput> {
    let (log, mut report) = execute(config, mode)?;
    report.label = label.to_owned();
    let log_path = if write_log {
        let p = dir.join(format!("{label}.log.csv"));
        write_log_csv(&p, &log)?;
        Some(p)
    } else {
        None
    };
    let report_path = dir.join(format!("{label}.report.json"));
    write_json(&report_path, &report)?;
    Ok(RunOutput { log, report, log_path, report_path })
}
