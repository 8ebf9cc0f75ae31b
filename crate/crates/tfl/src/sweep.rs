//! Config sweeps: run many configs in parallel, then aggregate.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use tfl_core::analysis::{coordination_score, correlation_table, pearson, CorrelationCell};
use tfl_core::budget::BudgetMode;
use tfl_core::env::{RewardKind, StateType};
use tfl_core::metrics::MetricLookup;
use tfl_core::sim::PolicyKind;

use crate::bench::bench_metrics;
use crate::config::{reward_label, state_label, ExperimentConfig};
use crate::error::{Error, Result};
use crate::experiment::run_labelled;
use crate::io::{
    write_records, write_results_csv, CaltPoint, CoordinationRecord, CorrelationRecord, FailureRecord, PearsonRecord,
};
use crate::report::{MetricReport, TimingRecord};

pub const AGENT_COUNTS: [usize; 5] = [2, 3, 5, 8, 10];

/// Rows of the rank-correlation table.
pub const CORRELATION_ROWS: [&str; 10] = [
    "awe_excl",
    "awe_reach",
    "wpe_excl",
    "wpe_reach",
    "rs_excl",
    "rs_reach",
    "rp_excl",
    "rp_rs_mxae",
    "rp_rs_mxax",
    "rp_reach",
];

/// Columns of the rank-correlation table.
pub const CORRELATION_COLS: [&str; 3] = ["calt", "ealt", "aalt"];

/// Columns of the raw-value Pearson table against the classic metrics.
pub const TRADITIONAL_COLS: [&str; 2] = ["efficiency", "reward_fairness"];

/// Metrics compared against the random baseline.
pub const COORDINATION_METRICS: [&str; 6] = ["rp_excl", "calt", "ealt", "aalt", "efficiency", "reward_fairness"];

pub const RESULTS_FILE: &str = "results.csv";
pub const CORRELATION_FILE: &str = "correlation.csv";
pub const PEARSON_FILE: &str = "pearson_traditional.csv";
pub const COORDINATION_FILE: &str = "coordination.csv";
pub const FAILURES_FILE: &str = "failures.csv";
pub const PLOT_TIMING_FILE: &str = "plot_timing_vs_n.csv";
pub const PLOT_CALT_FILE: &str = "plot_calt_vs_n.csv";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// Q-learning over every agent count, state type and reward scheme, plus one
    /// random baseline per agent count and reward scheme.
    Paper,
    /// `n ∈ {2, 3}`, Type-A, ILF, three seeds each for Q-learning and random play.
    Desk,
}

impl Preset {
    pub fn configs(self, seed: u64) -> Vec<ExperimentConfig> {
        match self {
            Preset::Paper => paper_configs(seed),
            Preset::Desk => desk_configs(seed),
        }
    }
}

pub fn paper_configs(seed: u64) -> Vec<ExperimentConfig> {
    let rewards = [RewardKind::Ilf, RewardKind::Iqf];
    let mut out = Vec::new();
    for n in AGENT_COUNTS {
        for st in [StateType::TypeA, StateType::TypeB] {
            for r in rewards {
                out.push(ExperimentConfig::new(n, st, r, PolicyKind::QLearning, seed));
            }
        }
    }
    for n in AGENT_COUNTS {
        for r in rewards {
            out.push(ExperimentConfig::new(n, StateType::TypeA, r, PolicyKind::Random, seed));
        }
    }
    out
}

pub fn desk_configs(seed: u64) -> Vec<ExperimentConfig> {
    let mut out = Vec::new();
    for n in [2, 3] {
        for policy in [PolicyKind::QLearning, PolicyKind::Random] {
            for s in 0..3 {
                out.push(ExperimentConfig::new(n, StateType::TypeA, RewardKind::Ilf, policy, seed + s));
            }
        }
    }
    out
}

#[derive(Debug, Clone)]
pub struct SweepOptions {
    pub out_dir: PathBuf,
    pub budget_mode: BudgetMode,
    pub write_logs: bool,
    /// Trials per point of the timing plot; 0 skips the timing study.
    pub bench_trials: usize,
    pub bench_seed: u64,
}

impl SweepOptions {
    pub fn new(out_dir: impl Into<PathBuf>) -> Self {
        Self {
            out_dir: out_dir.into(),
            budget_mode: BudgetMode::Published,
            write_logs: true,
            bench_trials: 3,
            bench_seed: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepSummary {
    pub reports: Vec<MetricReport>,
    pub failures: Vec<FailureRecord>,
    /// Every file written at the top level of the output directory.
    pub files: Vec<PathBuf>,
}

/// Runs every config (in parallel), writes per-run files under `runs/`, then the
/// aggregate CSVs. A failing config is recorded in `failures.csv` and skipped.
pub fn run_sweep(configs: &[ExperimentConfig], opts: &SweepOptions) -> Result<SweepSummary> {
    if configs.is_empty() {
        return Err(Error::Config("empty sweep".into()));
    }
    let runs_dir = opts.out_dir.join("runs");
    let labels: Vec<String> = configs.iter().enumerate().map(|(i, c)| format!("{i:03}_{}", c.label())).collect();
    let outcomes: Vec<Result<MetricReport>> = configs
        .par_iter()
        .zip(&labels)
        .map(|(c, label)| run_labelled(c, opts.budget_mode, &runs_dir, opts.write_logs, label).map(|out| out.report))
        .collect();

    let mut reports = Vec::new();
    let mut failures = Vec::new();
    for (label, outcome) in labels.into_iter().zip(outcomes) {
        match outcome {
            Ok(r) => reports.push(r),
            Err(e) => failures.push(FailureRecord { label, error: e.to_string() }),
        }
    }

    let dir = &opts.out_dir;
    let mut files = Vec::new();
    let mut emit = |name: &str, f: &dyn Fn(&Path) -> Result<()>| -> Result<()> {
        let p = dir.join(name);
        f(&p)?;
        files.push(p);
        Ok(())
    };

    let rows: Vec<_> = reports.iter().filter_map(MetricReport::to_row).collect();
    emit(RESULTS_FILE, &|p| write_results_csv(p, &rows))?;
    emit(FAILURES_FILE, &|p| write_records(p, &failures))?;
    emit(CORRELATION_FILE, &|p| write_records(p, &correlation_records(&reports)?))?;
    emit(PEARSON_FILE, &|p| write_records(p, &pearson_records(&reports)))?;
    emit(COORDINATION_FILE, &|p| write_records(p, &coordination_records(&reports, &COORDINATION_METRICS)))?;
    emit(PLOT_CALT_FILE, &|p| write_records(p, &calt_points(&reports)))?;
    if opts.bench_trials > 0 {
        let timing = timing_points(&reports, opts.bench_trials, opts.bench_seed)?;
        emit(PLOT_TIMING_FILE, &|p| write_records(p, &timing))?;
    }
    Ok(SweepSummary { reports, failures, files })
}

fn flatten<F: Fn(&str, &str, &CorrelationCell) -> T, T>(
    rows: &[&str],
    cols: &[&str],
    cells: &[Vec<CorrelationCell>],
    make: F,
) -> Vec<T> {
    rows.iter()
        .zip(cells)
        .flat_map(|(r, line)| cols.iter().zip(line).map(|(c, cell)| make(r, c, cell)).collect::<Vec<_>>())
        .collect()
}

/// Spearman cells of every RP sub-metric against the primary ALT metrics.
pub fn correlation_records<T: MetricLookup>(reports: &[T]) -> Result<Vec<CorrelationRecord>> {
    let cells = correlation_table(reports, &CORRELATION_ROWS, &CORRELATION_COLS)?;
    Ok(flatten(&CORRELATION_ROWS, &CORRELATION_COLS, &cells, CorrelationRecord::new))
}

/// Pearson on raw values of the RP and ALT metrics against efficiency and reward
/// fairness. Reports lacking a metric are left out of that pair.
pub fn pearson_records<T: MetricLookup>(reports: &[T]) -> Vec<PearsonRecord> {
    let rows: Vec<&str> = CORRELATION_ROWS.iter().chain(&CORRELATION_COLS).copied().collect();
    let cells: Vec<Vec<CorrelationCell>> = rows
        .iter()
        .map(|r| {
            TRADITIONAL_COLS
                .iter()
                .map(|c| {
                    let (xs, ys): (Vec<f64>, Vec<f64>) =
                        reports.iter().filter_map(|rep| Some((rep.metric(r)?, rep.metric(c)?))).unzip();
                    pearson(&xs, &ys)
                })
                .collect()
        })
        .collect();
    flatten(&rows, &TRADITIONAL_COLS, &cells, PearsonRecord::new)
}

/// Coordination score of every Q-learning report against the mean of the random
/// reports with the same `n` and reward scheme. Reports without a config, and QL runs
/// without a matching baseline, are skipped.
pub fn coordination_records(reports: &[MetricReport], metrics: &[&str]) -> Vec<CoordinationRecord> {
    let mut baselines: BTreeMap<(usize, &'static str), Vec<&MetricReport>> = BTreeMap::new();
    for r in reports {
        if let Some(c) = r.config.as_ref().filter(|c| c.policy == PolicyKind::Random) {
            baselines.entry((r.n, reward_label(c.reward))).or_default().push(r);
        }
    }
    let mut out = Vec::new();
    for r in reports {
        let Some(c) = r.config.as_ref().filter(|c| c.policy == PolicyKind::QLearning) else { continue };
        let Some(base) = baselines.get(&(r.n, reward_label(c.reward))) else { continue };
        for &m in metrics {
            let Some(value_ql) = r.metric(m) else { continue };
            let values: Vec<f64> = base.iter().filter_map(|b| b.metric(m)).collect();
            if values.is_empty() {
                continue;
            }
            let value_rand = values.iter().sum::<f64>() / values.len() as f64;
            out.push(CoordinationRecord {
                label: r.label.clone(),
                n: r.n,
                state_type: state_label(c.state_type).to_owned(),
                reward: reward_label(c.reward).to_owned(),
                seed: c.seed,
                metric: m.to_owned(),
                value_ql,
                value_rand,
                random_runs: values.len(),
                cs: coordination_score(value_ql, value_rand).ok(),
            });
        }
    }
    out
}

pub fn calt_points(reports: &[MetricReport]) -> Vec<CaltPoint> {
    reports
        .iter()
        .filter_map(|r| {
            let row = r.to_row()?;
            Some(CaltPoint {
                label: row.label,
                n: row.n,
                episodes: row.episodes,
                state_type: row.state_type,
                reward: row.reward,
                policy: row.policy,
                seed: row.seed,
                calt: r.metric("calt")?,
            })
        })
        .collect()
}

/// One timing study per agent count in the sweep, at the largest episode count run
/// for that `n`. Runs sequentially so each measurement has the machine to itself.
pub fn timing_points(reports: &[MetricReport], trials: usize, seed: u64) -> Result<Vec<TimingRecord>> {
    let mut sizes: BTreeMap<usize, usize> = BTreeMap::new();
    for r in reports {
        let e = sizes.entry(r.n).or_default();
        *e = (*e).max(r.episodes);
    }
    let mut out = Vec::new();
    for (n, episodes) in sizes {
        out.extend(bench_metrics(n, episodes, trials, seed)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use tfl_core::log::make_pa_log;
    use tfl_core::metrics::rp::RpWeights;
    use tfl_core::metrics::MetricSet;

    #[test]
    fn paper_preset_has_thirty_configs() {
        let c = paper_configs(0);
        assert_eq!(c.len(), 30);
        assert_eq!(c.iter().filter(|c| c.policy == PolicyKind::QLearning).count(), 20);
        assert_eq!(c.iter().filter(|c| c.policy == PolicyKind::Random).count(), 10);
        assert!(c.iter().all(|c| c.validate().is_ok()));
        assert_eq!(desk_configs(0).len(), 12);
    }

    fn pa_report(policy: PolicyKind) -> MetricReport {
        let log = make_pa_log(3, 10).unwrap();
        let set = MetricSet::compute(&log, 100.0, &RpWeights::default(), None).unwrap();
        let c = ExperimentConfig::new(3, StateType::TypeA, RewardKind::Ilf, policy, 0);
        MetricReport::new(c.label(), Some(c), BudgetMode::Published, 3, log.len(), &set, Vec::new())
    }

    #[test]
    fn pa_baseline_makes_coordination_degenerate() {
        let reports = [pa_report(PolicyKind::QLearning), pa_report(PolicyKind::Random)];
        let records = coordination_records(&reports, &COORDINATION_METRICS);
        assert_eq!(records.len(), COORDINATION_METRICS.len());
        assert!(records.iter().all(|r| r.cs.is_none() && r.value_ql == 1.0 && r.value_rand == 1.0));
    }

    #[test]
    fn constant_series_give_degenerate_cells() {
        let reports: Vec<_> = (0..4).map(|_| pa_report(PolicyKind::QLearning)).collect();
        let cells = correlation_records(&reports).unwrap();
        assert_eq!(cells.len(), CORRELATION_ROWS.len() * CORRELATION_COLS.len());
        assert!(cells.iter().all(|c| c.rho.is_none() && c.p_flag == "degenerate"));
    }
}
