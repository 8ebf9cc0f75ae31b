use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use tfl::bench::{alt_rp_ratio, bench_metrics};
use tfl::config::{load_configs, ExperimentConfig};
use tfl::experiment::{measure, results_root, run_experiment};
use tfl::io::{read_log_csv, read_results_csv, write_json, write_records};
use tfl::report::MetricReport;
use tfl::sweep::{correlation_records, pearson_records, run_sweep, Preset, SweepOptions, PEARSON_FILE};
use tfl_core::budget::{episode_budget, BudgetMode, DEFAULT_BUDGET_BASE};
use tfl_core::log::DEFAULT_R_HIGH;
use tfl_core::metrics::rp::{PriorityVector, RpWeights};

#[derive(Parser)]
#[command(name = "tfl", version, about = "Temporal fairness experiments for repeated resource races")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum PresetArg {
    Paper,
    Desk,
}

#[derive(Subcommand)]
enum Command {
    /// Run one config and write its log and report.
    Simulate {
        /// JSON file holding one ExperimentConfig.
        #[arg(long)]
        config: PathBuf,
        /// Output directory (default: $TFL_RESULTS_DIR or ./results).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Use the raw scaling formula for n = 2 and 3.
        #[arg(long)]
        formula_only: bool,
        #[arg(long)]
        no_log: bool,
    },
    /// Recompute every metric from a stored log CSV.
    Metrics {
        log: PathBuf,
        /// Attach this config and take weights, priorities and r_high from it.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_R_HIGH)]
        r_high: f64,
        #[arg(long, default_value_t = 1.0)]
        alpha_rs: f64,
        #[arg(long, default_value_t = 1.0)]
        beta_wpe: f64,
        /// Comma-separated target shares, one per agent.
        #[arg(long, value_delimiter = ',')]
        priorities: Option<Vec<f64>>,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Time the RP and ALT families on random-play logs.
    Bench {
        #[arg(long, value_delimiter = ',', default_values_t = [2usize, 3, 5, 8, 10])]
        n: Vec<usize>,
        /// Episodes per log (default: the episode budget for each n).
        #[arg(long)]
        episodes: Option<usize>,
        #[arg(long, default_value_t = 3)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        formula_only: bool,
        /// CSV of timing records.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a list of configs and write the aggregate tables.
    Sweep {
        /// JSON file with a config or a list of configs.
        #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
        config: Option<PathBuf>,
        #[arg(long, value_enum)]
        preset: Option<PresetArg>,
        /// Seed of the preset configs.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        formula_only: bool,
        /// Skip writing per-run episode logs.
        #[arg(long)]
        no_logs: bool,
        /// Trials per timing-plot point; 0 skips the timing study.
        #[arg(long, default_value_t = 3)]
        bench_trials: usize,
    },
    /// Rank-correlation table from a results CSV.
    Correlate {
        results: PathBuf,
        /// Correlation CSV (default: correlation.csv beside the results).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn mode(formula_only: bool) -> BudgetMode {
    if formula_only {
        BudgetMode::FormulaOnly
    } else {
        BudgetMode::Published
    }
}

fn sibling(path: &Path, name: &str) -> PathBuf {
    path.parent().unwrap_or(Path::new(".")).join(name)
}

fn main() -> anyhow::Result<()> {
    match Cli::parse().command {
        Command::Simulate { config, out, formula_only, no_log } => {
            let cfg = ExperimentConfig::load(&config)?;
            let dir = results_root(out.as_deref());
            let run = run_experiment(&cfg, mode(formula_only), &dir, !no_log)?;
            if let Some(p) = &run.log_path {
                println!("log     {}", p.display());
            }
            println!("report  {}", run.report_path.display());
            for (k, v) in &run.report.metrics {
                println!("{k:<28}{v:.6}");
            }
        }
        Command::Metrics { log, config, r_high, alpha_rs, beta_wpe, priorities, out } => {
            let episodes = read_log_csv(&log)?;
            let cfg = config.as_deref().map(ExperimentConfig::load).transpose()?;
            let (r_high, weights, priorities) = match &cfg {
                Some(c) => (c.r_high, c.rp_weights, c.priority_vector()?),
                None => (
                    r_high,
                    RpWeights::new(alpha_rs, beta_wpe)?,
                    priorities.map(PriorityVector::from_shares).transpose()?,
                ),
            };
            if priorities.as_ref().is_some_and(|p| p.len() != episodes.n()) {
                bail!("{} agents in the log but a different number of priorities", episodes.n());
            }
            let (set, timings) = measure(&episodes, r_high, &weights, priorities.as_ref())?;
            let label = log.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            let mode = BudgetMode::Published;
            let report = MetricReport::new(label, cfg, mode, episodes.n(), episodes.len(), &set, timings);
            match out {
                Some(p) => write_json(&p, &report)?,
                None => println!("{}", serde_json::to_string_pretty(&report)?),
            }
        }
        Command::Bench { n, episodes, trials, seed, formula_only, out } => {
            let mut all = Vec::new();
            println!("{:>4} {:>9} {:>12} {:>12} {:>8}", "n", "episodes", "rp_s", "alt_s", "ratio");
            for n in n {
                let e = match episodes {
                    Some(e) => e,
                    None => episode_budget(n, DEFAULT_BUDGET_BASE, mode(formula_only))?,
                };
                let records = bench_metrics(n, e, trials, seed).with_context(|| format!("bench n={n}"))?;
                let ratio = alt_rp_ratio(&records).unwrap_or(f64::NAN);
                println!(
                    "{n:>4} {e:>9} {:>12.6} {:>12.6} {ratio:>8.2}",
                    records[0].wall_seconds, records[1].wall_seconds
                );
                all.extend(records);
            }
            if let Some(p) = out {
                write_records(&p, &all)?;
            }
        }
        Command::Sweep { config, preset, seed, out, formula_only, no_logs, bench_trials } => {
            let configs = match (config, preset) {
                (Some(p), _) => load_configs(&p)?,
                (None, Some(PresetArg::Paper)) => Preset::Paper.configs(seed),
                (None, Some(PresetArg::Desk)) => Preset::Desk.configs(seed),
                (None, None) => bail!("either --config or --preset is required"),
            };
            let mut opts = SweepOptions::new(results_root(out.as_deref()));
            opts.budget_mode = mode(formula_only);
            opts.write_logs = !no_logs;
            opts.bench_trials = bench_trials;
            let summary = run_sweep(&configs, &opts)?;
            println!("{} of {} configs completed", summary.reports.len(), configs.len());
            for f in &summary.failures {
                eprintln!("failed {}: {}", f.label, f.error);
            }
            for p in &summary.files {
                println!("wrote {}", p.display());
            }
        }
        Command::Correlate { results, out } => {
            let rows = read_results_csv(&results)?;
            let out = out.unwrap_or_else(|| sibling(&results, tfl::sweep::CORRELATION_FILE));
            write_records(&out, &correlation_records(&rows)?)?;
            let pearson_out = sibling(&out, PEARSON_FILE);
            write_records(&pearson_out, &pearson_records(&rows))?;
            println!("wrote {}\nwrote {}", out.display(), pearson_out.display());
        }
    }
    Ok(())
}
