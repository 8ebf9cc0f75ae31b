//! CSV and JSON formats.
//!
//! Floats are written in Rust's shortest round-trip form, so reading a file back
//! yields the exact values that were written.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use tfl_core::analysis::CorrelationCell;
use tfl_core::log::{EpisodeLog, EpisodeOutcome};
use tfl_core::metrics::MetricSet;

use crate::error::{csv_err, io_err, json_err, Error, Result};
use crate::report::{MetricReport, ResultRow};

pub(crate) fn fmt_f64(v: f64) -> String {
    format!("{v:?}")
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(io_err(dir))?;
    }
    Ok(BufWriter::new(File::create(path).map_err(io_err(path))?))
}

fn open(path: &Path) -> Result<BufReader<File>> {
    Ok(BufReader::new(File::open(path).map_err(io_err(path))?))
}

fn finish<W: Write>(mut w: csv::Writer<W>, path: &Path) -> Result<()> {
    w.flush().map_err(io_err(path))
}

/// Episode log: `episode,reachers,solo_winner,reward_0,...,reward_{n-1}`. Episodes
/// are 1-based, reachers are `;`-separated, `solo_winner` is empty unless exactly one
/// agent reached.
pub fn write_log<W: Write>(log: &EpisodeLog, out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["episode".to_owned(), "reachers".to_owned(), "solo_winner".to_owned()];
    header.extend((0..log.n()).map(|i| format!("reward_{i}")));
    w.write_record(&header)?;
    let mut record = Vec::with_capacity(header.len());
    for (i, o) in log.outcomes().iter().enumerate() {
        record.clear();
        record.push((i + 1).to_string());
        record.push(o.reachers().iter().map(usize::to_string).collect::<Vec<_>>().join(";"));
        record.push(o.solo_winner().map(|a| a.to_string()).unwrap_or_default());
        record.extend(o.rewards().iter().map(|&r| fmt_f64(r)));
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_log_csv(path: &Path, log: &EpisodeLog) -> Result<()> {
    write_log(log, create(path)?).map_err(csv_err(path))
}

/// Inverse of [`write_log`]; `n` is the number of reward columns.
pub fn read_log<R: Read>(input: R, path: &Path) -> Result<EpisodeLog> {
    let mut r = csv::Reader::from_reader(input);
    let header = r.headers().map_err(csv_err(path))?.clone();
    let bad = |record: u64, message: String| Error::Parse { path: path.to_owned(), record, message };
    let n = header.len().saturating_sub(3);
    let expected: Vec<String> = ["episode", "reachers", "solo_winner"]
        .into_iter()
        .map(String::from)
        .chain((0..n).map(|i| format!("reward_{i}")))
        .collect();
    if header.iter().ne(expected.iter().map(String::as_str)) {
        return Err(bad(0, format!("unexpected header {:?}", header.iter().collect::<Vec<_>>())));
    }
    let mut outcomes = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec.map_err(csv_err(path))?;
        let line = i as u64 + 1;
        let episode: usize = rec[0].parse().map_err(|e| bad(line, format!("episode: {e}")))?;
        if episode != i + 1 {
            return Err(bad(line, format!("episode {episode} out of sequence")));
        }
        let reachers = if rec[1].is_empty() {
            Vec::new()
        } else {
            rec[1]
                .split(';')
                .map(|s| s.parse::<usize>().map_err(|e| bad(line, format!("reacher {s:?}: {e}"))))
                .collect::<Result<Vec<_>>>()?
        };
        let rewards = (3..rec.len())
            .map(|j| rec[j].parse::<f64>().map_err(|e| bad(line, format!("reward {:?}: {e}", &rec[j]))))
            .collect::<Result<Vec<_>>>()?;
        let outcome = EpisodeOutcome::new(reachers, rewards).map_err(|e| bad(line, e.to_string()))?;
        let solo = if rec[2].is_empty() {
            None
        } else {
            Some(rec[2].parse::<usize>().map_err(|e| bad(line, format!("solo_winner: {e}")))?)
        };
        if solo != outcome.solo_winner() {
            return Err(bad(line, "solo_winner disagrees with reachers".into()));
        }
        outcomes.push(outcome);
    }
    Ok(EpisodeLog::new(n, outcomes)?)
}

pub fn read_log_csv(path: &Path) -> Result<EpisodeLog> {
    read_log(open(path)?, path)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(json_err(path))?;
    w.write_all(b"\n").map_err(io_err(path))?;
    w.flush().map_err(io_err(path))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    serde_json::from_reader(open(path)?).map_err(json_err(path))
}

pub fn read_report_json(path: &Path) -> Result<MetricReport> {
    read_json(path)
}

const PROVENANCE: [&str; 7] = ["label", "n", "episodes", "state_type", "reward", "policy", "seed"];

/// Results table: provenance columns, then every metric key. Absent values are empty.
pub fn write_results_csv(path: &Path, rows: &[ResultRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(create(path)?);
    let header = PROVENANCE.iter().chain(MetricSet::KEYS.iter());
    w.write_record(header).map_err(csv_err(path))?;
    for row in rows {
        let mut rec = vec![
            row.label.clone(),
            row.n.to_string(),
            row.episodes.to_string(),
            row.state_type.clone(),
            row.reward.clone(),
            row.policy.clone(),
            row.seed.to_string(),
        ];
        rec.extend(MetricSet::KEYS.iter().map(|k| row.metrics.get(*k).map(|&v| fmt_f64(v)).unwrap_or_default()));
        w.write_record(&rec).map_err(csv_err(path))?;
    }
    finish(w, path)
}

pub fn read_results_csv(path: &Path) -> Result<Vec<ResultRow>> {
    let mut r = csv::Reader::from_reader(open(path)?);
    let header = r.headers().map_err(csv_err(path))?.clone();
    let bad = |record: u64, message: String| Error::Parse { path: path.to_owned(), record, message };
    if header.len() < PROVENANCE.len() || header.iter().zip(PROVENANCE).any(|(a, b)| a != b) {
        return Err(bad(0, "missing provenance columns".into()));
    }
    let mut rows = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec.map_err(csv_err(path))?;
        let line = i as u64 + 1;
        let int = |j: usize| rec[j].parse::<u64>().map_err(|e| bad(line, format!("{}: {e}", &header[j])));
        let mut metrics = BTreeMap::new();
        for j in PROVENANCE.len()..rec.len() {
            if !rec[j].is_empty() {
                let v = rec[j].parse::<f64>().map_err(|e| bad(line, format!("{}: {e}", &header[j])))?;
                metrics.insert(header[j].to_owned(), v);
            }
        }
        rows.push(ResultRow {
            label: rec[0].to_owned(),
            n: int(1)? as usize,
            episodes: int(2)? as usize,
            state_type: rec[3].to_owned(),
            reward: rec[4].to_owned(),
            policy: rec[5].to_owned(),
            seed: int(6)?,
            metrics,
        });
    }
    Ok(rows)
}

/// One cell of a correlation table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationRecord {
    pub row_metric: String,
    pub col_metric: String,
    pub rho: Option<f64>,
    pub ase: Option<f64>,
    pub n: usize,
    pub p_flag: String,
}

impl CorrelationRecord {
    pub fn new(row: &str, col: &str, cell: &CorrelationCell) -> Self {
        Self {
            row_metric: row.to_owned(),
            col_metric: col.to_owned(),
            rho: cell.rho,
            ase: cell.ase,
            n: cell.n_samples,
            p_flag: cell.p_flag.label().to_owned(),
        }
    }
}

/// Pearson coefficient on raw values, kept apart from the rank tables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PearsonRecord {
    pub row_metric: String,
    pub col_metric: String,
    pub pearson_r: Option<f64>,
    pub ase: Option<f64>,
    pub n: usize,
    pub p_flag: String,
}

impl PearsonRecord {
    pub fn new(row: &str, col: &str, cell: &CorrelationCell) -> Self {
        Self {
            row_metric: row.to_owned(),
            col_metric: col.to_owned(),
            pearson_r: cell.rho,
            ase: cell.ase,
            n: cell.n_samples,
            p_flag: cell.p_flag.label().to_owned(),
        }
    }
}

/// QL value of one metric against the mean of the matching random baselines.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoordinationRecord {
    pub label: String,
    pub n: usize,
    pub state_type: String,
    pub reward: String,
    pub seed: u64,
    pub metric: String,
    pub value_ql: f64,
    pub value_rand: f64,
    pub random_runs: usize,
    /// Empty when the baseline is already at 1.
    pub cs: Option<f64>,
}

/// CALT of one run, for plotting against `n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaltPoint {
    pub label: String,
    pub n: usize,
    pub episodes: usize,
    pub state_type: String,
    pub reward: String,
    pub policy: String,
    pub seed: u64,
    pub calt: f64,
}

/// Writes serde records with a header row.
pub fn write_records<T: Serialize>(path: &Path, records: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_writer(create(path)?);
    for r in records {
        w.serialize(r).map_err(csv_err(path))?;
    }
    finish(w, path)
}

pub fn read_records<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let mut r = csv::Reader::from_reader(open(path)?);
    r.deserialize().collect::<csv::Result<Vec<T>>>().map_err(csv_err(path))
}

/// `failures.csv` row: a config that did not complete.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailureRecord {
    pub label: String,
    pub error: String,
}
