//! Timing study of the metric families on synthetic random-play logs.

use std::hint::black_box;
use std::time::{Duration, Instant};

use tfl_core::agents::QLearnerParams;
use tfl_core::env::{Arena, RewardScheme, StateType};
use tfl_core::log::{EpisodeLog, DEFAULT_R_HIGH};
use tfl_core::metrics::alt::{alt_family, alt_family_windowed};
use tfl_core::metrics::classic_pair;
use tfl_core::metrics::rp::{rp_family, RpWeights};
use tfl_core::sim::{simulate, PolicyKind, SimulationSpec};

use crate::error::{Error, Result};
use crate::report::{machine_note, MetricFamily, TimingRecord};

pub const MIN_TRIALS: usize = 3;

/// Kernel label of the direct ALT evaluation, the one compared against RP.
pub const WINDOWED: &str = "windowed";

/// Random-play log of the given size.
pub fn synthetic_log(n: usize, episodes: usize, seed: u64) -> Result<EpisodeLog> {
    let spec = SimulationSpec {
        n,
        episodes,
        state_type: StateType::TypeA,
        scheme: RewardScheme::ilf(),
        policy: PolicyKind::Random,
        seed,
        arena: Arena::default(),
        params: QLearnerParams::default(),
    };
    Ok(simulate(&spec)?.log)
}

fn median_time(trials: usize, mut f: impl FnMut()) -> Duration {
    let mut times: Vec<Duration> = (0..trials)
        .map(|_| {
            let t = Instant::now();
            f();
            t.elapsed()
        })
        .collect();
    times.sort();
    times[trials / 2]
}

/// Median-of-`trials` wall time of each family on one log: the full RP family, the
/// six ALT variants by direct window evaluation, the same by the sliding kernel, and
/// the classic pair.
pub fn bench_log(log: &EpisodeLog, trials: usize) -> Result<Vec<TimingRecord>> {
    if trials < MIN_TRIALS {
        return Err(Error::Config(format!("at least {MIN_TRIALS} trials required, got {trials}")));
    }
    // surface metric errors once, outside the timed closures
    rp_family(log, &RpWeights::default(), None)?;
    alt_family(log)?;
    classic_pair(log, DEFAULT_R_HIGH)?;

    let (n, episodes) = (log.n(), log.len());
    let note = format!("{}, median of {trials}", machine_note());
    let weights = RpWeights::default();
    let rp = median_time(trials, || {
        black_box(rp_family(black_box(log), &weights, None).ok());
    });
    let windowed = median_time(trials, || {
        black_box(alt_family_windowed(black_box(log)).ok());
    });
    let incremental = median_time(trials, || {
        black_box(alt_family(black_box(log)).ok());
    });
    let classic = median_time(trials, || {
        black_box(classic_pair(black_box(log), DEFAULT_R_HIGH).ok());
    });
    Ok(vec![
        TimingRecord::new(MetricFamily::Rp, "single-pass", rp, n, episodes, note.clone()),
        TimingRecord::new(MetricFamily::Alt, WINDOWED, windowed, n, episodes, note.clone()),
        TimingRecord::new(MetricFamily::Alt, "incremental", incremental, n, episodes, note.clone()),
        TimingRecord::new(MetricFamily::Classic, "single-pass", classic, n, episodes, note),
    ])
}

pub fn bench_metrics(n: usize, episodes: usize, trials: usize, seed: u64) -> Result<Vec<TimingRecord>> {
    bench_log(&synthetic_log(n, episodes, seed)?, trials)
}

/// Windowed ALT time over RP time.
pub fn alt_rp_ratio(records: &[TimingRecord]) -> Option<f64> {
    let find = |family, kernel: Option<&str>| {
        records.iter().find(|r| r.family == family && kernel.is_none_or(|k| r.kernel == k)).map(|r| r.wall_seconds)
    };
    Some(find(MetricFamily::Alt, Some(WINDOWED))? / find(MetricFamily::Rp, None)?)
}
