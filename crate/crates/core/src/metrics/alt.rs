//! The ALT family: batch scores averaged over every width-`n`, stride-1 window of the
//! episode sequence (`ν - n + 1` windows).
//!
//! Two kernels produce bit-identical results:
//!
//! - [`alt_metric`] / [`alt_family`] slide one [`BatchStats`] along the log, adding the
//!   entering episode and removing the leaving one;
//! - [`alt_metric_windowed`] / [`alt_family_windowed`] rebuild the batch for every
//!   window, the direct `O(ν·n)` evaluation whose cost the benchmark measures.

use alloc::vec;
use alloc::vec::Vec;

use crate::log::{EpisodeLog, EpisodeOutcome};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AltVariant {
    Calt,
    Ealt,
    Aalt,
    Falt,
    QFalt,
    QEalt,
}

impl AltVariant {
    pub const ALL: [AltVariant; 6] =
        [AltVariant::Calt, AltVariant::Ealt, AltVariant::Aalt, AltVariant::Falt, AltVariant::QFalt, AltVariant::QEalt];

    /// Report key.
    pub fn key(self) -> &'static str {
        match self {
            AltVariant::Calt => "calt",
            AltVariant::Ealt => "ealt",
            AltVariant::Aalt => "aalt",
            AltVariant::Falt => "falt",
            AltVariant::QFalt => "qfalt",
            AltVariant::QEalt => "qealt",
        }
    }
}

/// Counts over one window of `n` episodes.
///
/// `calt_credit` stores `Σ_k (n - y_k)` over the window's episodes that had at least
/// one arrival; an episode nobody reached earns no alternation credit.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BatchStats {
    /// f: distinct agents that reached the terminal at least once.
    pub distinct_reachers: usize,
    /// t: total terminal arrivals.
    pub arrivals: usize,
    /// w: episodes with exactly one reacher.
    pub solo_episodes: usize,
    /// g: distinct agents with at least one solo win.
    pub solo_winners: usize,
    pub calt_credit: usize,
}

impl BatchStats {
    /// β for `variant` in a window of width `n`.
    pub fn score(&self, variant: AltVariant, n: usize) -> f64 {
        let nf = n as f64;
        match variant {
            AltVariant::Calt => self.calt_credit as f64 / (n * (n - 1)) as f64,
            AltVariant::Ealt => self.solo_episodes as f64 / nf,
            AltVariant::Aalt => self.solo_winners as f64 / nf,
            AltVariant::Falt => {
                if self.arrivals == 0 {
                    0.0
                } else {
                    self.distinct_reachers as f64 / self.arrivals as f64
                }
            }
            AltVariant::QFalt => {
                let x = self.distinct_reachers as f64 / nf;
                x * x
            }
            AltVariant::QEalt => {
                let x = self.solo_episodes as f64 / nf;
                x * x
            }
        }
    }
}

/// All six ALT values of one log.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AltScores {
    pub calt: f64,
    pub ealt: f64,
    pub aalt: f64,
    pub falt: f64,
    pub qfalt: f64,
    pub qealt: f64,
}

impl AltScores {
    pub fn get(&self, variant: AltVariant) -> f64 {
        match variant {
            AltVariant::Calt => self.calt,
            AltVariant::Ealt => self.ealt,
            AltVariant::Aalt => self.aalt,
            AltVariant::Falt => self.falt,
            AltVariant::QFalt => self.qfalt,
            AltVariant::QEalt => self.qealt,
        }
    }

    fn from_sums(sums: [f64; 6], windows: usize) -> Self {
        let w = windows as f64;
        Self {
            calt: sums[0] / w,
            ealt: sums[1] / w,
            aalt: sums[2] / w,
            falt: sums[3] / w,
            qfalt: sums[4] / w,
            qealt: sums[5] / w,
        }
    }
}

fn check_len(log: &EpisodeLog) -> Result<usize> {
    let (n, episodes) = (log.n(), log.len());
    if episodes < n {
        return Err(Error::TooFewEpisodes { episodes, n });
    }
    Ok(episodes - n + 1)
}

struct SlidingBatch {
    n: usize,
    reach_count: Vec<u32>,
    solo_count: Vec<u32>,
    stats: BatchStats,
}

impl SlidingBatch {
    fn new(n: usize) -> Self {
        Self { n, reach_count: vec![0; n], solo_count: vec![0; n], stats: BatchStats::default() }
    }

    fn add(&mut self, o: &EpisodeOutcome) {
        let y = o.reachers().len();
        let s = &mut self.stats;
        s.arrivals += y;
        if y > 0 {
            s.calt_credit += self.n - y;
        }
        if let Some(winner) = o.solo_winner() {
            s.solo_episodes += 1;
            if self.solo_count[winner] == 0 {
                s.solo_winners += 1;
            }
            self.solo_count[winner] += 1;
        }
        for &a in o.reachers() {
            if self.reach_count[a] == 0 {
                s.distinct_reachers += 1;
            }
            self.reach_count[a] += 1;
        }
    }

    fn remove(&mut self, o: &EpisodeOutcome) {
        let y = o.reachers().len();
        let s = &mut self.stats;
        s.arrivals -= y;
        if y > 0 {
            s.calt_credit -= self.n - y;
        }
        if let Some(winner) = o.solo_winner() {
            s.solo_episodes -= 1;
            self.solo_count[winner] -= 1;
            if self.solo_count[winner] == 0 {
                s.solo_winners -= 1;
            }
        }
        for &a in o.reachers() {
            self.reach_count[a] -= 1;
            if self.reach_count[a] == 0 {
                s.distinct_reachers -= 1;
            }
        }
    }
}

/// Calls `visit` with the stats of every window, in order.
fn slide(log: &EpisodeLog, mut visit: impl FnMut(&BatchStats)) {
    let n = log.n();
    let outcomes = log.outcomes();
    let mut batch = SlidingBatch::new(n);
    for o in &outcomes[..n] {
        batch.add(o);
    }
    visit(&batch.stats);
    for j in n..outcomes.len() {
        batch.remove(&outcomes[j - n]);
        batch.add(&outcomes[j]);
        visit(&batch.stats);
    }
}

pub fn alt_metric(log: &EpisodeLog, variant: AltVariant) -> Result<f64> {
    let windows = check_len(log)?;
    let n = log.n();
    let mut sum = 0.0;
    slide(log, |stats| sum += stats.score(variant, n));
    Ok(sum / windows as f64)
}

/// All six variants in one sliding pass.
pub fn alt_family(log: &EpisodeLog) -> Result<AltScores> {
    let windows = check_len(log)?;
    let n = log.n();
    let mut sums = [0.0; 6];
    slide(log, |stats| {
        for (sum, variant) in sums.iter_mut().zip(AltVariant::ALL) {
            *sum += stats.score(variant, n);
        }
    });
    Ok(AltScores::from_sums(sums, windows))
}

/// Builds one window's stats from its `n` episodes. `stamp` marks agents already
/// counted in this window and must be unique per call.
fn window_stats(
    window: &[EpisodeOutcome],
    n: usize,
    stamp: u32,
    seen_reach: &mut [u32],
    seen_solo: &mut [u32],
) -> BatchStats {
    let mut s = BatchStats::default();
    for o in window {
        let y = o.reachers().len();
        s.arrivals += y;
        if y > 0 {
            s.calt_credit += n - y;
        }
        if let Some(winner) = o.solo_winner() {
            s.solo_episodes += 1;
            if seen_solo[winner] != stamp {
                seen_solo[winner] = stamp;
                s.solo_winners += 1;
            }
        }
        for &a in o.reachers() {
            if seen_reach[a] != stamp {
                seen_reach[a] = stamp;
                s.distinct_reachers += 1;
            }
        }
    }
    s
}

pub fn alt_metric_windowed(log: &EpisodeLog, variant: AltVariant) -> Result<f64> {
    let windows = check_len(log)?;
    let n = log.n();
    let mut seen_reach = vec![0u32; n];
    let mut seen_solo = vec![0u32; n];
    let mut sum = 0.0;
    for (j, window) in log.outcomes().windows(n).enumerate() {
        // stamps wrap after 2^32 - 1 windows; clear on wrap so 0 never aliases
        let stamp = (j % (u32::MAX as usize)) as u32 + 1;
        if stamp == 1 && j > 0 {
            seen_reach.fill(0);
            seen_solo.fill(0);
        }
        sum += window_stats(window, n, stamp, &mut seen_reach, &mut seen_solo).score(variant, n);
    }
    Ok(sum / windows as f64)
}

/// Six independent windowed passes, one per variant.
pub fn alt_family_windowed(log: &EpisodeLog) -> Result<AltScores> {
    Ok(AltScores {
        calt: alt_metric_windowed(log, AltVariant::Calt)?,
        ealt: alt_metric_windowed(log, AltVariant::Ealt)?,
        aalt: alt_metric_windowed(log, AltVariant::Aalt)?,
        falt: alt_metric_windowed(log, AltVariant::Falt)?,
        qfalt: alt_metric_windowed(log, AltVariant::QFalt)?,
        qealt: alt_metric_windowed(log, AltVariant::QEalt)?,
    })
}

/// Share of agents behaving as if in perfect alternation: `√CALT` for CALT, the value
/// itself for EALT and AALT.
pub fn alt_ratio(value: f64, variant: AltVariant) -> Result<f64> {
    if !(0.0..=1.0).contains(&value) {
        return Err(Error::InvalidParameter("ALT value must lie in [0, 1]"));
    }
    match variant {
        AltVariant::Calt => Ok(libm::sqrt(value)),
        AltVariant::Ealt | AltVariant::Aalt => Ok(value),
        other => Err(Error::UnsupportedAltRatio(other.key())),
    }
}

/// `n · √CALT`.
pub fn pa_equivalent_agents(calt: f64, n: usize) -> f64 {
    n as f64 * libm::sqrt(calt)
}
