//! Efficiency and reward fairness.

use alloc::vec::Vec;

use crate::log::EpisodeLog;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct RewardTotals {
    pub per_agent: Vec<f64>,
    pub episodes: usize,
    pub r_high: f64,
}

impl RewardTotals {
    pub fn from_log(log: &EpisodeLog, r_high: f64) -> Self {
        Self { per_agent: log.reward_totals(), episodes: log.len(), r_high }
    }
}

/// `ΣR_i / (ν · r_high)`.
pub fn efficiency(totals: &RewardTotals) -> Result<f64> {
    if totals.episodes == 0 {
        return Err(Error::EmptyLog);
    }
    let sum: f64 = totals.per_agent.iter().sum();
    Ok(sum / (totals.episodes as f64 * totals.r_high))
}

/// `ΣR_i / (n · max R_i)`; `None` when nobody earned anything.
pub fn reward_fairness(totals: &RewardTotals) -> Option<f64> {
    let max = totals.per_agent.iter().copied().fold(0.0, f64::max);
    if max <= 0.0 {
        return None;
    }
    let sum: f64 = totals.per_agent.iter().sum();
    Some(sum / (totals.per_agent.len() as f64 * max))
}
