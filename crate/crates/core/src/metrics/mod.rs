//! Metric families and the combined per-run metric set.

pub mod alt;
pub mod classic;
pub mod rp;

use alloc::vec::Vec;

use crate::log::EpisodeLog;
use crate::Result;
use alt::{alt_family, alt_ratio, pa_equivalent_agents, AltScores, AltVariant};
use classic::{efficiency, reward_fairness, RewardTotals};
use rp::{rp_family, PriorityVector, RpFamily, RpWeights};

/// Anything that can look up a metric value by report key.
pub trait MetricLookup {
    fn metric(&self, key: &str) -> Option<f64>;
}

/// Every metric of one run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricSet {
    pub efficiency: f64,
    /// 0 when [`MetricSet::reward_fairness_degenerate`] is set.
    pub reward_fairness: f64,
    /// Nobody earned any reward, so reward fairness is undefined.
    pub reward_fairness_degenerate: bool,
    pub alt: AltScores,
    pub alt_ratio_calt: f64,
    pub pa_equivalent_agents: f64,
    pub rp: RpFamily,
}

impl MetricSet {
    /// Report keys in output order. `erp` is last and only present with priorities.
    pub const KEYS: [&'static str; 23] = [
        "efficiency",
        "reward_fairness",
        "calt",
        "ealt",
        "aalt",
        "falt",
        "qfalt",
        "qealt",
        "alt_ratio_calt",
        "pa_equivalent_agents",
        "rs_excl",
        "rs_reach",
        "wpe_excl",
        "wpe_reach",
        "awe_excl",
        "awe_reach",
        "rp_excl",
        "rp_reach",
        "rp_rs_mxae",
        "rp_rs_mxax",
        "frp",
        "erp",
        "reward_fairness_degenerate",
    ];

    pub fn compute(
        log: &EpisodeLog,
        r_high: f64,
        weights: &RpWeights,
        priorities: Option<&PriorityVector>,
    ) -> Result<Self> {
        let (e, rf) = classic_pair(log, r_high)?;
        Self::from_parts(log.n(), e, rf, alt_family(log)?, rp_family(log, weights, priorities)?)
    }

    /// Assembles a set from separately computed families, e.g. when each is timed.
    pub fn from_parts(
        n: usize,
        efficiency: f64,
        reward_fairness: Option<f64>,
        alt: AltScores,
        rp: RpFamily,
    ) -> Result<Self> {
        Ok(Self {
            efficiency,
            reward_fairness: reward_fairness.unwrap_or(0.0),
            reward_fairness_degenerate: reward_fairness.is_none(),
            alt,
            alt_ratio_calt: alt_ratio(alt.calt, AltVariant::Calt)?,
            pa_equivalent_agents: pa_equivalent_agents(alt.calt, n),
            rp,
        })
    }

    /// `(key, value)` pairs in [`MetricSet::KEYS`] order; the degenerate flag reads
    /// as 0 or 1 and `erp` is skipped when absent.
    pub fn entries(&self) -> Vec<(&'static str, f64)> {
        Self::KEYS.iter().filter_map(|&k| self.metric(k).map(|v| (k, v))).collect()
    }
}

/// Efficiency and (possibly undefined) reward fairness of `log`.
pub fn classic_pair(log: &EpisodeLog, r_high: f64) -> Result<(f64, Option<f64>)> {
    let totals = RewardTotals::from_log(log, r_high);
    Ok((efficiency(&totals)?, reward_fairness(&totals)))
}

impl MetricLookup for MetricSet {
    fn metric(&self, key: &str) -> Option<f64> {
        let r = &self.rp;
        Some(match key {
            "efficiency" => self.efficiency,
            "reward_fairness" => self.reward_fairness,
            "reward_fairness_degenerate" => f64::from(u8::from(self.reward_fairness_degenerate)),
            "calt" => self.alt.calt,
            "ealt" => self.alt.ealt,
            "aalt" => self.alt.aalt,
            "falt" => self.alt.falt,
            "qfalt" => self.alt.qfalt,
            "qealt" => self.alt.qealt,
            "alt_ratio_calt" => self.alt_ratio_calt,
            "pa_equivalent_agents" => self.pa_equivalent_agents,
            "rs_excl" => r.rs_excl,
            "rs_reach" => r.rs_reach,
            "wpe_excl" => r.wpe_excl,
            "wpe_reach" => r.wpe_reach,
            "awe_excl" => r.awe_excl,
            "awe_reach" => r.awe_reach,
            "rp_excl" => r.rp_excl,
            "rp_reach" => r.rp_reach,
            "rp_rs_mxae" => r.rp_rs_mxae,
            "rp_rs_mxax" => r.rp_rs_mxax,
            "frp" => r.frp,
            "erp" => return r.erp,
            _ => return None,
        })
    }
}
