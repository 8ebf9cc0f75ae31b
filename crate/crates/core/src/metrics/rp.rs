//! Rotational periodicity: per-agent rhythm (RS) and frequency (WPE) scores, their
//! weighted combination, and the priority-weighted variant.
//!
//! Every score here is derived from [`GapProfile`]s, which one forward pass over the
//! log produces for all agents, so a whole family costs `O(ν + n)` plus the number of
//! win events.

use alloc::vec::Vec;

use crate::log::{extract_all_profiles, EpisodeLog, GapProfile, WinEventKind};
use crate::{Error, Result};

/// Weights of RS and WPE in the per-agent combination.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RpWeights {
    pub alpha_rs: f64,
    pub beta_wpe: f64,
}

impl Default for RpWeights {
    fn default() -> Self {
        Self { alpha_rs: 1.0, beta_wpe: 1.0 }
    }
}

impl RpWeights {
    pub fn new(alpha_rs: f64, beta_wpe: f64) -> Result<Self> {
        let w = Self { alpha_rs, beta_wpe };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |x: f64| x.is_finite() && x >= 0.0;
        if !(ok(self.alpha_rs) && ok(self.beta_wpe) && self.alpha_rs + self.beta_wpe > 0.0) {
            return Err(Error::InvalidParameter("RP weights must be non-negative with a positive sum"));
        }
        Ok(())
    }
}

/// Target share `w_i` of every agent.
///
/// Ideals are derived from the period `1/w_i`: gap `1/w_i - 1`, waiting periods
/// `ν / (1/w_i) = w_i·ν`. [`PriorityVector::uniform`] stores the period `n` exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct PriorityVector {
    shares: Vec<f64>,
    periods: Vec<f64>,
}

impl PriorityVector {
    pub const SUM_TOLERANCE: f64 = 1e-9;

    pub fn from_shares(shares: Vec<f64>) -> Result<Self> {
        if shares.len() < 2 {
            return Err(Error::TooFewAgents(shares.len()));
        }
        if shares.iter().any(|&w| !(w.is_finite() && w > 0.0)) {
            return Err(Error::InvalidParameter("priority shares must be positive"));
        }
        let sum: f64 = shares.iter().sum();
        if libm::fabs(sum - 1.0) > Self::SUM_TOLERANCE {
            return Err(Error::InvalidParameter("priority shares must sum to 1"));
        }
        let periods = shares.iter().map(|&w| snap_period(1.0 / w)).collect();
        Ok(Self { shares, periods })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::TooFewAgents(n));
        }
        let nf = n as f64;
        Ok(Self { shares: alloc::vec![1.0 / nf; n], periods: alloc::vec![nf; n] })
    }

    pub fn len(&self) -> usize {
        self.shares.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shares.is_empty()
    }

    pub fn shares(&self) -> &[f64] {
        &self.shares
    }

    /// `r_i* = 1/w_i - 1`.
    pub fn ideal_gap(&self, agent: usize) -> f64 {
        self.periods[agent] - 1.0
    }

    /// `t_i* = w_i · ν`.
    pub fn ideal_waiting_periods(&self, agent: usize, episodes: usize) -> f64 {
        episodes as f64 / self.periods[agent]
    }
}

/// A share of exactly `1/k` means period `k`, but `1/(1/k)` misses `k` by an ulp for
/// some `k` (49 is the first). Snap periods within a few ulps of an integer.
fn snap_period(p: f64) -> f64 {
    let k = libm::round(p);
    if libm::fabs(p - k) <= 4.0 * f64::EPSILON * k {
        k
    } else {
        p
    }
}

/// `min(r̄, r*) / max(r̄, r*)` for agents with at least two wins, 0 otherwise.
/// `ideal_gap` must be positive.
pub fn rotational_score(profile: &GapProfile, ideal_gap: f64) -> f64 {
    profile.mean_gap().map_or(0.0, |mean| rotational_ratio(mean, ideal_gap))
}

/// `min(mean, ideal) / max(mean, ideal)`.
pub fn rotational_ratio(mean_gap: f64, ideal_gap: f64) -> f64 {
    debug_assert!(ideal_gap > 0.0);
    mean_gap.min(ideal_gap) / mean_gap.max(ideal_gap)
}

/// `1 - |t - t*| / t*` while `t < 2t*`, 0 beyond. `t_star` must be positive.
pub fn waiting_periods_eval(t: usize, t_star: f64) -> f64 {
    debug_assert!(t_star > 0.0);
    let t = t as f64;
    if t < 2.0 * t_star {
        1.0 - libm::fabs(t - t_star) / t_star
    } else {
        0.0
    }
}

/// Superseded rhythm score: linear in the deviation from the ideal gap and cut to 0
/// once the mean gap reaches twice the ideal. Kept for comparison with RS.
pub fn awe_legacy(profile: &GapProfile, ideal_gap: f64) -> f64 {
    profile.mean_gap().map_or(0.0, |mean| awe_ratio(mean, ideal_gap))
}

/// AWE of an agent with at least two wins and the given mean gap.
pub fn awe_ratio(mean_gap: f64, ideal_gap: f64) -> f64 {
    debug_assert!(ideal_gap > 0.0);
    if mean_gap < 2.0 * ideal_gap {
        (1.0 - libm::fabs(mean_gap - ideal_gap) / ideal_gap).max(0.0)
    } else {
        0.0
    }
}

/// `(α·RS + β·WPE) / (α + β)`.
pub fn rp_per_agent(rs: f64, wpe: f64, weights: &RpWeights) -> f64 {
    (weights.alpha_rs * rs + weights.beta_wpe * wpe) / (weights.alpha_rs + weights.beta_wpe)
}

/// Named pairings of the RS and WPE win-event kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RpVariant {
    /// RS and WPE on exclusive wins.
    Excl,
    /// RS and WPE on all terminal reaches.
    Reach,
    /// RS on reaches, WPE on exclusive wins.
    RsMxAe,
    /// RS on exclusive wins, WPE on reaches.
    RsMxAx,
}

impl RpVariant {
    pub const ALL: [RpVariant; 4] = [RpVariant::Excl, RpVariant::Reach, RpVariant::RsMxAe, RpVariant::RsMxAx];

    pub fn rs_kind(self) -> WinEventKind {
        match self {
            RpVariant::Excl | RpVariant::RsMxAx => WinEventKind::Exclusive,
            RpVariant::Reach | RpVariant::RsMxAe => WinEventKind::Reach,
        }
    }

    pub fn wpe_kind(self) -> WinEventKind {
        match self {
            RpVariant::Excl | RpVariant::RsMxAe => WinEventKind::Exclusive,
            RpVariant::Reach | RpVariant::RsMxAx => WinEventKind::Reach,
        }
    }

    pub fn key(self) -> &'static str {
        match self {
            RpVariant::Excl => "rp_excl",
            RpVariant::Reach => "rp_reach",
            RpVariant::RsMxAe => "rp_rs_mxae",
            RpVariant::RsMxAx => "rp_rs_mxax",
        }
    }
}

fn mean_rp(
    rs_profiles: &[GapProfile],
    wpe_profiles: &[GapProfile],
    ideal_gap: impl Fn(usize) -> f64,
    ideal_waiting: impl Fn(usize) -> f64,
    weights: &RpWeights,
) -> f64 {
    let n = rs_profiles.len();
    let mut sum = 0.0;
    for i in 0..n {
        let rs = rotational_score(&rs_profiles[i], ideal_gap(i));
        let wpe = waiting_periods_eval(wpe_profiles[i].waiting_period_count, ideal_waiting(i));
        sum += rp_per_agent(rs, wpe, weights);
    }
    sum / n as f64
}

fn uniform_ideals(log: &EpisodeLog) -> (f64, f64) {
    let n = log.n() as f64;
    (n - 1.0, log.len() as f64 / n)
}

/// Mean per-agent RP with ideal gap `n - 1` and ideal waiting periods `ν / n`.
pub fn rp_system(log: &EpisodeLog, variant: RpVariant, weights: &RpWeights) -> Result<f64> {
    weights.validate()?;
    let rs_profiles = extract_all_profiles(log, variant.rs_kind());
    let wpe_profiles = if variant.wpe_kind() == variant.rs_kind() {
        rs_profiles.clone()
    } else {
        extract_all_profiles(log, variant.wpe_kind())
    };
    let (gap, waiting) = uniform_ideals(log);
    Ok(mean_rp(&rs_profiles, &wpe_profiles, |_| gap, |_| waiting, weights))
}

/// Exclusive-win RP with per-agent ideals from `priorities`. Uniform shares give
/// exactly [`rp_system`] with [`RpVariant::Excl`].
pub fn weighted_rp_system(log: &EpisodeLog, priorities: &PriorityVector, weights: &RpWeights) -> Result<f64> {
    weights.validate()?;
    let profiles = extract_all_profiles(log, WinEventKind::Exclusive);
    weighted_from_profiles(log, &profiles, priorities, weights)
}

fn weighted_from_profiles(
    log: &EpisodeLog,
    profiles: &[GapProfile],
    priorities: &PriorityVector,
    weights: &RpWeights,
) -> Result<f64> {
    if priorities.len() != log.n() {
        return Err(Error::LengthMismatch { expected: log.n(), got: priorities.len() });
    }
    if (0..log.n()).any(|i| priorities.ideal_gap(i) <= 0.0) {
        return Err(Error::InvalidParameter("a priority share of 1 leaves no ideal gap"));
    }
    let episodes = log.len();
    Ok(mean_rp(
        profiles,
        profiles,
        |i| priorities.ideal_gap(i),
        |i| priorities.ideal_waiting_periods(i, episodes),
        weights,
    ))
}

/// Every RP-family value of one log.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RpFamily {
    pub rs_excl: f64,
    pub rs_reach: f64,
    pub wpe_excl: f64,
    pub wpe_reach: f64,
    pub awe_excl: f64,
    pub awe_reach: f64,
    pub rp_excl: f64,
    pub rp_reach: f64,
    pub rp_rs_mxae: f64,
    pub rp_rs_mxax: f64,
    pub frp: f64,
    pub erp: Option<f64>,
}

impl RpFamily {
    pub fn rp(&self, variant: RpVariant) -> f64 {
        match variant {
            RpVariant::Excl => self.rp_excl,
            RpVariant::Reach => self.rp_reach,
            RpVariant::RsMxAe => self.rp_rs_mxae,
            RpVariant::RsMxAx => self.rp_rs_mxax,
        }
    }
}

/// Computes the whole family from one profile extraction per win-event kind.
pub fn rp_family(log: &EpisodeLog, weights: &RpWeights, priorities: Option<&PriorityVector>) -> Result<RpFamily> {
    weights.validate()?;
    let excl = extract_all_profiles(log, WinEventKind::Exclusive);
    let reach = extract_all_profiles(log, WinEventKind::Reach);
    let (gap, waiting) = uniform_ideals(log);
    let n = log.n() as f64;
    let mean = |f: &dyn Fn(usize) -> f64| (0..log.n()).map(f).sum::<f64>() / n;
    let rp = |rs: &[GapProfile], wpe: &[GapProfile]| mean_rp(rs, wpe, |_| gap, |_| waiting, weights);

    let rp_excl = rp(&excl, &excl);
    Ok(RpFamily {
        rs_excl: mean(&|i| rotational_score(&excl[i], gap)),
        rs_reach: mean(&|i| rotational_score(&reach[i], gap)),
        wpe_excl: mean(&|i| waiting_periods_eval(excl[i].waiting_period_count, waiting)),
        wpe_reach: mean(&|i| waiting_periods_eval(reach[i].waiting_period_count, waiting)),
        awe_excl: mean(&|i| awe_legacy(&excl[i], gap)),
        awe_reach: mean(&|i| awe_legacy(&reach[i], gap)),
        rp_excl,
        rp_reach: rp(&reach, &reach),
        rp_rs_mxae: rp(&reach, &excl),
        rp_rs_mxax: rp(&excl, &reach),
        frp: weighted_from_profiles(log, &excl, &PriorityVector::uniform(log.n())?, weights)?,
        erp: priorities.map(|p| weighted_from_profiles(log, &excl, p, weights)).transpose()?,
    })
}
