//! Episode history data model and win-event extraction.
//!
//! Episode indices exposed by this module are 1-based (`1..=ν`); agent indices are
//! 0-based (`0..n`).

use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Reward paid to a solo winner unless configured otherwise.
pub const DEFAULT_R_HIGH: f64 = 100.0;

/// What happened in one episode.
#[derive(Debug, Clone, PartialEq)]
pub struct EpisodeOutcome {
    reachers: Vec<usize>,
    solo_winner: Option<usize>,
    rewards: Vec<f64>,
}

impl EpisodeOutcome {
    /// Builds an outcome from the agents that reached the terminal and the per-agent
    /// rewards. `rewards.len()` is the agent count. Reachers are sorted and deduplicated.
    pub fn new(mut reachers: Vec<usize>, rewards: Vec<f64>) -> Result<Self> {
        let n = rewards.len();
        reachers.sort_unstable();
        reachers.dedup();
        if let Some(&agent) = reachers.iter().find(|&&a| a >= n) {
            return Err(Error::AgentOutOfRange { agent, n });
        }
        for (agent, &reward) in rewards.iter().enumerate() {
            if !reward.is_finite() || reward < 0.0 {
                return Err(Error::InvalidParameter("rewards must be finite and non-negative"));
            }
            if reward != 0.0 && reachers.binary_search(&agent).is_err() {
                return Err(Error::RewardWithoutReach { agent, reward });
            }
        }
        let solo_winner = match reachers.as_slice() {
            [only] => Some(*only),
            _ => None,
        };
        Ok(Self { reachers, solo_winner, rewards })
    }

    /// An episode in which `winner` arrived alone and collected `reward`.
    pub fn solo(n: usize, winner: usize, reward: f64) -> Result<Self> {
        if winner >= n {
            return Err(Error::AgentOutOfRange { agent: winner, n });
        }
        let mut rewards = vec![0.0; n];
        rewards[winner] = reward;
        Self::new(vec![winner], rewards)
    }

    /// An episode in which nobody reached the terminal.
    pub fn empty(n: usize) -> Self {
        Self { reachers: Vec::new(), solo_winner: None, rewards: vec![0.0; n] }
    }

    pub fn reachers(&self) -> &[usize] {
        &self.reachers
    }

    pub fn solo_winner(&self) -> Option<usize> {
        self.solo_winner
    }

    pub fn rewards(&self) -> &[f64] {
        &self.rewards
    }

    pub fn reached(&self, agent: usize) -> bool {
        self.reachers.binary_search(&agent).is_ok()
    }

    /// Whether `agent` counts as a winner of this episode under `kind`.
    pub fn is_win(&self, agent: usize, kind: WinEventKind) -> bool {
        match kind {
            WinEventKind::Exclusive => self.solo_winner == Some(agent),
            WinEventKind::Reach => self.reached(agent),
        }
    }

    pub fn total_reward(&self) -> f64 {
        self.rewards.iter().sum()
    }
}

/// Ordered episode outcomes of one run over `n` agents.
#[derive(Debug, Clone, PartialEq)]
pub struct EpisodeLog {
    n: usize,
    outcomes: Vec<EpisodeOutcome>,
}

impl EpisodeLog {
    pub fn new(n: usize, outcomes: Vec<EpisodeOutcome>) -> Result<Self> {
        if n < 2 {
            return Err(Error::TooFewAgents(n));
        }
        if outcomes.is_empty() {
            return Err(Error::EmptyLog);
        }
        for outcome in &outcomes {
            if outcome.rewards.len() != n {
                return Err(Error::LengthMismatch { expected: n, got: outcome.rewards.len() });
            }
        }
        Ok(Self { n, outcomes })
    }

    /// Appends one episode at the end of the history.
    pub fn push(&mut self, outcome: EpisodeOutcome) -> Result<()> {
        if outcome.rewards.len() != self.n {
            return Err(Error::LengthMismatch { expected: self.n, got: outcome.rewards.len() });
        }
        self.outcomes.push(outcome);
        Ok(())
    }

    /// Agent count.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Episode count ν.
    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }

    pub fn outcomes(&self) -> &[EpisodeOutcome] {
        &self.outcomes
    }

    /// Outcome of the 1-based `episode`.
    pub fn episode(&self, episode: usize) -> Option<&EpisodeOutcome> {
        episode.checked_sub(1).and_then(|i| self.outcomes.get(i))
    }

    /// Solo winner of every episode, in order.
    pub fn solo_winners(&self) -> impl Iterator<Item = Option<usize>> + '_ {
        self.outcomes.iter().map(EpisodeOutcome::solo_winner)
    }

    /// Cumulative reward per agent.
    pub fn reward_totals(&self) -> Vec<f64> {
        let mut totals = vec![0.0; self.n];
        for outcome in &self.outcomes {
            for (total, reward) in totals.iter_mut().zip(&outcome.rewards) {
                *total += reward;
            }
        }
        totals
    }
}

/// Which episodes count as a win for an agent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum WinEventKind {
    /// The agent was the only one to reach the terminal.
    Exclusive,
    /// The agent reached the terminal, alone or tied.
    Reach,
}

/// Per-agent win timeline under one [`WinEventKind`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapProfile {
    pub agent: usize,
    /// Sorted 1-based episode indices of the agent's wins.
    pub win_episodes: Vec<usize>,
    /// Episodes strictly between consecutive wins.
    pub gaps: Vec<usize>,
    /// Number of non-empty waiting periods. The run before the first win and the run
    /// after the last one are joined into a single wrap-around period, so under
    /// perfect alternation every agent has exactly `ν / n`.
    pub waiting_period_count: usize,
    pub win_count: usize,
}

impl GapProfile {
    /// Builds the profile from sorted 1-based win episodes over a log of `episodes`
    /// episodes.
    pub fn from_wins(agent: usize, win_episodes: Vec<usize>, episodes: usize) -> Self {
        debug_assert!(win_episodes.windows(2).all(|w| w[0] < w[1]));
        let gaps: Vec<usize> = win_episodes.windows(2).map(|w| w[1] - w[0] - 1).collect();
        let waiting_period_count = match (win_episodes.first(), win_episodes.last()) {
            (Some(&first), Some(&last)) => {
                let boundary = (first - 1) + (episodes - last);
                gaps.iter().filter(|&&g| g > 0).count() + usize::from(boundary > 0)
            }
            _ => usize::from(episodes > 0),
        };
        Self { agent, win_count: win_episodes.len(), win_episodes, gaps, waiting_period_count }
    }

    /// Mean inter-win gap; `None` with fewer than two wins.
    pub fn mean_gap(&self) -> Option<f64> {
        if self.gaps.is_empty() {
            return None;
        }
        let sum: usize = self.gaps.iter().sum();
        Some(sum as f64 / self.gaps.len() as f64)
    }
}

/// Gap profile of one agent.
pub fn extract_gap_profile(log: &EpisodeLog, agent: usize, kind: WinEventKind) -> Result<GapProfile> {
    if agent >= log.n {
        return Err(Error::AgentOutOfRange { agent, n: log.n });
    }
    let wins = log.outcomes.iter().enumerate().filter(|(_, o)| o.is_win(agent, kind)).map(|(i, _)| i + 1).collect();
    Ok(GapProfile::from_wins(agent, wins, log.len()))
}

/// Gap profiles of every agent, collected in one forward pass over the log.
pub fn extract_all_profiles(log: &EpisodeLog, kind: WinEventKind) -> Vec<GapProfile> {
    let mut wins: Vec<Vec<usize>> = vec![Vec::new(); log.n];
    for (i, outcome) in log.outcomes.iter().enumerate() {
        match kind {
            WinEventKind::Exclusive => {
                if let Some(w) = outcome.solo_winner {
                    wins[w].push(i + 1);
                }
            }
            WinEventKind::Reach => {
                for &a in &outcome.reachers {
                    wins[a].push(i + 1);
                }
            }
        }
    }
    wins.into_iter().enumerate().map(|(agent, w)| GapProfile::from_wins(agent, w, log.len())).collect()
}

/// Perfect alternation: winners cycle `0, 1, …, n-1` for `periods` rounds, each a solo
/// arrival paid [`DEFAULT_R_HIGH`].
pub fn make_pa_log(n: usize, periods: usize) -> Result<EpisodeLog> {
    if n < 2 {
        return Err(Error::TooFewAgents(n));
    }
    if periods == 0 {
        return Err(Error::EmptyLog);
    }
    let outcomes =
        (0..n * periods).map(|t| EpisodeOutcome::solo(n, t % n, DEFAULT_R_HIGH)).collect::<Result<Vec<_>>>()?;
    EpisodeLog::new(n, outcomes)
}
