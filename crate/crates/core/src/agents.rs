//! Independent tabular Q-learners and the uniform random baseline.

use hashbrown::HashMap;
use rand::Rng;

use crate::env::{Action, StateKey};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct QLearnerParams {
    pub alpha_lr: f64,
    pub gamma: f64,
    pub eps_start: f64,
    pub eps_end: f64,
    /// Fraction of the episode budget over which ε decays linearly.
    pub eps_decay_fraction: f64,
}

impl Default for QLearnerParams {
    fn default() -> Self {
        Self { alpha_lr: 0.3, gamma: 0.999, eps_start: 0.9, eps_end: 0.004, eps_decay_fraction: 0.75 }
    }
}

impl QLearnerParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha_lr > 0.0 && self.alpha_lr <= 1.0) {
            return Err(Error::InvalidParameter("alpha_lr must lie in (0, 1]"));
        }
        if !(self.gamma >= 0.0 && self.gamma < 1.0) {
            return Err(Error::InvalidParameter("gamma must lie in [0, 1)"));
        }
        if !(self.eps_start <= 1.0 && self.eps_start >= self.eps_end && self.eps_end >= 0.0) {
            return Err(Error::InvalidParameter("need 1 >= eps_start >= eps_end >= 0"));
        }
        if !(self.eps_decay_fraction > 0.0 && self.eps_decay_fraction <= 1.0) {
            return Err(Error::InvalidParameter("eps_decay_fraction must lie in (0, 1]"));
        }
        Ok(())
    }

    /// Last episode of the decay window, `⌈fraction · budget⌉` (at least 1).
    pub fn decay_end(&self, budget: usize) -> usize {
        (libm::ceil(self.eps_decay_fraction * budget as f64) as usize).max(1)
    }
}

/// Exploration rate for the 1-based `episode`: linear from `eps_start` at episode 1 to
/// `eps_end` at the end of the decay window, flat afterwards.
pub fn epsilon_at(episode: usize, budget: usize, params: &QLearnerParams) -> Result<f64> {
    if episode == 0 || episode > budget {
        return Err(Error::EpisodeOutOfRange { episode, budget });
    }
    let end = params.decay_end(budget);
    if episode == 1 {
        return Ok(params.eps_start);
    }
    if episode >= end {
        return Ok(params.eps_end);
    }
    let progress = (episode - 1) as f64 / (end - 1) as f64;
    Ok(params.eps_start + (params.eps_end - params.eps_start) * progress)
}

/// Action values of one agent; unseen pairs read as 0.
#[derive(Debug, Clone, Default)]
pub struct QTable {
    values: HashMap<StateKey, [f64; 2]>,
}

impl QTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, state: &StateKey, action: Action) -> f64 {
        self.values.get(state).map_or(0.0, |row| row[action.index()])
    }

    pub fn set(&mut self, state: &StateKey, action: Action, value: f64) {
        self.row_mut(state)[action.index()] = value;
    }

    pub fn max_value(&self, state: &StateKey) -> f64 {
        self.values.get(state).map_or(0.0, |row| row[0].max(row[1]))
    }

    /// Number of states with a stored row.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.values.values().flat_map(|row| row.iter().copied())
    }

    fn row_mut(&mut self, state: &StateKey) -> &mut [f64; 2] {
        if !self.values.contains_key(state) {
            self.values.insert(state.clone(), [0.0; 2]);
        }
        self.values.get_mut(state).expect("row inserted above")
    }
}

/// One tabular Q-learning step. `next = None` marks a terminal transition, whose
/// bootstrap value is 0.
pub fn q_update(
    q: &mut QTable,
    state: &StateKey,
    action: Action,
    reward: f64,
    next: Option<&StateKey>,
    params: &QLearnerParams,
) {
    let bootstrap = next.map_or(0.0, |s| q.max_value(s));
    let current = q.get(state, action);
    let target = reward + params.gamma * bootstrap;
    q.set(state, action, current + params.alpha_lr * (target - current));
}

/// ε-greedy selection with uniformly random tie-breaking among greedy actions.
pub fn select_action<R: Rng + ?Sized>(q: &QTable, state: &StateKey, eps: f64, rng: &mut R) -> Action {
    if rng.gen::<f64>() < eps {
        return random_policy_action(rng);
    }
    let advance = q.get(state, Action::Advance);
    let hold = q.get(state, Action::Hold);
    if advance > hold {
        Action::Advance
    } else if hold > advance {
        Action::Hold
    } else {
        random_policy_action(rng)
    }
}

pub fn random_policy_action<R: Rng + ?Sized>(rng: &mut R) -> Action {
    if rng.gen::<bool>() {
        Action::Advance
    } else {
        Action::Hold
    }
}
