//! Experiment configuration as stored in JSON files.

use std::path::Path;

use serde::{Deserialize, Serialize};
use tfl_core::agents::QLearnerParams;
use tfl_core::budget::{episode_budget, BudgetMode, DEFAULT_BUDGET_BASE, RANDOM_BASELINE_EPISODES};
use tfl_core::env::{Arena, RewardKind, RewardScheme, StateType};
use tfl_core::log::DEFAULT_R_HIGH;
use tfl_core::metrics::rp::{PriorityVector, RpWeights};
use tfl_core::sim::{PolicyKind, SimulationSpec};

use crate::error::{io_err, json_err, Error, Result};

fn default_distance() -> u16 {
    Arena::DEFAULT_DISTANCE
}

fn default_step_limit() -> usize {
    Arena::DEFAULT_STEP_LIMIT
}

fn default_r_high() -> f64 {
    DEFAULT_R_HIGH
}

/// One run. The seed is mandatory: nothing draws from ambient entropy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub n: usize,
    /// Overrides the budget: the scaling formula for Q-learning, 10,000 for random play.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub episodes: Option<usize>,
    pub state_type: StateType,
    pub reward: RewardKind,
    pub policy: PolicyKind,
    pub seed: u64,
    #[serde(default)]
    pub rp_weights: RpWeights,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub priorities: Option<Vec<f64>>,
    #[serde(default = "default_distance")]
    pub arena_distance: u16,
    #[serde(default = "default_step_limit")]
    pub step_limit: usize,
    #[serde(default = "default_r_high")]
    pub r_high: f64,
    #[serde(default)]
    pub q_params: QLearnerParams,
}

impl ExperimentConfig {
    /// Defaults everywhere except the identifying fields.
    pub fn new(n: usize, state_type: StateType, reward: RewardKind, policy: PolicyKind, seed: u64) -> Self {
        Self {
            n,
            episodes: None,
            state_type,
            reward,
            policy,
            seed,
            rp_weights: RpWeights::default(),
            priorities: None,
            arena_distance: default_distance(),
            step_limit: default_step_limit(),
            r_high: default_r_high(),
            q_params: QLearnerParams::default(),
        }
    }

    pub fn with_episodes(mut self, episodes: usize) -> Self {
        self.episodes = Some(episodes);
        self
    }

    /// Episode count this config will run.
    pub fn resolved_episodes(&self, mode: BudgetMode) -> Result<usize> {
        if let Some(e) = self.episodes {
            return Ok(e);
        }
        Ok(match self.policy {
            PolicyKind::Random => RANDOM_BASELINE_EPISODES,
            PolicyKind::QLearning => episode_budget(self.n, DEFAULT_BUDGET_BASE, mode)?,
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::Config(format!("n must be at least 2, got {}", self.n)));
        }
        if self.episodes == Some(0) {
            return Err(Error::Config("episodes must be positive".into()));
        }
        self.rp_weights.validate()?;
        self.q_params.validate()?;
        self.arena()?;
        self.scheme()?;
        if let Some(p) = self.priority_vector()? {
            if p.len() != self.n {
                return Err(Error::Config(format!("{} priorities for {} agents", p.len(), self.n)));
            }
        }
        Ok(())
    }

    pub fn arena(&self) -> Result<Arena> {
        Ok(Arena::new(self.arena_distance, self.step_limit)?)
    }

    pub fn scheme(&self) -> Result<RewardScheme> {
        Ok(RewardScheme::new(self.reward, self.r_high)?)
    }

    pub fn priority_vector(&self) -> Result<Option<PriorityVector>> {
        Ok(self.priorities.clone().map(PriorityVector::from_shares).transpose()?)
    }

    pub fn simulation_spec(&self, mode: BudgetMode) -> Result<SimulationSpec> {
        self.validate()?;
        Ok(SimulationSpec {
            n: self.n,
            episodes: self.resolved_episodes(mode)?,
            state_type: self.state_type,
            scheme: self.scheme()?,
            policy: self.policy,
            seed: self.seed,
            arena: self.arena()?,
            params: self.q_params,
        })
    }

    /// Short file-name-safe description, e.g. `ql_typea_ilf_n3_s7`.
    pub fn label(&self) -> String {
        let policy = match self.policy {
            PolicyKind::QLearning => "ql",
            PolicyKind::Random => "rand",
        };
        let state = match self.state_type {
            StateType::TypeA => "typea",
            StateType::TypeB => "typeb",
        };
        format!("{policy}_{state}_{}_n{}_s{}", reward_label(self.reward).to_lowercase(), self.n, self.seed)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(io_err(path))?;
        serde_json::from_str(&text).map_err(json_err(path))
    }
}

pub fn reward_label(kind: RewardKind) -> &'static str {
    match kind {
        RewardKind::Ilf => "ILF",
        RewardKind::Iqf => "IQF",
    }
}

pub fn state_label(kind: StateType) -> &'static str {
    match kind {
        StateType::TypeA => "TypeA",
        StateType::TypeB => "TypeB",
    }
}

pub fn policy_label(kind: PolicyKind) -> &'static str {
    match kind {
        PolicyKind::QLearning => "QLearning",
        PolicyKind::Random => "Random",
    }
}

/// Reads either one config object or a list of them.
pub fn load_configs(path: &Path) -> Result<Vec<ExperimentConfig>> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum OneOrMany {
        One(Box<ExperimentConfig>),
        Many(Vec<ExperimentConfig>),
    }
    let text = std::fs::read_to_string(path).map_err(io_err(path))?;
    Ok(match serde_json::from_str(&text).map_err(json_err(path))? {
        OneOrMany::One(c) => vec![*c],
        OneOrMany::Many(v) => v,
    })
}
