//! Full runs: a population of independent learners (or random players) over an
//! episode budget.
//!
//! Seeding: agent `i` draws from `ChaCha8Rng::seed_from_u64(seed)` switched to stream
//! `i`. Both generators are specified bit-for-bit by `rand_chacha`/`rand_core`, so a
//! `(spec, seed)` pair reproduces the same log on every platform.

use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::agents::{epsilon_at, q_update, random_policy_action, select_action, QLearnerParams, QTable};
use crate::env::{
    encode_state, run_episode, Action, ActionSource, Arena, EnvState, RewardScheme, StateKey, StateType, Transition,
};
use crate::log::EpisodeLog;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum PolicyKind {
    QLearning,
    Random,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationSpec {
    pub n: usize,
    pub episodes: usize,
    pub state_type: StateType,
    pub scheme: RewardScheme,
    pub policy: PolicyKind,
    pub seed: u64,
    pub arena: Arena,
    pub params: QLearnerParams,
}

/// Per-agent generator for `agent` under the master `seed`.
pub fn agent_rng(seed: u64, agent: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(agent as u64);
    rng
}

struct RandomPlayers {
    rngs: Vec<ChaCha8Rng>,
}

impl ActionSource for RandomPlayers {
    fn actions(&mut self, _step: usize, _state: &EnvState, out: &mut [Action]) {
        for (action, rng) in out.iter_mut().zip(&mut self.rngs) {
            *action = random_policy_action(rng);
        }
    }
}

struct Learners<'a> {
    tables: Vec<QTable>,
    rngs: Vec<ChaCha8Rng>,
    params: &'a QLearnerParams,
    state_type: StateType,
    eps: f64,
    current: Option<StateKey>,
}

impl ActionSource for Learners<'_> {
    fn actions(&mut self, _step: usize, state: &EnvState, out: &mut [Action]) {
        let key = encode_state(state, self.state_type);
        for ((action, q), rng) in out.iter_mut().zip(&self.tables).zip(&mut self.rngs) {
            *action = select_action(q, &key, self.eps, rng);
        }
        self.current = Some(key);
    }

    fn observe(&mut self, t: &Transition<'_>) {
        let key = self.current.take().expect("observe follows actions");
        let next = t.rewards.is_none().then(|| encode_state(t.after, self.state_type));
        for (i, q) in self.tables.iter_mut().enumerate() {
            let reward = t.rewards.map_or(0.0, |r| r[i]);
            q_update(q, &key, t.actions[i], reward, next.as_ref(), self.params);
        }
    }
}

/// Result of a run: the log plus the learners' final tables (empty for random play).
#[derive(Debug, Clone)]
pub struct Simulation {
    pub log: EpisodeLog,
    pub q_tables: Vec<QTable>,
}

pub fn simulate(spec: &SimulationSpec) -> Result<Simulation> {
    if spec.n < 2 {
        return Err(Error::TooFewAgents(spec.n));
    }
    if spec.episodes == 0 {
        return Err(Error::EmptyLog);
    }
    spec.params.validate()?;
    let rngs: Vec<_> = (0..spec.n).map(|i| agent_rng(spec.seed, i)).collect();
    let mut outcomes = Vec::with_capacity(spec.episodes);
    let mut previous = None;

    let q_tables = match spec.policy {
        PolicyKind::Random => {
            let mut players = RandomPlayers { rngs };
            for _ in 0..spec.episodes {
                let start = EnvState::home(spec.n, spec.state_type, previous);
                let outcome = run_episode(&spec.arena, start, &mut players, &spec.scheme);
                previous = outcome.solo_winner();
                outcomes.push(outcome);
            }
            Vec::new()
        }
        PolicyKind::QLearning => {
            let mut learners = Learners {
                tables: (0..spec.n).map(|_| QTable::new()).collect(),
                rngs,
                params: &spec.params,
                state_type: spec.state_type,
                eps: spec.params.eps_start,
                current: None,
            };
            for episode in 1..=spec.episodes {
                learners.eps = epsilon_at(episode, spec.episodes, &spec.params)?;
                let start = EnvState::home(spec.n, spec.state_type, previous);
                let outcome = run_episode(&spec.arena, start, &mut learners, &spec.scheme);
                previous = outcome.solo_winner();
                outcomes.push(outcome);
            }
            learners.tables
        }
    };
    Ok(Simulation { log: EpisodeLog::new(spec.n, outcomes)?, q_tables })
}
