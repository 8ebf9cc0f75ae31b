//! Episode dynamics of the multi-agent Battle of the Exes.
//!
//! Every agent starts an episode at its home cell, `distance` steps away from one
//! shared resource cell, and at each step either advances one cell or holds. The
//! episode ends at the first step on which at least one agent stands on the resource
//! cell (those agents are the reachers), or after `step_limit` steps with no reacher.

use alloc::vec;
use alloc::vec::Vec;

use crate::log::{EpisodeOutcome, DEFAULT_R_HIGH};
use crate::{Error, Result};

/// How simultaneous arrivals are paid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum RewardKind {
    /// Inverse linear fractional: `r_high / n` per tied reacher.
    #[cfg_attr(feature = "serde", serde(rename = "ILF"))]
    Ilf,
    /// Inverse quadratic fractional: `r_high / n²` per tied reacher.
    #[cfg_attr(feature = "serde", serde(rename = "IQF"))]
    Iqf,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RewardScheme {
    pub kind: RewardKind,
    pub r_high: f64,
}

impl RewardScheme {
    pub fn new(kind: RewardKind, r_high: f64) -> Result<Self> {
        if !(r_high.is_finite() && r_high > 0.0) {
            return Err(Error::InvalidParameter("r_high must be positive"));
        }
        Ok(Self { kind, r_high })
    }

    pub fn ilf() -> Self {
        Self { kind: RewardKind::Ilf, r_high: DEFAULT_R_HIGH }
    }

    pub fn iqf() -> Self {
        Self { kind: RewardKind::Iqf, r_high: DEFAULT_R_HIGH }
    }

    /// Reward of each tied reacher. Divides by the configured agent count, not the tie size.
    pub fn tie_reward(&self, n: usize) -> f64 {
        let n = n as f64;
        match self.kind {
            RewardKind::Ilf => self.r_high / n,
            RewardKind::Iqf => self.r_high / (n * n),
        }
    }

    /// Per-agent payout for an episode whose reachers are `reachers`.
    pub fn payout(&self, n: usize, reachers: &[usize]) -> Vec<f64> {
        let mut rewards = vec![0.0; n];
        let each = match reachers.len() {
            0 => return rewards,
            1 => self.r_high,
            _ => self.tie_reward(n),
        };
        for &a in reachers {
            rewards[a] = each;
        }
        rewards
    }
}

/// One-dimensional race geometry shared by all agents.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Arena {
    distance: u16,
    step_limit: usize,
}

impl Arena {
    pub const DEFAULT_DISTANCE: u16 = 3;
    pub const DEFAULT_STEP_LIMIT: usize = 6;

    pub fn new(distance: u16, step_limit: usize) -> Result<Self> {
        if distance == 0 {
            return Err(Error::InvalidParameter("arena distance must be at least 1"));
        }
        if step_limit < usize::from(distance) {
            return Err(Error::InvalidParameter("step limit must be at least the arena distance"));
        }
        Ok(Self { distance, step_limit })
    }

    pub fn distance(&self) -> u16 {
        self.distance
    }

    pub fn step_limit(&self) -> usize {
        self.step_limit
    }

    /// Number of distinct Type-B state keys: `(D+1)^n` positions times `n+1` flag
    /// patterns (no winner, or one of `n` solo winners).
    pub fn type_b_key_space(&self, n: usize) -> Option<u128> {
        let base = u128::from(self.distance) + 1;
        base.checked_pow(u32::try_from(n).ok()?)?.checked_mul(n as u128 + 1)
    }
}

impl Default for Arena {
    fn default() -> Self {
        Self { distance: Self::DEFAULT_DISTANCE, step_limit: Self::DEFAULT_STEP_LIMIT }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Action {
    Advance,
    Hold,
}

impl Action {
    pub const ALL: [Action; 2] = [Action::Advance, Action::Hold];

    pub fn index(self) -> usize {
        match self {
            Action::Advance => 0,
            Action::Hold => 1,
        }
    }
}

/// What agents observe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum StateType {
    /// Positions only.
    TypeA,
    /// Positions plus a flag per agent marking the previous episode's solo winner.
    TypeB,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnvState {
    pub positions: Vec<u16>,
    pub winner_flags: Option<Vec<bool>>,
}

impl EnvState {
    /// Everyone at home. Flags are only kept for [`StateType::TypeB`].
    pub fn home(n: usize, state_type: StateType, previous_solo_winner: Option<usize>) -> Self {
        let winner_flags = match state_type {
            StateType::TypeA => None,
            StateType::TypeB => Some(winner_flags(n, previous_solo_winner)),
        };
        Self { positions: vec![0; n], winner_flags }
    }

    pub fn n(&self) -> usize {
        self.positions.len()
    }
}

/// Flag vector with at most the previous solo winner set. Ties and empty episodes
/// clear every flag.
pub fn winner_flags(n: usize, previous_solo_winner: Option<usize>) -> Vec<bool> {
    (0..n).map(|i| Some(i) == previous_solo_winner).collect()
}

/// Hashable discrete observation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateKey(Vec<u16>);

impl StateKey {
    pub fn as_slice(&self) -> &[u16] {
        &self.0
    }
}

pub fn encode_state(env: &EnvState, state_type: StateType) -> StateKey {
    let mut key = env.positions.clone();
    if state_type == StateType::TypeB {
        let n = env.n();
        match &env.winner_flags {
            Some(flags) => key.extend(flags.iter().map(|&f| u16::from(f))),
            None => key.extend(core::iter::repeat_n(0, n)),
        }
    }
    StateKey(key)
}

/// One environment step as seen by a learner.
#[derive(Debug)]
pub struct Transition<'a> {
    pub step: usize,
    pub before: &'a EnvState,
    pub actions: &'a [Action],
    pub after: &'a EnvState,
    /// Per-agent rewards, present on the terminal step only.
    pub rewards: Option<&'a [f64]>,
}

/// Supplies one action per agent per step and optionally learns from the result.
pub trait ActionSource {
    fn actions(&mut self, step: usize, state: &EnvState, out: &mut [Action]);

    fn observe(&mut self, _transition: &Transition<'_>) {}
}

impl<F> ActionSource for F
where
    F: FnMut(usize, &EnvState, &mut [Action]),
{
    fn actions(&mut self, step: usize, state: &EnvState, out: &mut [Action]) {
        self(step, state, out)
    }
}

/// Plays one episode from `start` and returns its outcome. Steps are numbered from 1.
pub fn run_episode<S: ActionSource + ?Sized>(
    arena: &Arena,
    start: EnvState,
    source: &mut S,
    scheme: &RewardScheme,
) -> EpisodeOutcome {
    let n = start.n();
    let mut state = start;
    let mut actions = vec![Action::Hold; n];
    for step in 1..=arena.step_limit {
        source.actions(step, &state, &mut actions);
        let mut next = state.clone();
        for (pos, action) in next.positions.iter_mut().zip(&actions) {
            if *action == Action::Advance && *pos < arena.distance {
                *pos += 1;
            }
        }
        let reachers: Vec<usize> =
            next.positions.iter().enumerate().filter(|(_, &p)| p == arena.distance).map(|(i, _)| i).collect();
        let done = !reachers.is_empty() || step == arena.step_limit;
        if done {
            let rewards = scheme.payout(n, &reachers);
            source.observe(&Transition {
                step,
                before: &state,
                actions: &actions,
                after: &next,
                rewards: Some(&rewards),
            });
            return EpisodeOutcome::new(reachers, rewards).expect("payout only rewards reachers");
        }
        source.observe(&Transition { step, before: &state, actions: &actions, after: &next, rewards: None });
        state = next;
    }
    unreachable!("step_limit >= distance >= 1 guarantees termination")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scripted(plan: &'static [&'static [Action]]) -> impl FnMut(usize, &EnvState, &mut [Action]) {
        move |step, _state, out| {
            let row = plan[(step - 1).min(plan.len() - 1)];
            out.copy_from_slice(row);
        }
    }

    const A: Action = Action::Advance;
    const H: Action = Action::Hold;

    #[test]
    fn tie_rewards() {
        let arena = Arena::new(1, 1).unwrap();
        let ilf = run_episode(
            &arena,
            EnvState::home(2, StateType::TypeA, None),
            &mut scripted(&[&[A, A]]),
            &RewardScheme::ilf(),
        );
        assert_eq!(ilf.reachers(), [0, 1]);
        assert_eq!(ilf.rewards(), [50.0, 50.0]);
        let iqf = run_episode(
            &arena,
            EnvState::home(2, StateType::TypeA, None),
            &mut scripted(&[&[A, A]]),
            &RewardScheme::iqf(),
        );
        assert_eq!(iqf.rewards(), [25.0, 25.0]);
    }

    #[test]
    fn solo_winner_takes_r_high() {
        let arena = Arena::new(2, 4).unwrap();
        let out = run_episode(
            &arena,
            EnvState::home(3, StateType::TypeA, None),
            &mut scripted(&[&[H, A, H]]),
            &RewardScheme::ilf(),
        );
        assert_eq!(out.solo_winner(), Some(1));
        assert_eq!(out.rewards(), [0.0, 100.0, 0.0]);
    }

    #[test]
    fn nobody_reaches_within_limit() {
        let arena = Arena::new(3, 4).unwrap();
        let out = run_episode(
            &arena,
            EnvState::home(2, StateType::TypeA, None),
            &mut scripted(&[&[H, H]]),
            &RewardScheme::ilf(),
        );
        assert!(out.reachers().is_empty());
        assert_eq!(out.rewards(), [0.0, 0.0]);
    }

    #[test]
    fn episode_stops_at_first_arrival() {
        // agent 0 arrives at step 2 while agent 1 would arrive at step 3
        let arena = Arena::new(2, 6).unwrap();
        let mut steps = 0;
        let mut source = |step: usize, _: &EnvState, out: &mut [Action]| {
            steps = step;
            out[0] = A;
            out[1] = if step == 1 { H } else { A };
        };
        let out = run_episode(&arena, EnvState::home(2, StateType::TypeA, None), &mut source, &RewardScheme::ilf());
        assert_eq!(out.solo_winner(), Some(0));
        assert_eq!(steps, 2);
    }

    #[test]
    fn keys() {
        let env = EnvState { positions: vec![0, 1], winner_flags: Some(vec![true, false]) };
        assert_eq!(encode_state(&env, StateType::TypeA).as_slice(), [0, 1]);
        assert_eq!(encode_state(&env, StateType::TypeB).as_slice(), [0, 1, 1, 0]);
        let home = EnvState::home(2, StateType::TypeB, None);
        assert_eq!(encode_state(&home, StateType::TypeB).as_slice(), [0, 0, 0, 0]);
    }

    #[test]
    fn type_b_key_space_matches_enumeration() {
        let arena = Arena::new(2, 2).unwrap();
        for n in 2..=4usize {
            let mut keys = alloc::collections::BTreeSet::new();
            let cells = usize::from(arena.distance()) + 1;
            for code in 0..cells.pow(n as u32) {
                let positions: Vec<u16> = (0..n).map(|i| ((code / cells.pow(i as u32)) % cells) as u16).collect();
                for prev in core::iter::once(None).chain((0..n).map(Some)) {
                    let env = EnvState { positions: positions.clone(), winner_flags: Some(winner_flags(n, prev)) };
                    keys.insert(encode_state(&env, StateType::TypeB));
                }
            }
            assert_eq!(keys.len() as u128, arena.type_b_key_space(n).unwrap());
        }
    }

    #[test]
    fn arena_validation() {
        assert!(Arena::new(0, 3).is_err());
        assert!(Arena::new(3, 2).is_err());
        assert!(RewardScheme::new(RewardKind::Ilf, 0.0).is_err());
    }
}
