//! Episode budgets scaled by state-space complexity.

use crate::{Error, Result};

pub const DEFAULT_BUDGET_BASE: u64 = 1000;

/// Fixed budget for random-policy baselines, independent of `n`.
pub const RANDOM_BASELINE_EPISODES: usize = 10_000;

/// Published budgets for `n = 2` and `n = 3`, which differ from the formula.
pub const SMALL_N_OVERRIDES: [(usize, usize); 2] = [(2, 4_000), (3, 9_441)];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum BudgetMode {
    /// Formula, with the published small-`n` overrides.
    #[default]
    Published,
    /// Formula only.
    FormulaOnly,
}

/// `B · (n/2)² · (1 + ln(n!/2!))`, unrounded.
pub fn episode_formula(n: usize, base: u64) -> Result<f64> {
    if n < 2 {
        return Err(Error::TooFewAgents(n));
    }
    let ln_ratio: f64 = (3..=n).map(|k| libm::log(k as f64)).sum();
    let half = n as f64 / 2.0;
    Ok(base as f64 * half * half * (1.0 + ln_ratio))
}

pub fn episode_budget(n: usize, base: u64, mode: BudgetMode) -> Result<usize> {
    let formula = libm::round(episode_formula(n, base)?) as usize;
    if mode == BudgetMode::Published && base == DEFAULT_BUDGET_BASE {
        if let Some(&(_, published)) = SMALL_N_OVERRIDES.iter().find(|(m, _)| *m == n) {
            return Ok(published);
        }
    }
    Ok(formula)
}
