//! Reference implementations and log generators shared by the integration tests.
//!
//! The oracles deliberately take the slow, obvious route: every ALT window is rebuilt
//! with ordered sets, ranks come from pairwise counting.

#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use tfl_core::log::{EpisodeLog, EpisodeOutcome};
use tfl_core::metrics::alt::AltVariant;

pub const R_HIGH: f64 = 100.0;

/// One outcome drawn from a mix of empty, solo and tie episodes.
pub fn random_outcome(rng: &mut ChaCha8Rng, n: usize) -> EpisodeOutcome {
    let roll: f64 = rng.gen();
    if roll < 0.15 {
        return EpisodeOutcome::empty(n);
    }
    if roll < 0.6 {
        return EpisodeOutcome::solo(n, rng.gen_range(0..n), R_HIGH).unwrap();
    }
    let mut reachers: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
    while reachers.len() < 2 {
        let a = rng.gen_range(0..n);
        if !reachers.contains(&a) {
            reachers.push(a);
        }
    }
    let mut rewards = vec![0.0; n];
    for &a in &reachers {
        rewards[a] = R_HIGH / n as f64;
    }
    EpisodeOutcome::new(reachers, rewards).unwrap()
}

pub fn random_log(rng: &mut ChaCha8Rng, n: usize, episodes: usize) -> EpisodeLog {
    EpisodeLog::new(n, (0..episodes).map(|_| random_outcome(rng, n)).collect()).unwrap()
}

/// Uniformly random solo winner every episode.
pub fn random_solo_log(rng: &mut ChaCha8Rng, n: usize, episodes: usize) -> EpisodeLog {
    EpisodeLog::new(n, (0..episodes).map(|_| EpisodeOutcome::solo(n, rng.gen_range(0..n), R_HIGH).unwrap()).collect())
        .unwrap()
}

/// Batch score of one window, recomputed from scratch.
pub fn naive_window_score(window: &[EpisodeOutcome], n: usize, variant: AltVariant) -> f64 {
    let mut reached = BTreeSet::new();
    let mut solo_winners = BTreeSet::new();
    let mut arrivals = 0usize;
    let mut solo_episodes = 0usize;
    let mut credit = 0usize;
    for o in window {
        let y = o.reachers().len();
        arrivals += y;
        if y > 0 {
            credit += n - y;
        }
        reached.extend(o.reachers().iter().copied());
        if y == 1 {
            solo_episodes += 1;
            solo_winners.insert(o.reachers()[0]);
        }
    }
    let nf = n as f64;
    match variant {
        AltVariant::Calt => credit as f64 / (n * (n - 1)) as f64,
        AltVariant::Ealt => solo_episodes as f64 / nf,
        AltVariant::Aalt => solo_winners.len() as f64 / nf,
        AltVariant::Falt => {
            if arrivals == 0 {
                0.0
            } else {
                reached.len() as f64 / arrivals as f64
            }
        }
        AltVariant::QFalt => {
            let x = reached.len() as f64 / nf;
            x * x
        }
        AltVariant::QEalt => {
            let x = solo_episodes as f64 / nf;
            x * x
        }
    }
}

/// Mean batch score over every width-`n`, stride-1 window.
pub fn naive_alt(log: &EpisodeLog, variant: AltVariant) -> f64 {
    let n = log.n();
    let outcomes = log.outcomes();
    let windows = outcomes.len() - n + 1;
    let mut sum = 0.0;
    for j in 0..windows {
        sum += naive_window_score(&outcomes[j..j + n], n, variant);
    }
    sum / windows as f64
}

/// Rank = (number strictly below) + (number equal + 1) / 2.
pub fn brute_ranks(values: &[f64]) -> Vec<f64> {
    values
        .iter()
        .map(|&v| {
            let below = values.iter().filter(|&&u| u < v).count() as f64;
            let equal = values.iter().filter(|&&u| u == v).count() as f64;
            below + (equal + 1.0) / 2.0
        })
        .collect()
}

/// Pearson from raw moment sums.
pub fn brute_pearson(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let sx: f64 = xs.iter().sum();
    let sy: f64 = ys.iter().sum();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let syy: f64 = ys.iter().map(|y| y * y).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| x * y).sum();
    (n * sxy - sx * sy) / ((n * sxx - sx * sx).sqrt() * (n * syy - sy * sy).sqrt())
}

pub fn brute_spearman(xs: &[f64], ys: &[f64]) -> f64 {
    brute_pearson(&brute_ranks(xs), &brute_ranks(ys))
}
