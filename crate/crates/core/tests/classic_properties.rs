mod support;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use support::random_log;
use tfl_core::log::{EpisodeLog, EpisodeOutcome};
use tfl_core::metrics::classic::{efficiency, reward_fairness, RewardTotals};

fn scaled(log: &EpisodeLog, k: f64) -> EpisodeLog {
    EpisodeLog::new(
        log.n(),
        log.outcomes()
            .iter()
            .map(|o| EpisodeOutcome::new(o.reachers().to_vec(), o.rewards().iter().map(|r| r * k).collect()).unwrap())
            .collect(),
    )
    .unwrap()
}

proptest! {
    #[test]
    fn scale_invariant(seed in any::<u64>(), n in 2usize..=6, episodes in 1usize..100, k in 0.01f64..100.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let log = random_log(&mut rng, n, episodes);
        let big = scaled(&log, k);
        let t1 = RewardTotals::from_log(&log, 100.0);
        let t2 = RewardTotals::from_log(&big, 100.0 * k);
        let (e1, e2) = (efficiency(&t1).unwrap(), efficiency(&t2).unwrap());
        prop_assert!((e1 - e2).abs() < 1e-12);
        match (reward_fairness(&t1), reward_fairness(&t2)) {
            (Some(a), Some(b)) => prop_assert!((a - b).abs() < 1e-12),
            (a, b) => prop_assert_eq!(a.is_none(), b.is_none()),
        }
    }

    #[test]
    fn bounded(seed in any::<u64>(), n in 2usize..=6, episodes in 1usize..100) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = RewardTotals::from_log(&random_log(&mut rng, n, episodes), 100.0);
        let e = efficiency(&t).unwrap();
        prop_assert!((0.0..=1.0 + 1e-12).contains(&e));
        if let Some(rf) = reward_fairness(&t) {
            prop_assert!(rf >= 1.0 / n as f64 - 1e-12 && rf <= 1.0 + 1e-12);
        }
    }
}
