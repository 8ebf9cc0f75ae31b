mod support;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use support::{naive_alt, naive_window_score, random_log};
use tfl_core::log::{make_pa_log, EpisodeLog};
use tfl_core::metrics::alt::{alt_family, alt_family_windowed, alt_metric, alt_metric_windowed, AltVariant};

fn check_against_oracle(log: &EpisodeLog) {
    let family = alt_family(log).unwrap();
    let windowed = alt_family_windowed(log).unwrap();
    for v in AltVariant::ALL {
        let expected = naive_alt(log, v);
        assert_eq!(alt_metric(log, v).unwrap().to_bits(), expected.to_bits(), "{v:?} incremental");
        assert_eq!(alt_metric_windowed(log, v).unwrap().to_bits(), expected.to_bits(), "{v:?} windowed");
        assert_eq!(family.get(v).to_bits(), expected.to_bits(), "{v:?} family");
        assert_eq!(windowed.get(v).to_bits(), expected.to_bits(), "{v:?} windowed family");
    }
}

#[test]
fn exactly_n_episodes_is_one_window() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in 2..=6 {
        let log = random_log(&mut rng, n, n);
        check_against_oracle(&log);
        for v in AltVariant::ALL {
            assert_eq!(alt_metric(&log, v).unwrap(), naive_window_score(log.outcomes(), n, v));
        }
    }
}

#[test]
fn pa_logs_match_oracle() {
    for n in 2..=8 {
        check_against_oracle(&make_pa_log(n, 7).unwrap());
    }
}

proptest! {
    #[test]
    fn kernels_match_oracle(seed in any::<u64>(), n in 2usize..=6, extra in 0usize..120) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let log = random_log(&mut rng, n, n + extra);
        check_against_oracle(&log);
    }

    #[test]
    fn scores_stay_in_unit_interval(seed in any::<u64>(), n in 2usize..=6, extra in 0usize..60) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = alt_family(&random_log(&mut rng, n, n + extra)).unwrap();
        for v in AltVariant::ALL {
            prop_assert!((0.0..=1.0).contains(&s.get(v)), "{:?} = {}", v, s.get(v));
        }
    }

    #[test]
    fn calt_invariant_under_agent_relabelling(seed in any::<u64>(), n in 2usize..=6, extra in 0usize..60, shift in 1usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let log = random_log(&mut rng, n, n + extra);
        let relabelled = EpisodeLog::new(
            n,
            log.outcomes()
                .iter()
                .map(|o| {
                    let reachers: Vec<usize> = o.reachers().iter().map(|&a| (a + shift) % n).collect();
                    let mut rewards = vec![0.0; n];
                    for (a, &r) in o.rewards().iter().enumerate() {
                        rewards[(a + shift) % n] = r;
                    }
                    tfl_core::log::EpisodeOutcome::new(reachers, rewards).unwrap()
                })
                .collect(),
        )
        .unwrap();
        let a = alt_family(&log).unwrap();
        let b = alt_family(&relabelled).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn qealt_squares_ealt_per_window(seed in any::<u64>(), n in 2usize..=6, extra in 0usize..40) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let log = random_log(&mut rng, n, n + extra);
        for window in log.outcomes().windows(n) {
            let e = naive_window_score(window, n, AltVariant::Ealt);
            let q = naive_window_score(window, n, AltVariant::QEalt);
            prop_assert_eq!(q, e * e);
        }
        // the window mean of squares dominates the square of the mean
        let s = alt_family(&log).unwrap();
        prop_assert!(s.qealt >= s.ealt * s.ealt - 1e-12);
    }
}
