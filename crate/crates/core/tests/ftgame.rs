//! The online FT game: exact forcing counts and certificates checked by bitmask enumeration.

use cft_spanner::colorset::ColorSet;
use cft_spanner::ftgame::{bob_forcing, check_certificate, park_bound, play, Strategy, GAME_BUDGET};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn choose(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn mask(s: &ColorSet) -> u32 {
    s.iter().fold(0, |m, c| m | (1 << c))
}

/// Every F of at most f colors sparing a presented set spares a kept one.
fn oracle_certificate(universe: u32, all: &[ColorSet], kept: &[ColorSet], f: usize) -> bool {
    let all: Vec<u32> = all.iter().map(mask).collect();
    let kept: Vec<u32> = kept.iter().map(mask).collect();
    (0u32..1 << universe)
        .filter(|fm| fm.count_ones() as usize <= f)
        .all(|fm| !all.iter().any(|a| a & fm == 0) || kept.iter().any(|q| q & fm == 0))
}

#[test]
fn forcing_stream_is_all_k_subsets() {
    for f in 1..=4 {
        for k in 1..=4 {
            let (u, sets) = bob_forcing(f, k);
            assert_eq!(u as usize, f + k);
            assert_eq!(sets.len() as u64, choose((f + k) as u64, k as u64));
            assert!(sets.windows(2).all(|w| w[0] < w[1]));
            assert!(sets.iter().all(|s| s.len() == k));
        }
    }
}

#[test]
fn optimal_alice_keeps_exactly_the_binomial_against_forcing() {
    for f in 1..8usize {
        for k in 1..=8 - f {
            let (u, sets) = bob_forcing(f, k);
            let g = play(u, f, k, Strategy::Optimal, &sets).unwrap();
            assert_eq!(g.kept().len() as u64, choose((f + k) as u64, k as u64), "f={f} k={k}");
            assert!(oracle_certificate(u, g.all(), g.kept(), f));
        }
    }
}

#[test]
fn park_alice_stays_within_its_bound() {
    for f in 1..8usize {
        for k in 1..=8 - f {
            let (u, sets) = bob_forcing(f, k);
            let g = play(u, f, k, Strategy::Park, &sets).unwrap();
            assert!(g.kept().len() as u128 <= park_bound(f, k));
            assert_eq!(park_bound(f, k), 2 * (2 * f as u128).pow(k as u32));
            assert!(oracle_certificate(u, g.all(), g.kept(), f), "f={f} k={k}");
            let s = g.summary(None);
            assert!(s.max_link_updates <= 1 << k);
        }
    }
}

#[test]
fn random_streams_keep_valid_certificates() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..300 {
        let universe = rng.gen_range(2..=8u32);
        let f = rng.gen_range(1..=3usize);
        let k = rng.gen_range(1..=3usize);
        let sets: Vec<ColorSet> = (0..rng.gen_range(1..40))
            .map(|_| (0..rng.gen_range(0..=k)).map(|_| rng.gen_range(0..universe)).collect())
            .collect();
        for strategy in [Strategy::Optimal, Strategy::Park] {
            let g = play(universe, f, k, strategy, &sets).unwrap();
            assert!(oracle_certificate(universe, g.all(), g.kept(), f));
            assert!(check_certificate(universe, g.all(), g.kept(), f, GAME_BUDGET).unwrap());
            if strategy == Strategy::Optimal {
                // The set-pair inequality caps any optimal certificate.
                assert!(g.kept().len() as u64 <= choose((f + k) as u64, k as u64));
            } else {
                assert!(g.kept().len() as u128 <= park_bound(f, k));
            }
        }
    }
}

#[test]
fn certificate_check_agrees_with_oracle_on_arbitrary_subsets() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..500 {
        let universe = rng.gen_range(1..=7u32);
        let f = rng.gen_range(0..=3usize);
        let all: Vec<ColorSet> = (0..rng.gen_range(0..8))
            .map(|_| (0..rng.gen_range(0..=3)).map(|_| rng.gen_range(0..universe)).collect())
            .collect();
        let kept: Vec<ColorSet> = all.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect();
        assert_eq!(
            check_certificate(universe, &all, &kept, f, GAME_BUDGET).unwrap(),
            oracle_certificate(universe, &all, &kept, f)
        );
    }
}
