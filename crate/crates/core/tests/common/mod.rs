//! Test-side helpers: instance corpora and oracles that share no code with the library.

#![allow(dead_code)]

use cft_spanner::colorset::ColorSet;
use cft_spanner::graph::{generate_random, ColorMode, ColoredGraph, ColoringPolicy, GenParams, Size};
use std::sync::Arc;

use cft_spanner::colorset::Color;
use cft_spanner::park::Park;
use cft_spanner::score::ScoreParams;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn graph(mode: ColorMode, n: usize, m: usize, colors: u32, policy: ColoringPolicy, seed: u64) -> ColoredGraph {
    generate_random(&GenParams {
        mode,
        n,
        size: Size::Edges(m),
        color_count: colors,
        weight_range: (1.0, 5.0),
        policy,
        multigraph: false,
        seed,
    })
    .unwrap()
}

/// One instance of the correctness corpus: n ≤ 30, m ≤ 120, at most 8 colors.
#[derive(Clone, Copy, Debug)]
pub struct Instance {
    pub seed: u64,
    pub n: usize,
    pub m: usize,
    pub colors: u32,
    pub f: usize,
    pub k: usize,
    pub paper: bool,
    pub policy: ColoringPolicy,
}

pub fn corpus(count: u64) -> Vec<Instance> {
    let policies = [ColoringPolicy::Uniform, ColoringPolicy::MonoBiased, ColoringPolicy::Legal];
    (0..count)
        .map(|s| {
            let n = 8 + (s as usize * 7) % 23;
            let policy = policies[(s / 8) as usize % 3];
            let legal = matches!(policy, ColoringPolicy::Legal);
            let m = (n * (n - 1) / 2).min(2 * n + (s as usize * 13) % 60).min(120);
            // A proper coloring with at most 8 colors needs low degree.
            let m = if legal { m.min(2 * n) } else { m };
            Instance {
                seed: s,
                n,
                m,
                colors: if legal { 8 } else { 2 + (s % 7) as u32 },
                f: 1 + (s % 2) as usize,
                k: 2 + ((s / 2) % 2) as usize,
                paper: (s / 4) % 2 == 1,
                policy,
            }
        })
        .collect()
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Σ over members P ⊇ J of β(αf)^{−|P−J|}, straight from the definition.
pub fn oracle_score(alpha: &BigRational, beta: &BigRational, f: u32, coll: &[ColorSet], j: &ColorSet) -> BigRational {
    let af = alpha * BigRational::from_integer(BigInt::from(f));
    let mut s = BigRational::zero();
    for p in coll {
        if j.iter().all(|c| p.contains(c)) {
            let mut term = beta.clone();
            for _ in 0..(p.len() - j.len()) {
                term /= &af;
            }
            s += term;
        }
    }
    s
}

pub fn half() -> BigRational {
    BigRational::one() / BigRational::from_integer(BigInt::from(2))
}

/// All-pairs distances by Floyd-Warshall over the given edge subset.
pub fn floyd(g: &ColoredGraph, keep: &[bool]) -> Vec<Vec<f64>> {
    let n = g.n();
    let mut d = vec![vec![f64::INFINITY; n]; n];
    for (x, row) in d.iter_mut().enumerate() {
        row[x] = 0.0;
    }
    for e in g.edges() {
        if keep[e.id] && e.weight < d[e.u][e.v] {
            d[e.u][e.v] = e.weight;
            d[e.v][e.u] = e.weight;
        }
    }
    for m in 0..n {
        for a in 0..n {
            for b in 0..n {
                let via = d[a][m] + d[m][b];
                if via < d[a][b] {
                    d[a][b] = via;
                }
            }
        }
    }
    d
}

/// Worst dist_H / dist_G over connected pairs, by Floyd-Warshall on both graphs.
pub fn oracle_stretch(g: &ColoredGraph, kept: &[usize]) -> f64 {
    let all = vec![true; g.m()];
    let mut mask = vec![false; g.m()];
    for &e in kept {
        mask[e] = true;
    }
    let dg = floyd(g, &all);
    let dh = floyd(g, &mask);
    let mut worst: f64 = 1.0;
    for a in 0..g.n() {
        for b in 0..g.n() {
            if a != b && dg[a][b].is_finite() {
                worst = worst.max(dh[a][b] / dg[a][b]);
            }
        }
    }
    worst
}

pub const UNIVERSE: Color = 7;

pub fn random_set<R: Rng>(rng: &mut R, max: usize) -> ColorSet {
    let len = rng.gen_range(0..=max);
    let mut pool: Vec<Color> = (0..UNIVERSE).collect();
    pool.shuffle(rng);
    pool[..len].iter().copied().collect()
}

pub struct Built {
    pub park: Park<ColorSet>,
    pub alpha: u64,
    pub beta: (u64, u64),
    pub f: u32,
}

pub fn random_park<R: Rng>(rng: &mut R) -> Built {
    let alpha = rng.gen_range(2..=6);
    let beta = [(1, 1), (1, 2), (1, 3), (3, 4)][rng.gen_range(0..4)];
    let f = rng.gen_range(1..=3);
    let mut park = Park::new(Arc::new(ScoreParams::from_ints(alpha, beta.0, beta.1, f).unwrap()));
    // A small palette of repeated sets makes links fill up.
    let palette: Vec<ColorSet> = (0..rng.gen_range(1..6)).map(|_| random_set(rng, 3)).collect();
    for _ in 0..rng.gen_range(1..60) {
        let s = if rng.gen_bool(0.7) {
            palette[rng.gen_range(0..palette.len())].clone()
        } else {
            random_set(rng, 4)
        };
        park.insert(s, true).unwrap();
    }
    Built { park, alpha, beta, f }
}

pub fn park_oracle(b: &Built, j: &ColorSet) -> BigRational {
    let a = BigRational::from_integer(BigInt::from(b.alpha));
    oracle_score(&a, &rat(b.beta.0 as i64, b.beta.1 as i64), b.f, b.park.items(), j)
}

pub fn candidate_links(b: &Built) -> Vec<ColorSet> {
    let mut out: Vec<ColorSet> = b.park.items().iter().flat_map(|s| s.subsets()).collect();
    out.sort();
    out.dedup();
    out
}

/// Random parks, links above 1/α and fault sets of at most f colors missing the link: the
/// surviving path must exist. Returns the number of trials run.
pub fn surviving_path_trials(seed: u64, count: usize) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut trials = 0;
    while trials < count {
        let b = random_park(&mut rng);
        let inv_alpha = rat(1, b.alpha as i64);
        let eligible: Vec<ColorSet> = candidate_links(&b)
            .into_iter()
            .filter(|j| park_oracle(&b, j) > inv_alpha)
            .collect();
        if eligible.is_empty() {
            continue;
        }
        for _ in 0..4.min(count - trials) {
            let j = &eligible[rng.gen_range(0..eligible.len())];
            let pool: Vec<Color> = (0..UNIVERSE).filter(|&c| !j.contains(c)).collect();
            let size = rng.gen_range(0..=(b.f as usize).min(pool.len()));
            let faults: ColorSet = pool.choose_multiple(&mut rng, size).copied().collect();
            let p = b.park.surviving_path(j, &faults).unwrap();
            assert!(j.is_subset(p) && !p.intersects(&faults));
            trials += 1;
        }
    }
    trials
}
