//! Park sampling: from an I-full park whose paths end at level-i centers, extract a touristic
//! sub-park ending at level-(i+1) centers that is I-full under the next level's scores.

use std::collections::BTreeMap;
use std::ops::AddAssign;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::colorset::ColorSet;
use crate::error::{ensure_lemma, Error, Result};
use crate::graph::Vertex;
use crate::park::{PathRec, TouristicPark};
use crate::params::LevelParams;
use crate::score::{ratio, residual_counts};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SamplerStats {
    pub calls: u64,
    pub full_park: u64,
    pub fallback: u64,
    pub iterations: u64,
    pub error_events: u64,
    pub deleted_buc: u64,
    pub deleted_col: u64,
}

impl AddAssign<&SamplerStats> for SamplerStats {
    fn add_assign(&mut self, o: &SamplerStats) {
        self.calls += o.calls;
        self.full_park += o.full_park;
        self.fallback += o.fallback;
        self.iterations += o.iterations;
        self.error_events += o.error_events;
        self.deleted_buc += o.deleted_buc;
        self.deleted_col += o.deleted_col;
    }
}

#[derive(Debug)]
pub enum SampleResult {
    FullPark(TouristicPark),
    Fallback,
}

pub struct SamplerInput<'a> {
    pub stem: Vertex,
    /// The I-link of P̂_v.
    pub paths: Vec<&'a PathRec>,
    pub witness: &'a ColorSet,
    /// Level i (the sampler produces level-(i+1) parks).
    pub level: usize,
    pub cur: &'a LevelParams,
    pub next: &'a LevelParams,
    pub bucket_size: usize,
    pub paper: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum St {
    Alive,
    Buc,
    Col,
}

/// Smallest j ≥ 1 with score > 2^{−j}; requires 0 < score ≤ 1.
pub fn bucket_index(score: &BigRational) -> u32 {
    debug_assert!(score > &BigRational::zero() && score <= &BigRational::one());
    let pow = |j: u32| BigRational::new(BigInt::one(), BigInt::one() << j as usize);
    let est = (-crate::score::log2_ratio(score)).floor().max(0.0) as u32 + 1;
    let mut j = est.max(1);
    while j > 1 && score > &pow(j - 1) {
        j -= 1;
    }
    while score <= &pow(j) {
        j += 1;
    }
    j
}

pub fn park_sample(inp: &SamplerInput<'_>) -> Result<(SampleResult, SamplerStats)> {
    let mut stats = SamplerStats {
        calls: 1,
        ..Default::default()
    };
    let i = inp.level;
    let paths = &inp.paths;
    let g_next = &inp.next.g;
    let witness = inp.witness;
    for p in paths {
        if p.start() != inp.stem || !witness.is_subset(&p.colors) {
            return Err(Error::Precondition(
                "sampler input must be the witness link of one stem".into(),
            ));
        }
    }

    let mut state = vec![St::Alive; paths.len()];
    let mut by_center: BTreeMap<Vertex, Vec<usize>> = BTreeMap::new();
    let mut by_link: BTreeMap<ColorSet, Vec<usize>> = BTreeMap::new();
    for (idx, p) in paths.iter().enumerate() {
        by_center.entry(p.end()).or_default().push(idx);
        for j in p.colors.subsets() {
            by_link.entry(j).or_default().push(idx);
        }
    }
    let mut out = TouristicPark::new(inp.stem, inp.next.g.clone(), inp.next.l.clone());
    let bound = g_next.beta().recip()
        * num_traits::pow(
            g_next.alpha() * BigRational::from_integer(BigInt::from(g_next.f())),
            i + 1,
        );

    loop {
        let mut buckets: BTreeMap<u32, Vec<Vertex>> = BTreeMap::new();
        for (&s, idxs) in &by_center {
            let counts = residual_counts(
                idxs.iter()
                    .filter(|&&x| state[x] == St::Alive)
                    .map(|&x| &paths[x].colors),
                witness,
            );
            if counts.iter().all(|&c| c == 0) {
                continue;
            }
            let score = g_next.score_of_counts(&counts);
            ensure_lemma!(
                score <= BigRational::one(),
                "center {s} scores above 1 under the next global score"
            );
            buckets.entry(bucket_index(&score)).or_default().push(s);
        }
        let Some(members) = buckets.values().find(|b| b.len() >= inp.bucket_size) else {
            break;
        };
        let chosen: Vec<Vertex> = members[..inp.bucket_size].to_vec();
        let star = chosen.iter().copied().find(|&s| {
            let first = by_center[&s][0];
            paths[first].end_level as usize > i
        });
        let Some(star) = star else {
            stats.error_events += 1;
            stats.fallback += 1;
            return Ok((SampleResult::Fallback, stats));
        };
        stats.iterations += 1;
        ensure_lemma!(
            BigRational::from_integer(BigInt::from(stats.iterations)) <= bound,
            "sampler exceeded its iteration bound"
        );

        let added: Vec<usize> = by_center[&star]
            .iter()
            .copied()
            .filter(|&x| state[x] == St::Alive)
            .collect();
        for &x in &added {
            out.insert_path(paths[x].clone(), false).map_err(|e| {
                Error::LemmaViolation(format!("sampled park stopped being touristic: {e}"))
            })?;
        }
        for s in &chosen {
            for &x in &by_center[s] {
                if state[x] == St::Alive {
                    state[x] = St::Buc;
                    stats.deleted_buc += 1;
                }
            }
        }
        for &x in &added {
            for j in paths[x].colors.subsets() {
                if out.global().is_full(&j) {
                    for &y in &by_link[&j] {
                        if state[y] == St::Alive {
                            state[y] = St::Col;
                            stats.deleted_col += 1;
                        }
                    }
                }
            }
        }

        // S1: every input path is in exactly one of the three parts; picked paths sit in the bucket part.
        let alive = state.iter().filter(|&&s| s == St::Alive).count() as u64;
        ensure_lemma!(
            alive + stats.deleted_buc + stats.deleted_col == paths.len() as u64,
            "disjoint-union audit failed"
        );
        let picked_ok = out
            .paths()
            .iter()
            .all(|p| by_center[&p.end()].iter().any(|&x| state[x] == St::Buc && paths[x] == p));
        ensure_lemma!(picked_ok, "a picked path is not accounted to the bucket part");
        // S2
        out.audit()?;
    }

    let full = out.global().is_full(witness);
    if inp.paper && !full {
        let ghat = &inp.cur.ghat;
        let eighth = ratio(1, 8);
        let part = |want: St| {
            residual_counts(
                paths
                    .iter()
                    .enumerate()
                    .filter(|(x, _)| state[*x] == want)
                    .map(|(_, p)| &p.colors),
                witness,
            )
        };
        ensure_lemma!(
            ghat.cmp_counts(&part(St::Alive), &eighth) != std::cmp::Ordering::Greater,
            "remaining paths score above 1/8 after a clean sampler fallback"
        );
        ensure_lemma!(
            ghat.cmp_counts(&part(St::Buc), &eighth) != std::cmp::Ordering::Greater,
            "bucket-deleted paths score above 1/8 after a clean sampler fallback"
        );
    }
    if full {
        stats.full_park += 1;
        Ok((SampleResult::FullPark(out), stats))
    } else {
        stats.fallback += 1;
        Ok((SampleResult::Fallback, stats))
    }
}
