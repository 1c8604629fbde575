//! Parks: path collections whose every link scores at most 1, indexed by link.
//!
//! A touristic park pairs a global park with one local park per end vertex.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use num_bigint::{BigUint, RandBigInt};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

use crate::colorset::{Color, ColorSet};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, Vertex};
use crate::score::{ratio, ScoreParams, ScoreValue};

pub trait Colored {
    fn colors(&self) -> &ColorSet;
}

impl Colored for ColorSet {
    fn colors(&self) -> &ColorSet {
        self
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PathRec {
    pub edges: Vec<EdgeId>,
    /// vertices[0] is the start, the last entry is the end.
    pub vertices: Vec<Vertex>,
    pub colors: ColorSet,
    pub max_weight: f64,
    /// Highest level i with end ∈ S_i. Travels with the path so that holders need no global lookup.
    pub end_level: u8,
    /// Color of the end vertex (vertex-colored mode), carried so holders need no global lookup.
    pub end_color: Option<Color>,
}

impl Colored for PathRec {
    fn colors(&self) -> &ColorSet {
        &self.colors
    }
}

impl PathRec {
    /// Zero-length path at `u`.
    pub fn trivial(u: Vertex, colors: ColorSet, end_level: u8) -> Self {
        PathRec {
            edges: Vec::new(),
            vertices: vec![u],
            colors,
            max_weight: 0.0,
            end_level,
            end_color: None,
        }
    }

    pub fn with_end_color(mut self, c: Color) -> Self {
        self.end_color = Some(c);
        self
    }

    pub fn start(&self) -> Vertex {
        self.vertices[0]
    }

    pub fn end(&self) -> Vertex {
        *self.vertices.last().expect("nonempty path")
    }

    pub fn hop_len(&self) -> usize {
        self.edges.len()
    }

    /// e∘P for an edge e = {v, start(P)}; `color` is the color the extension adds.
    pub fn prepend(&self, e: EdgeId, v: Vertex, weight: f64, color: Color) -> PathRec {
        let mut edges = Vec::with_capacity(self.edges.len() + 1);
        edges.push(e);
        edges.extend_from_slice(&self.edges);
        let mut vertices = Vec::with_capacity(self.vertices.len() + 1);
        vertices.push(v);
        vertices.extend_from_slice(&self.vertices);
        PathRec {
            edges,
            vertices,
            colors: self.colors.with(color),
            max_weight: self.max_weight.max(weight),
            end_level: self.end_level,
            end_color: self.end_color,
        }
    }

    /// "<start> <end> <edge_ids> <colors>" with comma-separated lists and "-" for empty ones.
    pub fn dump_line(&self) -> String {
        let list = |xs: Vec<String>| {
            if xs.is_empty() {
                "-".to_string()
            } else {
                xs.join(",")
            }
        };
        format!(
            "{} {} {} {}",
            self.start(),
            self.end(),
            list(self.edges.iter().map(|e| e.to_string()).collect()),
            list(self.colors.iter().map(|c| c.to_string()).collect())
        )
    }
}

#[derive(Clone, Debug, Default)]
struct Link {
    counts: Vec<u64>,
    /// members[t]: item indices with residual t, ascending.
    members: Vec<Vec<u32>>,
    full: bool,
}

#[derive(Clone, Debug)]
pub struct Park<T> {
    params: Arc<ScoreParams>,
    items: Vec<T>,
    links: BTreeMap<ColorSet, Link>,
}

fn half() -> BigRational {
    ratio(1, 2)
}

fn bump(counts: &[u64], t: usize, by: u64) -> Vec<u64> {
    let mut c = counts.to_vec();
    if c.len() <= t {
        c.resize(t + 1, 0);
    }
    c[t] += by;
    c
}

impl<T: Colored> Park<T> {
    pub fn new(params: Arc<ScoreParams>) -> Self {
        Park {
            params,
            items: Vec::new(),
            links: BTreeMap::new(),
        }
    }

    pub fn params(&self) -> &Arc<ScoreParams> {
        &self.params
    }

    pub fn items(&self) -> &[T] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Whether adding an item with these colors keeps every link at score ≤ 1.
    pub fn can_insert(&self, colors: &ColorSet) -> bool {
        self.violating_link(colors).is_none()
    }

    fn violating_link(&self, colors: &ColorSet) -> Option<(ColorSet, ScoreValue)> {
        let one = BigRational::one();
        for j in colors.subsets() {
            let t = colors.len() - j.len();
            let counts = match self.links.get(&j) {
                Some(l) => bump(&l.counts, t, 1),
                None => bump(&[], t, 1),
            };
            if self.params.cmp_counts(&counts, &one) == std::cmp::Ordering::Greater {
                let s = self.params.score_of_counts(&counts);
                return Some((j, s));
            }
        }
        None
    }

    /// Insert, enforcing the park property. Returns Ok(false) when clamped.
    pub fn insert(&mut self, item: T, clamp: bool) -> Result<bool> {
        if let Some((j, s)) = self.violating_link(item.colors()) {
            if clamp {
                return Ok(false);
            }
            return Err(Error::ParkViolation {
                link: j.to_string(),
                score: crate::score::log2_ratio(&s).to_string(),
            });
        }
        self.insert_unchecked(item);
        Ok(true)
    }

    /// Insert without the park check (used where the caller does not enforce this park).
    pub fn insert_unchecked(&mut self, item: T) {
        let idx = self.items.len() as u32;
        let colors = item.colors().clone();
        let half = half();
        for j in colors.subsets() {
            let t = colors.len() - j.len();
            let link = self.links.entry(j).or_default();
            if link.counts.len() <= t {
                link.counts.resize(t + 1, 0);
                link.members.resize(t + 1, Vec::new());
            }
            link.counts[t] += 1;
            link.members[t].push(idx);
            link.full = self.params.cmp_counts(&link.counts, &half) == std::cmp::Ordering::Greater;
        }
        self.items.push(item);
    }

    pub fn link_counts(&self, j: &ColorSet) -> &[u64] {
        self.links.get(j).map(|l| l.counts.as_slice()).unwrap_or(&[])
    }

    pub fn link_score(&self, j: &ColorSet) -> ScoreValue {
        self.params.score_of_counts(self.link_counts(j))
    }

    /// sc_J > 1/2.
    pub fn is_full(&self, j: &ColorSet) -> bool {
        self.links.get(j).is_some_and(|l| l.full)
    }

    /// Smallest, then lexicographically least, J ⊆ colors with a full J-link.
    pub fn find_full_subset(&self, colors: &ColorSet) -> Option<ColorSet> {
        colors.subsets().into_iter().find(|j| self.is_full(j))
    }

    /// Item indices of the J-link, ascending.
    pub fn link_members(&self, j: &ColorSet) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .links
            .get(j)
            .map(|l| l.members.iter().flatten().map(|&i| i as usize).collect())
            .unwrap_or_default();
        out.sort_unstable();
        out
    }

    /// Items of the J-link (in insertion order).
    pub fn link_items(&self, j: &ColorSet) -> Vec<&T> {
        self.link_members(j).into_iter().map(|i| &self.items[i]).collect()
    }

    /// Constructive fault tolerance: a J-link item avoiding every color in `faults`.
    ///
    /// Requires J ∩ F = ∅ and sc_J > 1/α. Failing to find one means the park property was broken.
    pub fn surviving_path(&self, j: &ColorSet, faults: &ColorSet) -> Result<&T> {
        if j.intersects(faults) {
            return Err(Error::Precondition(format!("J={j} meets F={faults}")));
        }
        let inv_alpha = self.params.inv_alpha();
        if self.params.cmp_counts(self.link_counts(j), &inv_alpha) != std::cmp::Ordering::Greater {
            return Err(Error::Precondition(format!(
                "link {j} does not score above 1/alpha"
            )));
        }
        self.link_members(j)
            .into_iter()
            .map(|i| &self.items[i])
            .find(|p| !p.colors().intersects(faults))
            .ok_or_else(|| {
                Error::LemmaViolation(format!(
                    "no surviving path in link {j} under faults {faults} ({} members)",
                    self.link_members(j).len()
                ))
            })
    }

    /// Draw an item of the I-link with probability proportional to its score on I.
    pub fn sample_weighted<R: Rng>(&self, i: &ColorSet, rng: &mut R) -> Result<&T> {
        self.sample_index(i, rng).map(|x| &self.items[x])
    }

    /// As [`Park::sample_weighted`], returning the item index.
    pub fn sample_index<R: Rng>(&self, i: &ColorSet, rng: &mut R) -> Result<usize> {
        let link = self
            .links
            .get(i)
            .filter(|l| l.counts.iter().any(|&c| c > 0))
            .ok_or_else(|| Error::Precondition(format!("empty link {i}")))?;
        let weights = self.params.class_weights(&link.counts);
        let total: BigUint = weights.iter().sum();
        let mut x = rng.gen_biguint_below(&total);
        for (t, w) in weights.iter().enumerate() {
            if w.is_zero() {
                continue;
            }
            if &x < w {
                let class = &link.members[t];
                let pick = class[rng.gen_range(0..class.len())];
                return Ok(pick as usize);
            }
            x -= w;
        }
        unreachable!("weighted draw fell off the end")
    }

    /// Every (J, counts) pair with a nonempty link.
    pub fn links(&self) -> impl Iterator<Item = (&ColorSet, &[u64])> {
        self.links.iter().map(|(j, l)| (j, l.counts.as_slice()))
    }

    /// Recompute every link from the raw items and check index consistency and the park property.
    pub fn audit(&self, enforce: bool) -> Result<()> {
        let mut fresh: BTreeMap<ColorSet, Vec<u64>> = BTreeMap::new();
        for it in &self.items {
            let c = it.colors();
            for j in c.subsets() {
                let t = c.len() - j.len();
                let e = fresh.entry(j).or_default();
                if e.len() <= t {
                    e.resize(t + 1, 0);
                }
                e[t] += 1;
            }
        }
        if fresh.len() != self.links.len() {
            return Err(Error::LemmaViolation("link index has stale entries".into()));
        }
        let one = BigRational::one();
        for (j, counts) in &fresh {
            let link = self
                .links
                .get(j)
                .ok_or_else(|| Error::LemmaViolation(format!("link {j} missing from index")))?;
            if &link.counts != counts {
                return Err(Error::LemmaViolation(format!("link {j} counts drifted")));
            }
            // path-by-path recomputation, independent of the counts fast path
            let direct: ScoreValue = self
                .items
                .iter()
                .map(|it| self.params.path_score(it.colors(), j))
                .fold(BigRational::zero(), |a, b| a + b);
            if direct != self.params.score_of_counts(counts) {
                return Err(Error::LemmaViolation(format!("link {j} score mismatch")));
            }
            if enforce && direct > one {
                return Err(Error::LemmaViolation(format!("link {j} scores above 1")));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InsertOutcome {
    Inserted,
    Clamped,
}

/// Global park plus one local park per end vertex, all stemming from `stem`.
#[derive(Clone, Debug)]
pub struct TouristicPark {
    stem: Vertex,
    global: Park<PathRec>,
    locals: BTreeMap<Vertex, Park<PathRec>>,
    local_params: Arc<ScoreParams>,
    enforce_global: bool,
}

impl TouristicPark {
    pub fn new(stem: Vertex, global: Arc<ScoreParams>, local: Arc<ScoreParams>) -> Self {
        TouristicPark {
            stem,
            global: Park::new(global),
            locals: BTreeMap::new(),
            local_params: local,
            enforce_global: true,
        }
    }

    /// Only the local parks are enforced; the global index is kept for bookkeeping.
    pub fn local_only(stem: Vertex, global: Arc<ScoreParams>, local: Arc<ScoreParams>) -> Self {
        TouristicPark {
            enforce_global: false,
            ..Self::new(stem, global, local)
        }
    }

    pub fn stem(&self) -> Vertex {
        self.stem
    }

    pub fn global(&self) -> &Park<PathRec> {
        &self.global
    }

    pub fn local(&self, s: Vertex) -> Option<&Park<PathRec>> {
        self.locals.get(&s)
    }

    pub fn locals(&self) -> impl Iterator<Item = (Vertex, &Park<PathRec>)> {
        self.locals.iter().map(|(&s, p)| (s, p))
    }

    pub fn local_params(&self) -> &Arc<ScoreParams> {
        &self.local_params
    }

    pub fn paths(&self) -> &[PathRec] {
        self.global.items()
    }

    pub fn len(&self) -> usize {
        self.global.len()
    }

    pub fn is_empty(&self) -> bool {
        self.global.is_empty()
    }

    pub fn can_insert(&self, p: &PathRec) -> bool {
        (!self.enforce_global || self.global.can_insert(&p.colors))
            && self
                .locals
                .get(&p.end())
                .is_none_or(|l| l.can_insert(&p.colors))
            && (self.locals.contains_key(&p.end()) || {
                let empty: Park<PathRec> = Park::new(self.local_params.clone());
                empty.can_insert(&p.colors)
            })
    }

    pub fn insert_path(&mut self, p: PathRec, clamp: bool) -> Result<InsertOutcome> {
        if p.start() != self.stem {
            return Err(Error::Precondition(format!(
                "path starts at {} but park stems from {}",
                p.start(),
                self.stem
            )));
        }
        if !self.can_insert(&p) {
            if clamp {
                return Ok(InsertOutcome::Clamped);
            }
            return Err(Error::ParkViolation {
                link: p.colors.to_string(),
                score: "above 1".into(),
            });
        }
        let local = self
            .locals
            .entry(p.end())
            .or_insert_with(|| Park::new(self.local_params.clone()));
        local.insert_unchecked(p.clone());
        self.global.insert_unchecked(p);
        Ok(InsertOutcome::Inserted)
    }

    pub fn audit(&self) -> Result<()> {
        self.global.audit(self.enforce_global)?;
        let mut total = 0;
        for (&s, l) in &self.locals {
            l.audit(true)?;
            if l.items().iter().any(|p| p.end() != s || p.start() != self.stem) {
                return Err(Error::LemmaViolation(format!("local park {s} misfiled")));
            }
            total += l.len();
        }
        if total != self.global.len() {
            return Err(Error::LemmaViolation("local parks do not partition the global park".into()));
        }
        Ok(())
    }

    pub fn dump(&self) -> String {
        let mut s = String::new();
        for p in self.paths() {
            let _ = writeln!(s, "{}", p.dump_line());
        }
        s
    }
}
