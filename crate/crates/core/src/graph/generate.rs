use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{ColorMode, ColoredGraph, Vertex};
use crate::colorset::Color;
use crate::error::{Error, Result};
use crate::rng::stream;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ColoringPolicy {
    Uniform,
    /// ECFT: proper edge coloring. VCFT: proper vertex coloring.
    Legal,
    /// Color 0 with probability 1/2, otherwise uniform.
    MonoBiased,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Size {
    Edges(usize),
    /// Fraction of the n(n−1)/2 vertex pairs.
    Density(f64),
}

#[derive(Clone, Debug)]
pub struct GenParams {
    pub mode: ColorMode,
    pub n: usize,
    pub size: Size,
    pub color_count: u32,
    pub weight_range: (f64, f64),
    pub policy: ColoringPolicy,
    /// Allow parallel edges (ECFT only).
    pub multigraph: bool,
    pub seed: u64,
}

/// Weights are rounded to two decimals so files stay short and round-trip exactly.
fn draw_weight<R: Rng>(rng: &mut R, (lo, hi): (f64, f64)) -> f64 {
    if hi <= lo {
        return lo;
    }
    let w = (rng.gen_range(lo..=hi) * 100.0).round() / 100.0;
    w.max(lo).max(0.01)
}

fn draw_color<R: Rng>(rng: &mut R, policy: ColoringPolicy, count: u32) -> Color {
    match policy {
        ColoringPolicy::MonoBiased if rng.gen_bool(0.5) => 0,
        _ => rng.gen_range(0..count),
    }
}

pub fn generate_random(p: &GenParams) -> Result<ColoredGraph> {
    let n = p.n;
    if n < 2 {
        return Err(Error::InvalidParams("need at least 2 vertices".into()));
    }
    if p.color_count == 0 {
        return Err(Error::InvalidParams("need at least one color".into()));
    }
    let (lo, hi) = p.weight_range;
    if !(lo > 0.0 && lo.is_finite() && hi.is_finite() && hi >= lo) {
        return Err(Error::InvalidParams("weight range must be positive".into()));
    }
    let pairs = n * (n - 1) / 2;
    let multigraph = p.multigraph && p.mode == ColorMode::Ecft;
    let m = match p.size {
        Size::Edges(m) => m,
        Size::Density(d) => (d.clamp(0.0, 1.0) * pairs as f64).round() as usize,
    };
    if !multigraph && m > pairs {
        return Err(Error::InvalidParams(format!(
            "{m} edges exceed the {pairs} vertex pairs of a simple graph"
        )));
    }
    let mut rng = stream(p.seed, "generate", 0);

    let vertex_colors: Vec<Color> = match (p.mode, p.policy) {
        (ColorMode::Ecft, _) => Vec::new(),
        (ColorMode::Vcft, pol) => (0..n)
            .map(|_| draw_color(&mut rng, pol, p.color_count))
            .collect(),
    };

    let mut edges = Vec::with_capacity(m);
    let mut used: HashSet<(Vertex, Vertex)> = HashSet::new();
    // per-vertex colors already used, for legal ECFT colorings
    let mut vused: Vec<HashSet<Color>> = vec![HashSet::new(); n];
    let attempt_limit = 200 * (m + 10) + 50 * pairs;
    let mut attempts = 0;
    while edges.len() < m {
        attempts += 1;
        if attempts > attempt_limit {
            return Err(Error::Infeasible(format!(
                "could only place {} of {m} edges under the {:?} policy",
                edges.len(),
                p.policy
            )));
        }
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u == v {
            continue;
        }
        let key = (u.min(v), u.max(v));
        if !multigraph && used.contains(&key) {
            continue;
        }
        let color = match p.mode {
            ColorMode::Ecft => {
                if p.policy == ColoringPolicy::Legal {
                    let mut free: Vec<Color> = (0..p.color_count)
                        .filter(|c| !vused[u].contains(c) && !vused[v].contains(c))
                        .collect();
                    free.shuffle(&mut rng);
                    match free.first() {
                        Some(&c) => Some(c),
                        None => continue,
                    }
                } else {
                    Some(draw_color(&mut rng, p.policy, p.color_count))
                }
            }
            ColorMode::Vcft => {
                if p.policy == ColoringPolicy::Legal && vertex_colors[u] == vertex_colors[v] {
                    continue;
                }
                None
            }
        };
        let w = draw_weight(&mut rng, p.weight_range);
        if let Some(c) = color {
            vused[u].insert(c);
            vused[v].insert(c);
        }
        used.insert(key);
        edges.push((key.0, key.1, w, color));
    }
    ColoredGraph::new(p.mode, n, p.color_count, edges, vertex_colors)
}
