//! Ground-truth stretch checks by fault enumeration.
//!
//! The per-edge check suffices: if every surviving edge of G − F has a short detour in H − F,
//! every shortest path of G − F does too, edge by edge.

use rand::seq::index::sample;
use rand::Rng as _;
use serde::Serialize;

use crate::colorset::{count_up_to, subsets_up_to, Color, ColorSet};
use crate::error::{Error, Result};
use crate::graph::{ColoredGraph, Dijkstra, EdgeId, Vertex, INF};
use crate::rng::stream;

/// Float slack for accumulated weights, relative to the bound.
pub const EPS: f64 = 1.0 / (1u64 << 40) as f64;

/// Default cap on the number of fault sets an exact run may enumerate.
pub const DEFAULT_BUDGET: u128 = 2_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FaultKind {
    /// Whole color classes fail.
    Color,
    /// Individual vertices fail (never the checked edge's endpoints).
    Vertex,
    /// No faults.
    Plain,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerifyMode {
    Exact,
    /// The empty set plus this many random fault sets, sizes uniform in 0..=f.
    Sampled(usize),
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub mode: VerifyMode,
    pub seed: u64,
    pub budget: u128,
    /// Compare all vertex pairs against G − F instead of checking edge by edge.
    pub all_pairs: bool,
    pub jobs: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            mode: VerifyMode::Exact,
            seed: 0,
            budget: DEFAULT_BUDGET,
            all_pairs: false,
            jobs: 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    /// The checked edge (per-edge mode) or None in all-pairs mode.
    pub edge: Option<EdgeId>,
    pub pair: (Vertex, Vertex),
    /// Failed colors or vertices.
    pub faults: Vec<usize>,
    pub dist: f64,
    pub bound: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SizeRow {
    pub size: usize,
    pub sets: u64,
    pub violations: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub kind: FaultKind,
    pub pass: bool,
    pub stretch_bound: usize,
    pub fault_sets: u64,
    pub violations: u64,
    pub worst: Option<Violation>,
    /// Largest dist_{H−F}/reference over all checked pairs (INF when disconnected).
    pub max_stretch: f64,
    pub per_size: Vec<SizeRow>,
}

impl VerifyReport {
    fn new(kind: FaultKind, k: usize, f: usize) -> Self {
        VerifyReport {
            kind,
            pass: true,
            stretch_bound: 2 * k - 1,
            fault_sets: 0,
            violations: 0,
            worst: None,
            max_stretch: 1.0,
            per_size: (0..=f)
                .map(|size| SizeRow {
                    size,
                    ..Default::default()
                })
                .collect(),
        }
    }

    /// Fold a later chunk into this one, keeping the first worst violation on ties.
    fn merge(&mut self, o: VerifyReport) {
        self.fault_sets += o.fault_sets;
        self.violations += o.violations;
        self.pass &= o.pass;
        if o.max_stretch > self.max_stretch {
            self.max_stretch = o.max_stretch;
        }
        if let Some(w) = o.worst {
            let better = match &self.worst {
                None => true,
                Some(cur) => w.dist / w.bound > cur.dist / cur.bound,
            };
            if better {
                self.worst = Some(w);
            }
        }
        for (a, b) in self.per_size.iter_mut().zip(o.per_size) {
            a.sets += b.sets;
            a.violations += b.violations;
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[derive(Clone, Debug)]
enum Fault {
    Colors(ColorSet),
    Vertices(Vec<Vertex>),
}

impl Fault {
    fn size(&self) -> usize {
        match self {
            Fault::Colors(c) => c.len(),
            Fault::Vertices(v) => v.len(),
        }
    }

    fn ids(&self) -> Vec<usize> {
        match self {
            Fault::Colors(c) => c.iter().map(|x| x as usize).collect(),
            Fault::Vertices(v) => v.clone(),
        }
    }
}

fn vertex_subsets(n: usize, f: usize) -> Vec<Vec<Vertex>> {
    let universe: Vec<Color> = (0..n as u32).collect();
    subsets_up_to(&universe, f)
        .into_iter()
        .map(|s| s.iter().map(|x| x as usize).collect())
        .collect()
}

fn fault_sets(g: &ColoredGraph, kind: FaultKind, f: usize, opts: &VerifyOptions) -> Result<Vec<Fault>> {
    let universe = match kind {
        FaultKind::Color => g.color_count() as usize,
        FaultKind::Vertex => g.n(),
        FaultKind::Plain => return Ok(vec![Fault::Colors(ColorSet::new())]),
    };
    let wrap = |ids: Vec<usize>| match kind {
        FaultKind::Color => Fault::Colors(ids.iter().map(|&x| x as Color).collect()),
        _ => Fault::Vertices(ids),
    };
    match opts.mode {
        VerifyMode::Exact => {
            let needed = count_up_to(universe as u64, f as u64);
            if needed > opts.budget {
                return Err(Error::BudgetExceeded {
                    needed,
                    budget: opts.budget,
                });
            }
            Ok(match kind {
                FaultKind::Color => {
                    let colors: Vec<Color> = (0..universe as u32).collect();
                    subsets_up_to(&colors, f).into_iter().map(Fault::Colors).collect()
                }
                _ => vertex_subsets(universe, f).into_iter().map(Fault::Vertices).collect(),
            })
        }
        VerifyMode::Sampled(trials) => {
            let mut rng = stream(opts.seed, "verify", kind as u64);
            let mut out = vec![wrap(Vec::new())];
            for _ in 0..trials {
                let size = rng.gen_range(0..=f.min(universe));
                let mut ids = sample(&mut rng, universe, size).into_vec();
                ids.sort_unstable();
                out.push(wrap(ids));
            }
            Ok(out)
        }
    }
}

fn check_one(
    g: &ColoredGraph,
    in_h: &[bool],
    fault: &Fault,
    k: usize,
    all_pairs: bool,
    dij: &mut Dijkstra,
    dij2: &mut Dijkstra,
    rep: &mut VerifyReport,
) {
    let t = (2 * k - 1) as f64;
    let mut removed = vec![false; g.n()];
    if let Fault::Vertices(vs) = fault {
        for &x in vs {
            removed[x] = true;
        }
    }
    let survives = |e: EdgeId| -> bool {
        match fault {
            Fault::Colors(c) => !g.is_damaged(e, c),
            Fault::Vertices(_) => {
                let ed = g.edge(e);
                !removed[ed.u] && !removed[ed.v]
            }
        }
    };
    let mut violations = 0u64;
    let mut note = |rep: &mut VerifyReport, edge, pair, dist: f64, reference: f64, bound: f64| {
        let stretch = if dist == INF { INF } else { dist / reference };
        if stretch > rep.max_stretch {
            rep.max_stretch = stretch;
        }
        if dist > bound {
            violations += 1;
            let v = Violation {
                edge,
                pair,
                faults: fault.ids(),
                dist,
                bound,
            };
            let better = match &rep.worst {
                None => true,
                Some(cur) => v.dist / v.bound > cur.dist / cur.bound,
            };
            if better {
                rep.worst = Some(v);
            }
        }
    };
    if all_pairs {
        for x in 0..g.n() {
            if removed[x] {
                continue;
            }
            let dg: Vec<f64> = dij2.run(g, x, INF, &survives).to_vec();
            let dh = dij.run(g, x, INF, |e| in_h[e] && survives(e));
            for y in x + 1..g.n() {
                if removed[y] || dg[y] == INF {
                    continue;
                }
                let bound = t * dg[y] * (1.0 + EPS);
                note(rep, None, (x, y), dh[y], dg[y], bound);
            }
        }
    } else {
        let mut by_src: Vec<Vec<EdgeId>> = vec![Vec::new(); g.n()];
        for e in 0..g.m() {
            if survives(e) {
                by_src[g.edge(e).u].push(e);
            }
        }
        for (x, es) in by_src.iter().enumerate() {
            if es.is_empty() {
                continue;
            }
            let limit = es
                .iter()
                .map(|&e| t * g.edge(e).weight * (1.0 + EPS))
                .fold(0.0, f64::max);
            let dh = dij.run(g, x, limit, |e| in_h[e] && survives(e));
            for &e in es {
                let ed = g.edge(e);
                let bound = t * ed.weight * (1.0 + EPS);
                note(rep, Some(e), (ed.u, ed.v), dh[ed.v], ed.weight, bound);
            }
        }
    }
    rep.fault_sets += 1;
    rep.violations += violations;
    rep.pass &= violations == 0;
    let row = &mut rep.per_size[fault.size()];
    row.sets += 1;
    row.violations += violations;
}

fn verify(
    g: &ColoredGraph,
    h: &[EdgeId],
    f: usize,
    k: usize,
    kind: FaultKind,
    opts: &VerifyOptions,
) -> Result<VerifyReport> {
    if k == 0 {
        return Err(Error::InvalidParams("k must be at least 1".into()));
    }
    if let Some(&bad) = h.iter().find(|&&e| e >= g.m()) {
        return Err(Error::InvalidParams(format!("spanner edge {bad} is not in the graph")));
    }
    let f = if kind == FaultKind::Plain { 0 } else { f };
    let in_h = g.edge_mask(h);
    let faults = fault_sets(g, kind, f, opts)?;
    let jobs = opts.jobs.max(1).min(faults.len().max(1));
    let chunk = faults.len().div_ceil(jobs).max(1);
    let run_chunk = |part: &[Fault]| {
        let mut rep = VerifyReport::new(kind, k, f);
        let mut d1 = Dijkstra::new(g.n());
        let mut d2 = Dijkstra::new(g.n());
        for fault in part {
            check_one(g, &in_h, fault, k, opts.all_pairs, &mut d1, &mut d2, &mut rep);
        }
        rep
    };
    let parts: Vec<VerifyReport> = if jobs == 1 {
        vec![run_chunk(&faults)]
    } else {
        std::thread::scope(|sc| {
            let handles: Vec<_> = faults
                .chunks(chunk)
                .map(|part| sc.spawn(move || run_chunk(part)))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("verifier worker panicked"))
                .collect()
        })
    };
    let mut rep = VerifyReport::new(kind, k, f);
    for p in parts {
        rep.merge(p);
    }
    Ok(rep)
}

/// Color faults: every F of at most f colors, every edge of G − F.
pub fn verify_cft(g: &ColoredGraph, h: &[EdgeId], f: usize, k: usize, opts: &VerifyOptions) -> Result<VerifyReport> {
    verify(g, h, f, k, FaultKind::Color, opts)
}

/// Vertex faults: every F of at most f vertices, every edge with both endpoints outside F.
pub fn verify_vft(g: &ColoredGraph, h: &[EdgeId], f: usize, k: usize, opts: &VerifyOptions) -> Result<VerifyReport> {
    verify(g, h, f, k, FaultKind::Vertex, opts)
}

/// Plain (2k−1)-spanner check.
pub fn verify_plain(g: &ColoredGraph, h: &[EdgeId], k: usize, opts: &VerifyOptions) -> Result<VerifyReport> {
    verify(g, h, 0, k, FaultKind::Plain, opts)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpannerStats {
    pub n: usize,
    pub m: usize,
    pub size: usize,
    /// n^{1+1/k}
    pub reference: f64,
    pub size_over_reference: f64,
    /// |H| / (f·n^{1+1/k})
    pub size_over_f_reference: f64,
    pub weight: f64,
    pub graph_weight: f64,
}

pub fn spanner_stats(g: &ColoredGraph, h: &[EdgeId], k: usize, f: usize) -> SpannerStats {
    let n = g.n();
    let reference = (n as f64).powf(1.0 + 1.0 / k.max(1) as f64);
    let weight: f64 = h.iter().map(|&e| g.edge(e).weight).sum();
    SpannerStats {
        n,
        m: g.m(),
        size: h.len(),
        reference,
        size_over_reference: h.len() as f64 / reference,
        size_over_f_reference: h.len() as f64 / (f.max(1) as f64 * reference),
        weight,
        graph_weight: g.edges().iter().map(|e| e.weight).sum(),
    }
}
