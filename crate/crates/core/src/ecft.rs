//! Edge-color fault-tolerant spanners: the park-based (2k−1)-spanner and the simpler
//! 3-spanner it generalizes.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::json;

use crate::colorset::{subsets_up_to, Color, ColorSet};
use crate::engine::{self, approx, EngineCfg, Symmetry, Voting};
use crate::error::{ensure_lemma, Error, Result};
use crate::graph::{ColorMode, ColoredGraph, EdgeId, Vertex};
use crate::params::{sample_center_levels, ParamConfig, Schedule};
use crate::result::{Dcsn, LevelStats, SpannerResult};

/// Optional outer loop that reruns the vertex-colored construction when its output is large.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Repetition {
    /// At most c_r·⌈ln n⌉ runs.
    pub c_r: u32,
    /// Rerun while |H| > multiple·k·f^{1−1/k}·n^{1+1/k}.
    pub multiple: f64,
}

#[derive(Clone, Debug)]
pub struct CftConfig {
    pub params: ParamConfig,
    pub seed: u64,
    pub voting: Voting,
    /// Machine-check invariants and replay safe decisions.
    pub audit: bool,
    pub trace: bool,
    pub symmetry: Symmetry,
    pub repetition: Option<Repetition>,
    /// Global-cap constant of the 3-spanner's first level.
    pub c_g: f64,
}

impl Default for CftConfig {
    fn default() -> Self {
        CftConfig {
            params: ParamConfig::practical(),
            seed: 0,
            voting: Voting::Exact,
            audit: false,
            trace: false,
            symmetry: Symmetry::Sequential,
            repetition: None,
            c_g: 4.0,
        }
    }
}

impl CftConfig {
    pub fn engine(&self, seed: u64) -> EngineCfg {
        EngineCfg {
            voting: self.voting,
            seed,
            audit: self.audit,
            trace: self.trace,
            symmetry: self.symmetry,
        }
    }
}

/// Shared argument normalization. Returns the effective f, or a finished result for k = 1.
pub(crate) fn normalize(
    algorithm: &str,
    g: &ColoredGraph,
    mode: ColorMode,
    f: usize,
    k: usize,
    seed: u64,
) -> Result<std::result::Result<(u32, Vec<String>), SpannerResult>> {
    if g.mode() != mode {
        return Err(Error::InvalidGraph(format!(
            "{algorithm} needs a {} graph",
            mode.as_str()
        )));
    }
    if k == 0 {
        return Err(Error::InvalidParams("k must be at least 1".into()));
    }
    let mut warnings = Vec::new();
    let f = if f == 0 {
        warnings.push("f = 0 treated as f = 1".to_string());
        1
    } else {
        f
    };
    if k == 1 {
        let mut res = SpannerResult::new(algorithm, mode, g.n(), g.m(), 1, f, seed);
        res.kept = (0..g.m()).collect();
        res.warnings = warnings;
        res.warnings.push("k = 1: the spanner is the whole graph".into());
        return Ok(Err(res));
    }
    let f = u32::try_from(f).map_err(|_| Error::InvalidParams("f too large".into()))?;
    Ok(Ok((f, warnings)))
}

pub(crate) fn schedule_json(sched: &Schedule) -> serde_json::Value {
    json!({
        "param_mode": sched.mode,
        "d": sched.d.to_string(),
        "p": sched.p,
        "rho": sched.rho.to_string(),
        "bucket_size": sched.bucket_size,
        "attachment_bounds": sched.levels.iter()
            .map(|lp| approx(&engine::attachment_bound(lp)))
            .collect::<Vec<_>>(),
    })
}

pub fn build_ecft_spanner(g: &ColoredGraph, f: usize, k: usize, cfg: &CftConfig) -> Result<SpannerResult> {
    let (f, warnings) = match normalize("ecft", g, ColorMode::Ecft, f, k, cfg.seed)? {
        Ok(x) => x,
        Err(done) => return Ok(done),
    };
    let sched = Schedule::new(ColorMode::Ecft, g.n(), k, f, &cfg.params)?;
    let centers = sample_center_levels(g.n(), k, sched.p, cfg.seed);
    let mut res = engine::run("ecft", g, &sched, &centers, &cfg.engine(cfg.seed))?;
    res.warnings = warnings;
    res.extra = json!({ "schedule": schedule_json(&sched) });
    Ok(res)
}

/// How a postponed edge's endpoint proves it can reach S_1 despite f faults.
#[derive(Clone, Debug)]
enum Witness {
    /// 2f one-edge paths to S_1 of pairwise distinct colors, none of the edge's color.
    Colorful(Vec<EdgeId>),
    /// One edge to S_1 of the edge's own color.
    Mono(EdgeId),
}

/// Two-edge path v → u' → s kept at the last level.
#[derive(Clone, Debug)]
struct Two {
    edges: [EdgeId; 2],
    colors: ColorSet,
}

impl Two {
    fn mono(&self) -> bool {
        self.colors.len() == 1
    }
}

fn pow_2f(f: u32, e: i32) -> f64 {
    (2.0 * f as f64).powi(e)
}

/// Whether adding a path with `colors` to the paths already at one center keeps the local rule:
/// every J-link holds at most (2f)^{2−|J|} paths, at most (2f)^{1−|J|} of them monochromatic.
fn local_rule_allows(at_s: &[Two], colors: &ColorSet, f: u32) -> bool {
    let mono = colors.len() == 1;
    colors.subsets().into_iter().all(|j| {
        let link: Vec<&Two> = at_s.iter().filter(|p| j.is_subset(&p.colors)).collect();
        let total_ok = (link.len() + 1) as f64 <= pow_2f(f, 2 - j.len() as i32);
        let mono_ok = !mono
            || (link.iter().filter(|p| p.mono()).count() + 1) as f64 <= pow_2f(f, 1 - j.len() as i32);
        total_ok && mono_ok
    })
}

/// Search a J ⊆ `colors` whose link at the center is saturated, and inside it a path that
/// avoids `faults`.
fn replay_local(at_s: &[Two], colors: &ColorSet, mono: bool, f: u32, faults: &ColorSet) -> Option<usize> {
    for j in colors.subsets() {
        let link: Vec<usize> = (0..at_s.len())
            .filter(|&x| j.is_subset(&at_s[x].colors))
            .collect();
        let mono_link: Vec<usize> = link.iter().copied().filter(|&x| at_s[x].mono()).collect();
        let tight_total = (link.len() + 1) as f64 > pow_2f(f, 2 - j.len() as i32);
        let tight_mono = mono && (mono_link.len() + 1) as f64 > pow_2f(f, 1 - j.len() as i32);
        for (tight, cand) in [(tight_total, &link), (tight_mono, &mono_link)] {
            if tight {
                if let Some(&x) = cand.iter().find(|&&x| !at_s[x].colors.intersects(faults)) {
                    return Some(x);
                }
            }
        }
    }
    None
}

/// The 3-spanner for simple graphs with a one-edge first level and a voting last level.
pub fn warmup_3spanner(g: &ColoredGraph, f: usize, cfg: &CftConfig) -> Result<SpannerResult> {
    let (f, warnings) = match normalize("warmup3", g, ColorMode::Ecft, f, 2, cfg.seed)? {
        Ok(x) => x,
        Err(done) => return Ok(done),
    };
    if g.has_parallel_edges() {
        return Err(Error::InvalidGraph("the 3-spanner needs a simple graph".into()));
    }
    let n = g.n();
    let m = g.m();
    let p = (n.max(2) as f64).powf(-0.5);
    let centers = sample_center_levels(n, 2, p, cfg.seed);
    let cap = (cfg.c_g * (n.max(2) as f64).ln() / p).ceil().max(1.0) as usize;
    let two_f = 2 * f as usize;
    let color = |e: EdgeId| g.edge(e).color.expect("edge color");
    let order = |v: Vertex| {
        let mut es: Vec<EdgeId> = g.adj(v).iter().map(|&(_, e)| e).collect();
        es.sort_by(|&a, &b| g.edge(a).weight.total_cmp(&g.edge(b).weight).then(a.cmp(&b)));
        es
    };

    let mut res = SpannerResult::new("warmup3", ColorMode::Ecft, n, m, 2, f as usize, cfg.seed);
    res.warnings = warnings;
    res.center_counts = vec![n, centers.iter().filter(|&&l| l >= 1).count()];
    let mut h = vec![false; m];

    // First level: keep under the global rule, postpone with a witness otherwise.
    let mut st0 = LevelStats::new(0, n);
    st0.edges = m;
    let mut dec0: Vec<[Option<Dcsn>; 2]> = vec![[None, None]; m];
    let mut wit: Vec<[Option<Witness>; 2]> = vec![[None, None]; m];
    let mut cases = [0usize; 2];
    for u in 0..n {
        let mut kept: Vec<EdgeId> = Vec::new();
        let mut per_color: BTreeMap<Color, usize> = BTreeMap::new();
        for e in order(u) {
            let side = usize::from(g.edge(e).u != u);
            let c = color(e);
            let cnt = per_color.get(&c).copied().unwrap_or(0);
            if kept.len() < two_f * cap && cnt < cap {
                kept.push(e);
                *per_color.entry(c).or_default() += 1;
                dec0[e][side] = Some(Dcsn::Keep);
                st0.record(u, Dcsn::Keep);
                continue;
            }
            let to_s1 = |x: &EdgeId| centers[g.edge(*x).other(u)] >= 1;
            let same = kept.iter().copied().find(|x| color(*x) == c && to_s1(x));
            let w = if cnt >= cap {
                cases[1] += 1;
                same.map(Witness::Mono)
            } else {
                cases[0] += 1;
                let mut seen = ColorSet::new();
                let mut pick = Vec::new();
                for &x in kept.iter().filter(|x| to_s1(x)) {
                    if pick.len() < two_f && seen.insert(color(x)) {
                        pick.push(x);
                    }
                }
                match same {
                    Some(x) => Some(Witness::Mono(x)),
                    None if pick.len() == two_f => Some(Witness::Colorful(pick)),
                    None => None,
                }
            };
            match w {
                Some(w) => {
                    dec0[e][side] = Some(Dcsn::Pstpn);
                    wit[e][side] = Some(w);
                    st0.record(u, Dcsn::Pstpn);
                }
                None => {
                    st0.fallback_sampler += 1;
                    dec0[e][side] = Some(Dcsn::Keep);
                    st0.record(u, Dcsn::Keep);
                }
            }
        }
    }
    let mut e1 = Vec::new();
    for e in 0..m {
        match dec0[e] {
            [Some(Dcsn::Pstpn), Some(Dcsn::Pstpn)] => {
                e1.push(e);
                st0.postponed_edges += 1;
            }
            _ => {
                h[e] = true;
                st0.kept_edges += 1;
            }
        }
    }
    let h1 = h.clone();
    res.levels.push(st0);

    // Last level: both endpoints vote with the one-edge witnesses of the other side.
    let mut st1 = LevelStats::new(1, n);
    st1.edges = e1.len();
    let mut dec1: Vec<[Option<Dcsn>; 2]> = vec![[None, None]; m];
    let mut replays = 0usize;
    let mut by_vertex: Vec<Vec<EdgeId>> = vec![Vec::new(); n];
    for &e in &e1 {
        by_vertex[g.edge(e).u].push(e);
        by_vertex[g.edge(e).v].push(e);
    }
    for v in 0..n {
        let mut es = std::mem::take(&mut by_vertex[v]);
        es.sort_by(|&a, &b| g.edge(a).weight.total_cmp(&g.edge(b).weight).then(a.cmp(&b)));
        let mut hat: BTreeMap<Vertex, Vec<Two>> = BTreeMap::new();
        let mut kept_here: Vec<EdgeId> = Vec::new();
        for e in es {
            let ed = g.edge(e);
            let u = ed.other(v);
            let side_v = usize::from(ed.u != v);
            let w = wit[e][1 - side_v].as_ref().expect("postponed edge has a witness");
            let ce = color(e);
            let paths: Vec<EdgeId> = match w {
                Witness::Colorful(ps) => ps.clone(),
                Witness::Mono(x) => vec![*x],
            };
            let mut keep_votes = Vec::new();
            let mut safe_votes = Vec::new();
            for &x in &paths {
                let s = g.edge(x).other(u);
                let colors = ColorSet::from_slice(&[ce, color(x)]);
                let at_s = hat.get(&s).map(|v| v.as_slice()).unwrap_or(&[]);
                if local_rule_allows(at_s, &colors, f) {
                    keep_votes.push(x);
                } else {
                    safe_votes.push(x);
                }
            }
            let safe = match w {
                Witness::Colorful(_) => safe_votes.len() > f as usize,
                Witness::Mono(_) => !safe_votes.is_empty(),
            };
            if safe {
                if cfg.audit {
                    let mono = matches!(w, Witness::Mono(_));
                    replay_warmup(g, &hat, &safe_votes, e, v, u, mono, f, &h1, &kept_here)?;
                    replays += 1;
                }
                dec1[e][side_v] = Some(Dcsn::Safe);
                st1.record(v, Dcsn::Safe);
            } else {
                for x in keep_votes {
                    let s = g.edge(x).other(u);
                    hat.entry(s).or_default().push(Two {
                        edges: [e, x],
                        colors: ColorSet::from_slice(&[ce, color(x)]),
                    });
                }
                kept_here.push(e);
                dec1[e][side_v] = Some(Dcsn::Keep);
                st1.record(v, Dcsn::Keep);
            }
        }
        if cfg.audit {
            for at_s in hat.values() {
                for (idx, p) in at_s.iter().enumerate() {
                    let before = &at_s[..idx];
                    ensure_lemma!(
                        local_rule_allows(before, &p.colors, f),
                        "local rule broken at vertex {v}"
                    );
                }
            }
        }
    }
    for &e in &e1 {
        if dec1[e].contains(&Some(Dcsn::Keep)) {
            h[e] = true;
            st1.kept_edges += 1;
        } else {
            st1.discarded_edges += 1;
        }
    }
    st1.safe_audits = replays;
    res.levels.push(st1);
    res.kept = (0..m).filter(|&e| h[e]).collect();
    res.extra = json!({ "cap": cap, "case_colorful": cases[0], "case_mono": cases[1] });
    Ok(res)
}

/// For every fault set sparing e, join a surviving safe voter with a surviving local path.
#[allow(clippy::too_many_arguments)]
fn replay_warmup(
    g: &ColoredGraph,
    hat: &BTreeMap<Vertex, Vec<Two>>,
    safe_votes: &[EdgeId],
    e: EdgeId,
    v: Vertex,
    u: Vertex,
    mono: bool,
    f: u32,
    h1: &[bool],
    kept_here: &[EdgeId],
) -> Result<()> {
    let ce = g.edge(e).color.expect("edge color");
    let mut universe = ColorSet::new();
    for &x in safe_votes {
        universe.insert(g.edge(x).color.expect("edge color"));
        if let Some(at_s) = hat.get(&g.edge(x).other(u)) {
            for p in at_s {
                universe = universe.union(&p.colors);
            }
        }
    }
    let universe: Vec<Color> = universe.iter().filter(|&c| c != ce).collect();
    let w = g.edge(e).weight;
    for faults in subsets_up_to(&universe, f as usize) {
        let p1 = safe_votes
            .iter()
            .copied()
            .find(|&x| !faults.contains(g.edge(x).color.expect("edge color")));
        let Some(p1) = p1 else {
            return Err(Error::LemmaViolation(format!(
                "no safe voter of edge {e} survives {faults}"
            )));
        };
        let s = g.edge(p1).other(u);
        let at_s = hat.get(&s).map(|v| v.as_slice()).unwrap_or(&[]);
        let colors = ColorSet::from_slice(&[ce, g.edge(p1).color.expect("edge color")]);
        let x = replay_local(at_s, &colors, mono, f, &faults).ok_or_else(|| {
            Error::LemmaViolation(format!("no surviving local path for edge {e} under {faults}"))
        })?;
        let p2 = &at_s[x];
        let mut total = g.edge(p1).weight;
        ensure_lemma!(h1[p1], "voter edge {p1} is not in the spanner");
        ensure_lemma!(g.edge(p2.edges[0]).other(v) == g.edge(p2.edges[1]).other(s), "local path is not a walk");
        for &y in &p2.edges {
            ensure_lemma!(h1[y] || kept_here.contains(&y), "local edge {y} is not in the spanner");
            ensure_lemma!(g.edge(y).weight <= w, "local edge {y} is heavier than edge {e}");
            ensure_lemma!(!g.is_damaged(y, &faults), "local edge {y} is damaged");
            total += g.edge(y).weight;
        }
        ensure_lemma!(total <= 3.0 * w * (1.0 + 1e-12), "detour for edge {e} is too long");
    }
    Ok(())
}
