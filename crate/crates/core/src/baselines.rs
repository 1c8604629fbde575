//! Reference constructions: edge-centric Baswana-Sen, Parter's vertex-fault algorithm in its
//! edge-centric form, and the exponential fault-tolerant greedy for color faults.
//!
//! The two clustering baselines share a level driver: every vertex scans its undecided edges in
//! (weight, id) order, votes keep/safe/postpone, and the votes are combined per edge.

use std::collections::HashMap;
use std::sync::Arc;

use rand::Rng as _;
use serde::Serialize;
use serde_json::json;

use crate::colorset::{count_up_to, subsets_up_to, Color};
use crate::engine::{Voting, AUDIT_BUDGET};
use crate::error::{ensure_lemma, Error, Result};
use crate::graph::{ColoredGraph, Dijkstra, EdgeId, Vertex};
use crate::params::sample_center_levels;
use crate::result::{Dcsn, LevelStats, SpannerResult};
use crate::rng::stream;

/// A path in H from `verts[0]` to a center, `edges[j]` joining `verts[j]` and `verts[j+1]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Route {
    pub verts: Vec<Vertex>,
    pub edges: Vec<EdgeId>,
}

impl Route {
    pub fn trivial(u: Vertex) -> Self {
        Route {
            verts: vec![u],
            edges: Vec::new(),
        }
    }

    pub fn start(&self) -> Vertex {
        self.verts[0]
    }

    pub fn end(&self) -> Vertex {
        *self.verts.last().expect("route has a start")
    }

    pub fn hop_len(&self) -> usize {
        self.edges.len()
    }

    /// v —e→ self
    pub fn prepend(&self, e: EdgeId, v: Vertex) -> Route {
        let mut verts = Vec::with_capacity(self.verts.len() + 1);
        verts.push(v);
        verts.extend_from_slice(&self.verts);
        let mut edges = Vec::with_capacity(self.edges.len() + 1);
        edges.push(e);
        edges.extend_from_slice(&self.edges);
        Route { verts, edges }
    }

    /// Number of words to ship this route in a message.
    pub fn words(&self) -> usize {
        self.hop_len() + 2
    }
}

/// Undecided edges of one level with the attachment each endpoint holds (side 0 at e.u).
#[derive(Clone, Debug)]
pub struct Level<A> {
    pub level: usize,
    pub edges: Vec<EdgeId>,
    pub att: Vec<Option<[Arc<A>; 2]>>,
}

impl<A> Level<A> {
    fn initial(g: &ColoredGraph, mut make: impl FnMut(Vertex) -> Arc<A>) -> Self {
        let per_vertex: Vec<Arc<A>> = (0..g.n()).map(&mut make).collect();
        Level {
            level: 0,
            edges: (0..g.m()).collect(),
            att: g
                .edges()
                .iter()
                .map(|e| Some([per_vertex[e.u].clone(), per_vertex[e.v].clone()]))
                .collect(),
        }
    }
}

/// One incident undecided edge as seen from the processing vertex.
#[derive(Clone, Debug)]
pub struct Incident<A> {
    pub id: EdgeId,
    pub other: Vertex,
    pub weight: f64,
    /// The neighbor's attachment, starting at `other`.
    pub att: Arc<A>,
}

#[derive(Clone, Debug)]
pub struct BaseInput<A> {
    pub v: Vertex,
    pub edges: Vec<Incident<A>>,
}

#[derive(Clone, Debug)]
pub struct BaseOutput<A> {
    pub decisions: Vec<(EdgeId, Dcsn)>,
    /// Attachments starting at this vertex for edges it postponed.
    pub postponed: Vec<(EdgeId, Arc<A>)>,
    pub stats: LevelStats,
    /// Material to re-check safe decisions once the level's kept edges are known.
    pub audits: Vec<SafeAudit>,
}

impl<A> BaseOutput<A> {
    fn new(level: usize, n: usize) -> Self {
        BaseOutput {
            decisions: Vec::new(),
            postponed: Vec::new(),
            stats: LevelStats::new(level, n),
            audits: Vec::new(),
        }
    }

    fn decide(&mut self, v: Vertex, id: EdgeId, d: Dcsn) {
        self.decisions.push((id, d));
        self.stats.record(v, d);
    }
}

/// What a safe decision claims: u and v are joined in H by walks built from these routes.
#[derive(Clone, Debug)]
pub struct SafeAudit {
    pub edge: EdgeId,
    pub v: Vertex,
    pub u: Vertex,
    /// Routes starting at u.
    pub from_u: Vec<Route>,
    /// Routes starting at v.
    pub from_v: Vec<Route>,
}

pub fn base_inputs<A>(g: &ColoredGraph, st: &Level<A>) -> Vec<BaseInput<A>> {
    let mut inputs: Vec<BaseInput<A>> = (0..g.n())
        .map(|v| BaseInput { v, edges: Vec::new() })
        .collect();
    for &id in &st.edges {
        let e = g.edge(id);
        let [au, av] = st.att[id].as_ref().expect("undecided edge has attachments");
        inputs[e.u].edges.push(Incident {
            id,
            other: e.v,
            weight: e.weight,
            att: av.clone(),
        });
        inputs[e.v].edges.push(Incident {
            id,
            other: e.u,
            weight: e.weight,
            att: au.clone(),
        });
    }
    for inp in &mut inputs {
        inp.edges
            .sort_by(|a, b| a.weight.total_cmp(&b.weight).then(a.id.cmp(&b.id)));
    }
    inputs
}

pub struct BaseOutcome<A> {
    pub kept: Vec<EdgeId>,
    pub next: Level<A>,
    pub stats: LevelStats,
    pub audits: Vec<SafeAudit>,
}

/// Kept if either endpoint keeps, postponed if both postpone, discarded otherwise.
pub fn base_combine<A>(g: &ColoredGraph, st: &Level<A>, outs: Vec<BaseOutput<A>>) -> Result<BaseOutcome<A>> {
    let m = g.m();
    let mut stats = LevelStats::new(st.level, g.n());
    stats.edges = st.edges.len();
    let mut dec: Vec<[Option<Dcsn>; 2]> = vec![[None, None]; m];
    let mut post: Vec<[Option<Arc<A>>; 2]> = (0..m).map(|_| [None, None]).collect();
    let mut audits = Vec::new();
    for (v, o) in outs.into_iter().enumerate() {
        stats.absorb(&o.stats);
        let side = |id: EdgeId| usize::from(g.edge(id).u != v);
        for (id, d) in o.decisions {
            dec[id][side(id)] = Some(d);
        }
        for (id, a) in o.postponed {
            post[id][side(id)] = Some(a);
        }
        audits.extend(o.audits);
    }
    let mut kept = Vec::new();
    let mut next = Level {
        level: st.level + 1,
        edges: Vec::new(),
        att: (0..m).map(|_| None).collect(),
    };
    for &id in &st.edges {
        let both = match dec[id] {
            [Some(a), Some(b)] => [a, b],
            _ => return Err(Error::SimulationFault(format!("edge {id} is missing a decision"))),
        };
        if both.contains(&Dcsn::Keep) {
            kept.push(id);
            stats.kept_edges += 1;
        } else if both == [Dcsn::Pstpn, Dcsn::Pstpn] {
            let [pa, pb] = std::mem::take(&mut post[id]);
            next.att[id] = Some([pa.expect("postponed at u"), pb.expect("postponed at v")]);
            next.edges.push(id);
            stats.postponed_edges += 1;
        } else {
            stats.discarded_edges += 1;
        }
    }
    Ok(BaseOutcome {
        kept,
        next,
        stats,
        audits,
    })
}

fn ln_ceil(n: usize) -> f64 {
    (n.max(2) as f64).ln().ceil()
}

// ---------------------------------------------------------------------------------------------
// Baswana-Sen

#[derive(Clone, Debug)]
pub struct BsCtx<'a> {
    pub level: usize,
    pub last: bool,
    /// Global rule: at most this many paths per vertex.
    pub cap: usize,
    pub centers: &'a [u8],
    pub audit: bool,
}

/// Global cap c_g·⌈ln n⌉/p.
pub fn bs_cap(n: usize, p: f64, c_g: f64) -> usize {
    (c_g * ln_ceil(n) / p).ceil() as usize
}

/// One vertex of one Baswana-Sen level.
pub fn bs_vertex(cx: &BsCtx<'_>, inp: &BaseInput<Route>, n: usize) -> BaseOutput<Route> {
    let v = inp.v;
    let mut out = BaseOutput::new(cx.level, n);
    let mut hat: Vec<Arc<Route>> = Vec::new();
    let mut by_center: HashMap<Vertex, usize> = HashMap::new();
    let mut witness: Option<Option<Arc<Route>>> = None;
    for ie in &inp.edges {
        let center = ie.att.end();
        if let Some(&x) = by_center.get(&center) {
            out.decide(v, ie.id, Dcsn::Safe);
            if cx.audit {
                out.audits.push(SafeAudit {
                    edge: ie.id,
                    v,
                    u: ie.other,
                    from_u: vec![(*ie.att).clone()],
                    from_v: vec![(*hat[x]).clone()],
                });
            }
        } else if hat.len() < cx.cap {
            by_center.insert(center, hat.len());
            hat.push(Arc::new(ie.att.prepend(ie.id, v)));
            out.decide(v, ie.id, Dcsn::Keep);
        } else if cx.last {
            out.stats.fallback_last_level += 1;
            out.decide(v, ie.id, Dcsn::Keep);
        } else {
            let w = witness.get_or_insert_with(|| {
                hat.iter()
                    .find(|r| cx.centers[r.end()] as usize > cx.level)
                    .cloned()
            });
            match w {
                Some(r) => {
                    out.postponed.push((ie.id, r.clone()));
                    out.decide(v, ie.id, Dcsn::Pstpn);
                }
                None => {
                    out.stats.fallback_no_witness += 1;
                    out.decide(v, ie.id, Dcsn::Keep);
                }
            }
        }
    }
    out.stats.max_attachment_paths = hat.len();
    out
}

#[derive(Clone, Debug)]
pub struct BsConfig {
    pub c_g: f64,
    pub seed: u64,
    pub audit: bool,
}

impl Default for BsConfig {
    fn default() -> Self {
        BsConfig {
            c_g: 4.0,
            seed: 0,
            audit: false,
        }
    }
}

/// Classic (2k−1)-spanner. Colors are ignored; multigraphs are fine.
pub fn baswana_sen(g: &ColoredGraph, k: usize, cfg: &BsConfig) -> Result<SpannerResult> {
    if k == 0 {
        return Err(Error::InvalidParams("k must be at least 1".into()));
    }
    let n = g.n();
    let p = (n.max(2) as f64).powf(-1.0 / k as f64);
    let centers = sample_center_levels(n, k, p, cfg.seed);
    let cap = bs_cap(n, p, cfg.c_g);
    let mut res = SpannerResult::new("baswana-sen", g.mode(), n, g.m(), k, 0, cfg.seed);
    res.center_counts = center_counts(&centers, k);
    let mut h = vec![false; g.m()];
    let mut st = Level::initial(g, |u| Arc::new(Route::trivial(u)));
    for i in 0..k {
        let cx = BsCtx {
            level: i,
            last: i + 1 == k,
            cap,
            centers: &centers,
            audit: cfg.audit,
        };
        let outs = base_inputs(g, &st).iter().map(|inp| bs_vertex(&cx, inp, n)).collect();
        let mut oc = base_combine(g, &st, outs)?;
        mark(&mut h, &oc.kept);
        for a in &oc.audits {
            replay_walks(g, &h, a, i, 0, 1)?;
            oc.stats.safe_audits += 1;
        }
        res.levels.push(oc.stats);
        st = oc.next;
    }
    finish(&mut res, &st, &h)?;
    res.extra = json!({ "p": p, "cap": cap, "c_g": cfg.c_g });
    Ok(res)
}

fn center_counts(centers: &[u8], k: usize) -> Vec<usize> {
    (0..k)
        .map(|i| centers.iter().filter(|&&l| l as usize >= i).count())
        .collect()
}

fn mark(h: &mut [bool], kept: &[EdgeId]) {
    for &e in kept {
        h[e] = true;
    }
}

fn finish<A>(res: &mut SpannerResult, st: &Level<A>, h: &[bool]) -> Result<()> {
    if !st.edges.is_empty() {
        return Err(Error::LemmaViolation(format!(
            "{} edges remain undecided after the last level",
            st.edges.len()
        )));
    }
    res.kept = (0..h.len()).filter(|&e| h[e]).collect();
    Ok(())
}

// ---------------------------------------------------------------------------------------------
// Parter's vertex-fault algorithm

#[derive(Clone, Debug)]
pub struct ParterConfig {
    /// Cap constant: postpone once c·kf·⌈ln n⌉/p disjoint paths are collected.
    pub c: f64,
    pub voting: Voting,
    pub seed: u64,
    pub audit: bool,
}

impl Default for ParterConfig {
    fn default() -> Self {
        ParterConfig {
            c: 1.0,
            voting: Voting::Exact,
            seed: 0,
            audit: false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ParterCtx<'a> {
    pub level: usize,
    pub last: bool,
    pub k: usize,
    pub f: usize,
    pub cap: usize,
    pub centers: &'a [u8],
    pub voting: Voting,
    pub seed: u64,
    pub n: usize,
    pub audit: bool,
}

impl ParterCtx<'_> {
    /// 8kf, the size of every attached collection.
    pub fn bundle(&self) -> usize {
        8 * self.k * self.f
    }
}

pub fn parter_cap(n: usize, k: usize, f: usize, p: f64, c: f64) -> usize {
    (c * (k * f) as f64 * ln_ceil(n) / p).ceil() as usize
}

/// A route usable from v: avoids every vertex already on v's paths, and v itself.
fn disjoint(r: &Route, used: &[bool], v: Vertex) -> bool {
    r.verts.iter().all(|&x| x != v && !used[x])
}

/// One vertex of one level. `used` marks vertices on v's collected paths other than v.
pub fn parter_vertex(cx: &ParterCtx<'_>, inp: &BaseInput<Vec<Route>>) -> BaseOutput<Vec<Route>> {
    let v = inp.v;
    let mut out = BaseOutput::new(cx.level, cx.n);
    let mut hat: Vec<Route> = Vec::new();
    let mut used = vec![false; cx.n];
    let mut witness: Option<Option<Arc<Vec<Route>>>> = None;
    let mut rng = stream(cx.seed, "parter-vote", ((cx.level as u64) << 32) | v as u64);
    for ie in &inp.edges {
        let u = ie.other;
        if hat.len() >= cx.cap {
            if cx.last {
                out.stats.fallback_last_level += 1;
                out.decide(v, ie.id, Dcsn::Keep);
                continue;
            }
            let w = witness.get_or_insert_with(|| {
                let next: Vec<Route> = hat
                    .iter()
                    .filter(|r| cx.centers[r.end()] as usize > cx.level)
                    .take(cx.bundle())
                    .cloned()
                    .collect();
                (next.len() == cx.bundle()).then(|| Arc::new(next))
            });
            match w {
                Some(b) => {
                    out.postponed.push((ie.id, b.clone()));
                    out.decide(v, ie.id, Dcsn::Pstpn);
                }
                None => {
                    out.stats.fallback_no_witness += 1;
                    out.decide(v, ie.id, Dcsn::Keep);
                }
            }
            continue;
        }
        if used[u] {
            out.decide(v, ie.id, Dcsn::Keep);
            continue;
        }
        let pu: &[Route] = &ie.att;
        let pick = match cx.voting {
            Voting::Exact => pu.iter().position(|r| disjoint(r, &used, v)),
            Voting::Sampled { c_s } => {
                out.stats.sampled_decisions += 1;
                let draws = (c_s as f64 * ln_ceil(cx.n)) as usize;
                let hit = (0..draws)
                    .map(|_| rng.gen_range(0..pu.len()))
                    .find(|&x| disjoint(&pu[x], &used, v));
                match hit {
                    Some(x) => Some(x),
                    None => {
                        // Declaring safe needs 6kf blocked routes; otherwise decide exactly.
                        let blocked = pu.iter().filter(|r| !disjoint(r, &used, v)).count();
                        if blocked >= 6 * cx.k * cx.f {
                            None
                        } else {
                            out.stats.sampled_exact_fallbacks += 1;
                            pu.iter().position(|r| disjoint(r, &used, v))
                        }
                    }
                }
            }
        };
        match pick {
            Some(x) => {
                let r = pu[x].prepend(ie.id, v);
                for &y in &r.verts[1..] {
                    used[y] = true;
                }
                hat.push(r);
                out.decide(v, ie.id, Dcsn::Keep);
            }
            None => {
                out.decide(v, ie.id, Dcsn::Safe);
                if cx.audit {
                    out.audits.push(SafeAudit {
                        edge: ie.id,
                        v,
                        u,
                        from_u: pu.to_vec(),
                        from_v: hat.clone(),
                    });
                }
            }
        }
    }
    out.stats.max_attachment_paths = hat.len();
    out
}

/// f-VFT (2k−1)-spanner of a simple graph. Colors are ignored.
pub fn parter_vft(g: &ColoredGraph, f: usize, k: usize, cfg: &ParterConfig) -> Result<SpannerResult> {
    if k == 0 || f == 0 {
        return Err(Error::InvalidParams("parter-vft needs k ≥ 1 and f ≥ 1".into()));
    }
    if g.has_parallel_edges() {
        return Err(Error::InvalidGraph("parter-vft needs a simple graph".into()));
    }
    let n = g.n();
    let p = ((n.max(2) as f64) / f as f64).max(1.0).powf(-1.0 / k as f64);
    let centers = sample_center_levels(n, k, p, cfg.seed);
    let cap = parter_cap(n, k, f, p, cfg.c);
    let mut res = SpannerResult::new("parter-vft", g.mode(), n, g.m(), k, f, cfg.seed);
    res.center_counts = center_counts(&centers, k);
    let bundle = 8 * k * f;
    let mut h = vec![false; g.m()];
    let mut st = Level::initial(g, |u| Arc::new(vec![Route::trivial(u); bundle]));
    let mut min_survivors: Option<usize> = None;
    for i in 0..k {
        let cx = ParterCtx {
            level: i,
            last: i + 1 == k,
            k,
            f,
            cap,
            centers: &centers,
            voting: cfg.voting,
            seed: cfg.seed,
            n,
            audit: cfg.audit,
        };
        let outs = base_inputs(g, &st).iter().map(|inp| parter_vertex(&cx, inp)).collect();
        let mut oc = base_combine(g, &st, outs)?;
        mark(&mut h, &oc.kept);
        let need = match cfg.voting {
            Voting::Exact => f + 1,
            Voting::Sampled { .. } => 1,
        };
        for a in &oc.audits {
            match replay_walks(g, &h, a, i, f, need)? {
                Some(s) => {
                    oc.stats.safe_audits += 1;
                    min_survivors = Some(min_survivors.map_or(s, |m| m.min(s)));
                }
                None => oc.stats.audit_skipped += 1,
            }
        }
        res.levels.push(oc.stats);
        st = oc.next;
    }
    finish(&mut res, &st, &h)?;
    res.extra = json!({
        "p": p,
        "cap": cap,
        "bundle": bundle,
        "voting": format!("{:?}", cfg.voting),
        "min_surviving_walks": min_survivors,
    });
    Ok(res)
}

/// Pair routes from u with routes from v that cross them, and glue each pair at the first
/// crossing into a u–v walk. A route from u through v is a walk on its own.
fn build_walks(a: &SafeAudit) -> Vec<Vec<EdgeId>> {
    let mut walks = Vec::new();
    let mut left: Vec<&Route> = Vec::new();
    for r in &a.from_u {
        match r.verts.iter().position(|&x| x == a.v) {
            Some(j) => walks.push(r.edges[..j].to_vec()),
            None => left.push(r),
        }
    }
    let hits = |p: &Route, q: &Route| p.verts.iter().any(|x| q.verts[1..].contains(x));
    let mut q_used = vec![false; a.from_v.len()];
    loop {
        let found = left.iter().enumerate().find_map(|(pi, p)| {
            (0..a.from_v.len())
                .find(|&qi| !q_used[qi] && hits(p, &a.from_v[qi]))
                .map(|qi| (pi, qi))
        });
        let Some((pi, qi)) = found else { break };
        let p = left[pi];
        let q = &a.from_v[qi];
        let (pa, qb) = p
            .verts
            .iter()
            .enumerate()
            .find_map(|(j, x)| q.verts.iter().position(|y| y == x).map(|b| (j, b)))
            .expect("pair crosses");
        let mut w = p.edges[..pa].to_vec();
        w.extend(q.edges[..qb].iter().rev());
        walks.push(w);
        q_used[qi] = true;
        left.retain(|r| !hits(r, q));
    }
    walks
}

/// Re-check a safe decision against the current H. Returns the fewest walks surviving any
/// enumerated vertex fault set, or None when the enumeration is over budget.
fn replay_walks(g: &ColoredGraph, h: &[bool], a: &SafeAudit, level: usize, f: usize, need: usize) -> Result<Option<usize>> {
    let w = g.edge(a.edge).weight;
    let walks = build_walks(a);
    let mut verts: Vec<Vec<Vertex>> = Vec::with_capacity(walks.len());
    for walk in &walks {
        ensure_lemma!(
            walk.len() <= 2 * level + 1,
            "safe edge {}: walk of {} hops at level {level}",
            a.edge,
            walk.len()
        );
        let mut at = a.u;
        let mut vs = vec![at];
        for &e in walk {
            let ed = g.edge(e);
            ensure_lemma!(h[e], "safe edge {}: walk edge {e} is not in H", a.edge);
            ensure_lemma!(ed.weight <= w, "safe edge {}: walk edge {e} is heavier", a.edge);
            ensure_lemma!(ed.u == at || ed.v == at, "safe edge {}: walk breaks at {e}", a.edge);
            at = ed.other(at);
            vs.push(at);
        }
        ensure_lemma!(at == a.v, "safe edge {}: walk ends at {at}", a.edge);
        verts.push(vs);
    }
    let mut pool: Vec<Color> = verts
        .iter()
        .flatten()
        .filter(|&&x| x != a.u && x != a.v)
        .map(|&x| x as Color)
        .collect();
    pool.sort_unstable();
    pool.dedup();
    if count_up_to(pool.len() as u64, f as u64) > AUDIT_BUDGET as u128 {
        return Ok(None);
    }
    let mut fewest = usize::MAX;
    for fs in subsets_up_to(&pool, f) {
        let alive = verts
            .iter()
            .filter(|vs| !vs.iter().any(|&x| fs.contains(x as Color)))
            .count();
        ensure_lemma!(
            alive >= need,
            "safe edge {}: only {alive} walks survive faults {:?}",
            a.edge,
            fs.as_slice()
        );
        fewest = fewest.min(alive);
    }
    Ok(Some(fewest))
}

// ---------------------------------------------------------------------------------------------
// Fault-tolerant greedy

/// Default cap on Σ_{j≤f} C(|C|, j) for the greedy.
pub const GREEDY_BUDGET: u128 = 200_000;

/// Scan edges by (weight, id); keep e when some fault set that spares e leaves u and v
/// farther than (2k−1)·w(e) apart in the current H.
pub fn greedy_cft(g: &ColoredGraph, f: usize, k: usize, budget: u128) -> Result<SpannerResult> {
    if k == 0 {
        return Err(Error::InvalidParams("k must be at least 1".into()));
    }
    let needed = count_up_to(g.color_count() as u64, f as u64);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let t = (2 * k - 1) as f64;
    let mut order: Vec<EdgeId> = (0..g.m()).collect();
    order.sort_by(|&a, &b| g.edge(a).weight.total_cmp(&g.edge(b).weight).then(a.cmp(&b)));
    let mut h = vec![false; g.m()];
    let mut h_colors: Vec<Color> = Vec::new();
    let mut dij = Dijkstra::new(g.n());
    let mut fault_sets = 0u64;
    for id in order {
        let e = g.edge(id);
        let damage = g.damage_colors(id);
        // Colors absent from H cannot matter, so only subsets of H's colors are tried.
        let pool: Vec<Color> = h_colors.iter().copied().filter(|&c| !damage.contains(c)).collect();
        let bound = t * e.weight;
        let mut add = false;
        for fs in subsets_up_to(&pool, f) {
            fault_sets += 1;
            let d = dij.run(g, e.u, bound, |x| h[x] && !g.is_damaged(x, &fs))[e.v];
            if d > bound {
                add = true;
                break;
            }
        }
        if add {
            h[id] = true;
            for c in damage.iter() {
                if let Err(pos) = h_colors.binary_search(&c) {
                    h_colors.insert(pos, c);
                }
            }
        }
    }
    let mut res = SpannerResult::new("greedy", g.mode(), g.n(), g.m(), k, f, 0);
    res.kept = (0..g.m()).filter(|&e| h[e]).collect();
    res.extra = json!({ "fault_sets_tried": fault_sets });
    Ok(res)
}

/// Plain greedy (2k−1)-spanner, the f = 0 case.
pub fn greedy_plain(g: &ColoredGraph, k: usize) -> Result<SpannerResult> {
    greedy_cft(g, 0, k, u128::MAX)
}
