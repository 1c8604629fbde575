//! Synchronous message-passing simulation of the level-based constructions.
//!
//! Each level runs as: one phase shipping every endpoint's attachment across its undecided
//! edges, local decisions from the received attachments only, and one phase exchanging the
//! decisions. The vertex-colored last level adds a phase exchanging |Ỹ|. In CONGEST a phase
//! lasts as many rounds as its largest message needs at `word_budget` words per edge and
//! direction per round.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::baselines::{
    base_combine, baswana_sen, bs_cap, bs_vertex, parter_cap, parter_vertex, parter_vft, BaseInput,
    BaseOutput, BsConfig, BsCtx, Incident, Level, ParterConfig, ParterCtx, Route,
};
use crate::ecft::{build_ecft_spanner, normalize, schedule_json, CftConfig};
use crate::engine::{
    attachment_bound, combine, local_edge, process_vertex, sort_local_edges, trivial_attachment,
    Attachment, LevelCtx, LevelState, Symmetry, VertexInput, VertexOutput,
};
use crate::error::{ensure_lemma, Error, Result};
use crate::graph::{ColorMode, ColoredGraph, EdgeId, Vertex};
use crate::params::{sample_center_levels, Schedule};
use crate::result::{Dcsn, LevelStats, SpannerResult};
use crate::vcft::{build_vcft_spanner, last_level_stats};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    Ecft,
    Vcft,
    ParterVft,
    BaswanaSen,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Local,
    /// At most this many words per edge and direction per round.
    Congest(usize),
}

#[derive(Clone, Debug, Default)]
pub struct SimConfig {
    pub cft: CftConfig,
    pub parter: ParterConfig,
    pub bs: BsConfig,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct LevelRounds {
    pub level: usize,
    pub rounds: usize,
    pub local_rounds: usize,
    pub messages: u64,
    pub words: u64,
    pub max_message_words: usize,
    pub max_attachment_paths: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct RoundLog {
    pub model: Model,
    pub rounds: usize,
    /// Rounds the same schedule takes without a word budget.
    pub local_rounds: usize,
    /// Largest number of words on any edge direction, per round.
    pub per_round_max_words: Vec<usize>,
    pub levels: Vec<LevelRounds>,
    pub messages: u64,
    pub words: u64,
    /// k · ⌈largest message / word budget⌉, the chunked-shipping reference.
    pub reference_rounds: usize,
    pub spanner_hash: String,
    pub sequential_hash: String,
    pub identical: bool,
}

impl RoundLog {
    fn new(model: Model) -> Self {
        RoundLog {
            model,
            rounds: 0,
            local_rounds: 0,
            per_round_max_words: Vec::new(),
            levels: Vec::new(),
            messages: 0,
            words: 0,
            reference_rounds: 0,
            spanner_hash: String::new(),
            sequential_hash: String::new(),
            identical: false,
        }
    }
}

struct Msg<T> {
    from: Vertex,
    to: Vertex,
    edge: EdgeId,
    words: usize,
    body: T,
}

struct Net<'g> {
    g: &'g ColoredGraph,
    log: RoundLog,
}

impl Net<'_> {
    fn begin_level(&mut self, level: usize) {
        self.log.levels.push(LevelRounds {
            level,
            ..Default::default()
        });
    }

    /// Deliver one phase of messages; every message must travel along its own incident edge.
    fn exchange<T>(&mut self, msgs: Vec<Msg<T>>) -> Result<Vec<Vec<Msg<T>>>> {
        let g = self.g;
        let mut inbox: Vec<Vec<Msg<T>>> = (0..g.n()).map(|_| Vec::new()).collect();
        let mut load: BTreeMap<(EdgeId, bool), usize> = BTreeMap::new();
        let lv = self.log.levels.last_mut().expect("level started");
        for m in msgs {
            let e = g.edge(m.edge);
            let along = (e.u == m.from && e.v == m.to) || (e.v == m.from && e.u == m.to);
            if !along {
                return Err(Error::SimulationFault(format!(
                    "vertex {} sent to {} over edge {} which does not join them",
                    m.from, m.to, m.edge
                )));
            }
            *load.entry((m.edge, e.u == m.from)).or_default() += m.words;
            lv.messages += 1;
            lv.words += m.words as u64;
            lv.max_message_words = lv.max_message_words.max(m.words);
            inbox[m.to].push(m);
        }
        if load.is_empty() {
            return Ok(inbox);
        }
        let peak = load.values().copied().max().unwrap_or(0);
        let rounds = match self.log.model {
            Model::Local => 1,
            Model::Congest(b) => peak.div_ceil(b.max(1)).max(1),
        };
        for r in 0..rounds {
            let in_round = match self.log.model {
                Model::Local => peak,
                Model::Congest(b) => load
                    .values()
                    .map(|&w| w.saturating_sub(r * b).min(b))
                    .max()
                    .unwrap_or(0),
            };
            self.log.per_round_max_words.push(in_round);
        }
        lv.rounds += rounds;
        lv.local_rounds += 1;
        self.log.rounds += rounds;
        self.log.local_rounds += 1;
        Ok(inbox)
    }
}

/// What one level decided, as planned by the variant's per-vertex rule.
struct Plan<A> {
    /// Per vertex: its own decisions and the attachments it offers for its postponed edges.
    decisions: Vec<Vec<(EdgeId, Dcsn)>>,
    postponed: Vec<Vec<(EdgeId, Arc<A>)>>,
    /// Vertex-colored last level: the endpoint whose decision is final.
    owner: Option<Vec<Vertex>>,
    /// The same level evaluated by the sequential combiner, for cross-checking.
    expected: (Vec<EdgeId>, Vec<EdgeId>),
}

type Held<A> = Vec<BTreeMap<EdgeId, Arc<A>>>;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Fate {
    Kept,
    Next,
    Gone,
}

fn fate(a: Option<Dcsn>, b: Option<Dcsn>, owner_says: Option<Dcsn>) -> Option<Fate> {
    let both = match owner_says {
        Some(d) => [d, d],
        None => [a?, b?],
    };
    Some(if both.contains(&Dcsn::Keep) {
        Fate::Kept
    } else if both == [Dcsn::Pstpn, Dcsn::Pstpn] {
        Fate::Next
    } else {
        Fate::Gone
    })
}

/// Run k levels over the network. `decide` sees only each vertex's inbox (plus, for reporting,
/// the global held state) and returns the plan.
fn run_levels<A, W, D>(net: &mut Net<'_>, k: usize, init: impl Fn(Vertex) -> Arc<A>, words: W, mut decide: D) -> Result<Vec<bool>>
where
    W: Fn(&A) -> usize,
    D: FnMut(usize, &Held<A>, Vec<Vec<Msg<Arc<A>>>>, &mut Net<'_>) -> Result<Plan<A>>,
{
    let g = net.g;
    let mut held: Held<A> = vec![BTreeMap::new(); g.n()];
    for v in 0..g.n() {
        let a = init(v);
        for &(_, id) in g.adj(v) {
            held[v].insert(id, a.clone());
        }
    }
    let mut h = vec![false; g.m()];
    for i in 0..k {
        net.begin_level(i);
        let mut ship = Vec::new();
        for (v, hv) in held.iter().enumerate() {
            for (&id, a) in hv {
                ship.push(Msg {
                    from: v,
                    to: g.edge(id).other(v),
                    edge: id,
                    words: words(a),
                    body: a.clone(),
                });
            }
        }
        let inbox = net.exchange(ship)?;
        let plan = decide(i, &held, inbox, net)?;
        let mut tell = Vec::new();
        for (v, ds) in plan.decisions.iter().enumerate() {
            for &(id, d) in ds {
                if !held[v].contains_key(&id) {
                    return Err(Error::SimulationFault(format!("vertex {v} decided on edge {id} it does not hold")));
                }
                tell.push(Msg {
                    from: v,
                    to: g.edge(id).other(v),
                    edge: id,
                    words: 1,
                    body: d,
                });
            }
        }
        let told = net.exchange(tell)?;
        let mut views: Vec<BTreeMap<EdgeId, Fate>> = vec![BTreeMap::new(); g.n()];
        for v in 0..g.n() {
            let mine: BTreeMap<EdgeId, Dcsn> = plan.decisions[v].iter().copied().collect();
            let theirs: BTreeMap<EdgeId, Dcsn> = told[v].iter().map(|m| (m.edge, m.body)).collect();
            for &id in held[v].keys() {
                let owner_says = plan.owner.as_ref().map(|o| {
                    if o[id] == v {
                        mine.get(&id).copied()
                    } else {
                        theirs.get(&id).copied()
                    }
                });
                let f = match owner_says {
                    Some(None) => None,
                    Some(d) => fate(None, None, d),
                    None => fate(mine.get(&id).copied(), theirs.get(&id).copied(), None),
                };
                let f = f.ok_or_else(|| Error::SimulationFault(format!("vertex {v} lacks a decision on edge {id}")))?;
                views[v].insert(id, f);
            }
        }
        let mut kept = Vec::new();
        let mut next = Vec::new();
        for id in 0..g.m() {
            let e = g.edge(id);
            let (a, b) = (views[e.u].get(&id), views[e.v].get(&id));
            match (a, b) {
                (None, None) => continue,
                (Some(x), Some(y)) if x == y => match x {
                    Fate::Kept => kept.push(id),
                    Fate::Next => next.push(id),
                    Fate::Gone => {}
                },
                _ => {
                    return Err(Error::SimulationFault(format!(
                        "endpoints of edge {id} disagree on its fate: {a:?} vs {b:?}"
                    )))
                }
            }
        }
        if (kept.clone(), next.clone()) != plan.expected {
            return Err(Error::SimulationFault(format!("level {i}: simulated outcome differs from the combiner")));
        }
        for &id in &kept {
            h[id] = true;
        }
        let mut offers: Vec<BTreeMap<EdgeId, Arc<A>>> = plan
            .postponed
            .into_iter()
            .map(|p| p.into_iter().collect())
            .collect();
        let mut new_held: Held<A> = vec![BTreeMap::new(); g.n()];
        for &id in &next {
            let e = g.edge(id);
            for x in [e.u, e.v] {
                let a = offers[x]
                    .remove(&id)
                    .ok_or_else(|| Error::SimulationFault(format!("vertex {x} postponed edge {id} without a path")))?;
                new_held[x].insert(id, a);
            }
        }
        held = new_held;
    }
    if held.iter().any(|hv| !hv.is_empty()) {
        return Err(Error::LemmaViolation("edges remain undecided after the last level".into()));
    }
    Ok(h)
}

fn state_from_held<A>(g: &ColoredGraph, level: usize, held: &Held<A>) -> Level<A> {
    let mut att: Vec<Option<[Arc<A>; 2]>> = (0..g.m()).map(|_| None).collect();
    let mut edges = Vec::new();
    for id in 0..g.m() {
        let e = g.edge(id);
        if let (Some(a), Some(b)) = (held[e.u].get(&id), held[e.v].get(&id)) {
            att[id] = Some([a.clone(), b.clone()]);
            edges.push(id);
        }
    }
    Level { level, edges, att }
}

fn attachment_words(a: &Attachment) -> usize {
    a.park
        .paths()
        .iter()
        .map(|p| p.hop_len() + p.colors.len() + 2)
        .sum::<usize>()
        + a.witness.len()
        + 1
}

fn hash_kept(kept: &[EdgeId]) -> String {
    let mut h = Sha256::new();
    for e in kept {
        h.update((*e as u64).to_le_bytes());
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// The engine variants: attachments are touristic parks.
fn simulate_cft(net: &mut Net<'_>, g: &ColoredGraph, f: usize, k: usize, vcft: bool, cfg: &CftConfig) -> Result<SpannerResult> {
    let mode = if vcft { ColorMode::Vcft } else { ColorMode::Ecft };
    let name = if vcft { "vcft" } else { "ecft" };
    let (f, warnings) = match normalize(name, g, mode, f, k, cfg.seed)? {
        Ok(x) => x,
        Err(done) => return Ok(done),
    };
    let sched = Schedule::new(mode, g.n(), k, f, &cfg.params)?;
    let centers = sample_center_levels(g.n(), k, sched.p, cfg.seed);
    let ecfg = cfg.engine(cfg.seed);
    let mut res = SpannerResult::new(name, mode, g.n(), g.m(), k, f as usize, cfg.seed);
    res.center_counts = (0..k)
        .map(|i| centers.iter().filter(|&&l| l as usize >= i).count())
        .collect();
    let mut levels: Vec<LevelStats> = Vec::new();
    let mut trace = Vec::new();
    let init = |u: Vertex| {
        let c = vcft.then(|| g.vertex_color(u));
        Arc::new(trivial_attachment(&sched, u, c, centers[u]))
    };
    let h = run_levels(net, k, init, attachment_words, |i, held, inbox, net| {
        let lvl = state_from_held(g, i, held);
        let st = LevelState {
            level: i,
            edges: lvl.edges,
            att: lvl.att,
        };
        let bound = attachment_bound(&sched.levels[i]);
        let mut widest = 0usize;
        let mut inputs: Vec<VertexInput> = Vec::with_capacity(g.n());
        for (v, msgs) in inbox.into_iter().enumerate() {
            let mut edges = Vec::with_capacity(msgs.len());
            for m in msgs {
                widest = widest.max(m.body.park.len());
                edges.push(local_edge(g, m.edge, v, m.body));
            }
            sort_local_edges(&mut edges);
            inputs.push(VertexInput {
                v,
                v_color: vcft.then(|| g.vertex_color(v)),
                edges,
            });
        }
        ensure_lemma!(
            BigRational::from_integer(BigInt::from(widest)) <= bound,
            "level {i}: an attachment of {widest} paths exceeds its capacity"
        );
        net.log.levels[i].max_attachment_paths = widest;
        let two_way = vcft && i + 1 == k;
        let mut owner = None;
        let mut yt = Vec::new();
        if two_way {
            // |Ỹ_v| from the received parks only, then one exchange so both ends pick the owner.
            yt = inputs
                .iter()
                .map(|inp| {
                    let cv = g.vertex_color(inp.v);
                    let mut ends: Vec<Vertex> = inp
                        .edges
                        .iter()
                        .flat_map(|le| le.att.park.paths())
                        .filter(|p| p.end_color == Some(cv) && p.end_level as usize >= i)
                        .map(|p| p.end())
                        .collect();
                    ends.sort_unstable();
                    ends.dedup();
                    ends.len()
                })
                .collect();
            ensure_lemma!(yt == crate::vcft::y_tilde(g, &st), "local |Y~| differs from the global count");
            let mut msgs = Vec::new();
            for inp in &inputs {
                for le in &inp.edges {
                    msgs.push(Msg {
                        from: inp.v,
                        to: le.other,
                        edge: le.id,
                        words: 1,
                        body: yt[inp.v],
                    });
                }
            }
            let heard = net.exchange(msgs)?;
            let mut own = vec![usize::MAX; g.m()];
            for (v, inp) in inputs.iter_mut().enumerate() {
                let theirs: BTreeMap<EdgeId, usize> = heard[v].iter().map(|m| (m.edge, m.body)).collect();
                for le in &inp.edges {
                    let t = theirs[&le.id];
                    let me_first = (yt[v], v) <= (t, le.other);
                    own[le.id] = if me_first { v } else { le.other };
                }
                inp.edges.retain(|le| own[le.id] == v);
            }
            owner = Some(own);
        }
        let lc = LevelCtx {
            sched: &sched,
            level: i,
            voting: ecfg.voting,
            seed: ecfg.seed,
            trace: ecfg.trace,
            audit: None,
            two_way,
        };
        let outs: Vec<VertexOutput> = inputs.iter().map(|inp| process_vertex(&lc, inp)).collect::<Result<_>>()?;
        let decisions = outs.iter().map(|o| o.decisions.clone()).collect();
        let postponed = outs.iter().map(|o| o.postponed.clone()).collect();
        let mut oc = combine(g, &st, outs, owner.as_deref())?;
        if two_way {
            let own = owner.as_ref().expect("owner set");
            oc.stats.vcft_last = Some(last_level_stats(g, &st, &centers, Symmetry::Distributed, own, &yt, &oc)?);
        }
        let expected = (oc.kept.clone(), oc.next.edges.clone());
        levels.push(oc.stats);
        trace.extend(oc.trace);
        Ok(Plan {
            decisions,
            postponed,
            owner,
            expected,
        })
    })?;
    res.levels = levels;
    res.trace = trace;
    res.kept = (0..g.m()).filter(|&e| h[e]).collect();
    res.warnings = warnings;
    res.extra = serde_json::json!({ "schedule": schedule_json(&sched) });
    Ok(res)
}

fn route_inputs<A>(inbox: Vec<Vec<Msg<Arc<A>>>>, g: &ColoredGraph) -> Vec<BaseInput<A>> {
    inbox
        .into_iter()
        .enumerate()
        .map(|(v, msgs)| {
            let mut edges: Vec<Incident<A>> = msgs
                .into_iter()
                .map(|m| Incident {
                    id: m.edge,
                    other: m.from,
                    weight: g.edge(m.edge).weight,
                    att: m.body,
                })
                .collect();
            edges.sort_by(|a, b| a.weight.total_cmp(&b.weight).then(a.id.cmp(&b.id)));
            BaseInput { v, edges }
        })
        .collect()
}

fn plan_from<A>(g: &ColoredGraph, i: usize, held: &Held<A>, outs: Vec<BaseOutput<A>>) -> Result<(Plan<A>, LevelStats)> {
    let decisions = outs.iter().map(|o| o.decisions.clone()).collect();
    let postponed = outs.iter().map(|o| o.postponed.clone()).collect();
    let st = state_from_held(g, i, held);
    let oc = base_combine(g, &st, outs)?;
    Ok((
        Plan {
            decisions,
            postponed,
            owner: None,
            expected: (oc.kept, oc.next.edges),
        },
        oc.stats,
    ))
}

fn simulate_bs(net: &mut Net<'_>, g: &ColoredGraph, k: usize, cfg: &BsConfig) -> Result<SpannerResult> {
    if k == 0 {
        return Err(Error::InvalidParams("k must be at least 1".into()));
    }
    let n = g.n();
    let p = (n.max(2) as f64).powf(-1.0 / k as f64);
    let centers = sample_center_levels(n, k, p, cfg.seed);
    let cap = bs_cap(n, p, cfg.c_g);
    let mut levels = Vec::new();
    let h = run_levels(
        net,
        k,
        |u| Arc::new(Route::trivial(u)),
        |r: &Route| r.words(),
        |i, held, inbox, net| {
            let cx = BsCtx {
                level: i,
                last: i + 1 == k,
                cap,
                centers: &centers,
                audit: false,
            };
            let outs = route_inputs(inbox, g).iter().map(|inp| bs_vertex(&cx, inp, n)).collect();
            let (plan, mut stats) = plan_from(g, i, held, outs)?;
            net.log.levels[i].max_attachment_paths = 1;
            stats.max_attachment_paths = stats.max_attachment_paths.max(1);
            levels.push(stats);
            Ok(plan)
        },
    )?;
    let mut res = SpannerResult::new("baswana-sen", g.mode(), n, g.m(), k, 0, cfg.seed);
    res.center_counts = (0..k).map(|i| centers.iter().filter(|&&l| l as usize >= i).count()).collect();
    res.levels = levels;
    res.kept = (0..g.m()).filter(|&e| h[e]).collect();
    Ok(res)
}

fn simulate_parter(net: &mut Net<'_>, g: &ColoredGraph, f: usize, k: usize, cfg: &ParterConfig) -> Result<SpannerResult> {
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
    let bundle = 8 * k * f;
    let mut levels = Vec::new();
    let h = run_levels(
        net,
        k,
        |u| Arc::new(vec![Route::trivial(u); bundle]),
        |rs: &Vec<Route>| rs.iter().map(Route::words).sum(),
        |i, held, inbox, net| {
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
                audit: false,
            };
            let outs = route_inputs(inbox, g).iter().map(|inp| parter_vertex(&cx, inp)).collect();
            let (plan, stats) = plan_from(g, i, held, outs)?;
            net.log.levels[i].max_attachment_paths = bundle;
            levels.push(stats);
            Ok(plan)
        },
    )?;
    let mut res = SpannerResult::new("parter-vft", g.mode(), n, g.m(), k, f, cfg.seed);
    res.center_counts = (0..k).map(|i| centers.iter().filter(|&&l| l as usize >= i).count()).collect();
    res.levels = levels;
    res.kept = (0..g.m()).filter(|&e| h[e]).collect();
    Ok(res)
}

/// Simulate `variant` under `model` and check the result against the sequential run.
///
/// The vertex-colored variant always uses the distributed tie-break, and the repetition loop
/// is off because its stopping rule needs the global spanner size.
pub fn simulate(
    g: &ColoredGraph,
    f: usize,
    k: usize,
    variant: Variant,
    model: Model,
    cfg: &SimConfig,
    seed: u64,
) -> Result<(SpannerResult, RoundLog)> {
    if let Model::Congest(0) = model {
        return Err(Error::InvalidParams("word budget must be positive".into()));
    }
    let mut net = Net {
        g,
        log: RoundLog::new(model),
    };
    let cft = CftConfig {
        seed,
        audit: false,
        symmetry: Symmetry::Distributed,
        repetition: None,
        ..cfg.cft.clone()
    };
    let parter = ParterConfig {
        seed,
        audit: false,
        ..cfg.parter.clone()
    };
    let bs = BsConfig {
        seed,
        audit: false,
        ..cfg.bs.clone()
    };
    let (res, seq) = match variant {
        Variant::Ecft => (
            simulate_cft(&mut net, g, f, k, false, &cft)?,
            build_ecft_spanner(g, f, k, &cft)?,
        ),
        Variant::Vcft => (
            simulate_cft(&mut net, g, f, k, true, &cft)?,
            build_vcft_spanner(g, f, k, &cft)?,
        ),
        Variant::BaswanaSen => (simulate_bs(&mut net, g, k, &bs)?, baswana_sen(g, k, &bs)?),
        Variant::ParterVft => (
            simulate_parter(&mut net, g, f, k, &parter)?,
            parter_vft(g, f, k, &parter)?,
        ),
    };
    let mut log = net.log;
    log.messages = log.levels.iter().map(|l| l.messages).sum();
    log.words = log.levels.iter().map(|l| l.words).sum();
    let widest = log.levels.iter().map(|l| l.max_message_words).max().unwrap_or(0);
    log.reference_rounds = match model {
        Model::Local => log.local_rounds,
        Model::Congest(b) => k * widest.div_ceil(b),
    };
    log.spanner_hash = hash_kept(&res.kept);
    log.sequential_hash = hash_kept(&seq.kept);
    log.identical = res.kept == seq.kept;
    if !log.identical {
        return Err(Error::SimulationFault(format!(
            "simulated spanner ({} edges) differs from the sequential run ({} edges)",
            res.size(),
            seq.size()
        )));
    }
    ensure_lemma!(
        log.local_rounds <= 3 * k,
        "{} rounds exceed the 3k schedule budget",
        log.local_rounds
    );
    Ok((res, log))
}

pub fn simulate_local(g: &ColoredGraph, f: usize, k: usize, variant: Variant, cfg: &SimConfig, seed: u64) -> Result<(SpannerResult, RoundLog)> {
    simulate(g, f, k, variant, Model::Local, cfg, seed)
}

pub fn simulate_congest(
    g: &ColoredGraph,
    f: usize,
    k: usize,
    variant: Variant,
    word_budget: usize,
    cfg: &SimConfig,
    seed: u64,
) -> Result<(SpannerResult, RoundLog)> {
    simulate(g, f, k, variant, Model::Congest(word_budget), cfg, seed)
}
