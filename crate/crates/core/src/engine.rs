//! Per-vertex level procedure shared by the edge- and vertex-colored constructions, and the
//! sequential driver around it.
//!
//! A vertex sees only its own incident undecided edges, the attachment its neighbor holds for
//! each of them, and its own color. That is what makes the same code usable by the
//! distributed simulator.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::colorset::{count_up_to, subsets_up_to, Color, ColorSet};
use crate::error::{ensure_lemma, Error, Result};
use crate::graph::{ColorMode, ColoredGraph, EdgeId, Vertex};
use crate::park::{InsertOutcome, Park, PathRec, TouristicPark};
use crate::params::{LevelParams, Schedule};
use crate::result::{DecisionRecord, Dcsn, LevelStats, SpannerResult};
use crate::rng::stream;
use crate::sampler::{park_sample, SampleResult, SamplerInput};
use crate::score::{log2_ratio, ratio, residual_counts};

/// Largest number of fault sets a single safe-decision replay may enumerate.
pub const AUDIT_BUDGET: u128 = 20_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Voting {
    Exact,
    /// Draw c_s·⌈ln n⌉ voters by score.
    Sampled { c_s: u32 },
}

/// Which endpoint of a last-level vertex-colored edge takes charge of it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Symmetry {
    /// Smaller color class, from global class sizes.
    Sequential,
    /// Fewer same-colored centers seen through the attached parks.
    Distributed,
}

#[derive(Clone, Copy, Debug)]
pub struct EngineCfg {
    pub voting: Voting,
    pub seed: u64,
    pub audit: bool,
    pub trace: bool,
    pub symmetry: Symmetry,
}

/// A park attached to an undecided edge at one endpoint, with its fullness witness.
#[derive(Clone, Debug)]
pub struct Attachment {
    pub park: TouristicPark,
    pub witness: ColorSet,
}

#[derive(Clone, Debug)]
pub struct LocalEdge {
    pub id: EdgeId,
    pub other: Vertex,
    pub weight: f64,
    /// Edge color (edge-colored mode).
    pub color: Option<Color>,
    /// Neighbor's color (vertex-colored mode).
    pub other_color: Option<Color>,
    /// The neighbor's attachment for this edge.
    pub att: Arc<Attachment>,
}

#[derive(Clone, Debug)]
pub struct VertexInput {
    pub v: Vertex,
    pub v_color: Option<Color>,
    /// Sorted by (weight, edge id).
    pub edges: Vec<LocalEdge>,
}

/// Last-level potentials of one vertex in the vertex-colored construction.
#[derive(Clone, Debug, Default)]
pub struct LastLevelVertex {
    pub type1: usize,
    pub type2: usize,
    pub phi: BigRational,
    pub phi_x: BigRational,
    pub phi_y: BigRational,
    pub checks: usize,
}

#[derive(Debug, Default)]
pub struct VertexOutput {
    pub decisions: Vec<(EdgeId, Dcsn)>,
    pub postponed: Vec<(EdgeId, Arc<Attachment>)>,
    pub stats: LevelStats,
    pub trace: Vec<DecisionRecord>,
    pub last: Option<LastLevelVertex>,
}

/// Global state consulted only by audits.
pub struct AuditCtx<'a> {
    pub g: &'a ColoredGraph,
    /// Spanner membership at level entry.
    pub h_entry: &'a [bool],
}

pub struct LevelCtx<'a> {
    pub sched: &'a Schedule,
    pub level: usize,
    pub voting: Voting,
    pub seed: u64,
    pub trace: bool,
    pub audit: Option<AuditCtx<'a>>,
    /// Safe/keep voting with local-only parks (vertex-colored last level).
    pub two_way: bool,
}

pub fn sort_local_edges(edges: &mut [LocalEdge]) {
    edges.sort_by(|a, b| a.weight.total_cmp(&b.weight).then(a.id.cmp(&b.id)));
}

/// The initial attachment of a vertex: its zero-length path.
pub fn trivial_attachment(sched: &Schedule, u: Vertex, u_color: Option<Color>, u_level: u8) -> Attachment {
    let lp = &sched.levels[0];
    let mut path = PathRec::trivial(u, ColorSet::new(), u_level);
    if sched.color_mode == ColorMode::Vcft {
        let c = u_color.expect("vertex color");
        path = PathRec::trivial(u, ColorSet::singleton(c), u_level).with_end_color(c);
    }
    let witness = path.colors.clone();
    let mut park = TouristicPark::new(u, lp.g.clone(), lp.l.clone());
    park.insert_path(path, false)
        .expect("a single zero-length path is a park");
    Attachment { park, witness }
}

/// Attachment size bound β_i^{-1}(α_i f)^i.
pub fn attachment_bound(lp: &LevelParams) -> BigRational {
    let af = lp.g.alpha() * BigRational::from_integer(BigInt::from(lp.g.f()));
    lp.g.beta().recip() * num_traits::pow(af, lp.i)
}

fn vote_one(hat: &TouristicPark, p: &PathRec, add: Color, allow_pstpn: bool) -> Dcsn {
    let colors = p.colors.with(add);
    if hat
        .local(p.end())
        .is_some_and(|l| l.find_full_subset(&colors).is_some())
    {
        Dcsn::Safe
    } else if allow_pstpn && hat.global().find_full_subset(&colors).is_some() {
        Dcsn::Pstpn
    } else {
        Dcsn::Keep
    }
}

fn vote_all(hat: &TouristicPark, att: &Attachment, add: Color, allow_pstpn: bool) -> Vec<Dcsn> {
    att.park
        .paths()
        .iter()
        .map(|p| vote_one(hat, p, add, allow_pstpn))
        .collect()
}

fn class_counts(att: &Attachment, votes: &[Dcsn], class: Dcsn) -> Vec<u64> {
    residual_counts(
        att.park
            .paths()
            .iter()
            .zip(votes)
            .filter(|(_, &d)| d == class)
            .map(|(p, _)| &p.colors),
        &att.witness,
    )
}

/// Decision by the ≥ 1/8 rule with priority safe > keep > pstpn.
fn decide_exact(lp: &LevelParams, att: &Attachment, votes: &[Dcsn]) -> Result<(Dcsn, [f64; 3])> {
    let eighth = ratio(1, 8);
    let mut scores = [f64::NEG_INFINITY; 3];
    let mut pick = None;
    for class in [Dcsn::Safe, Dcsn::Keep, Dcsn::Pstpn] {
        let counts = class_counts(att, votes, class);
        scores[slot(class)] = log2_ratio(&lp.g.score_of_counts(&counts));
        if pick.is_none() && lp.g.cmp_counts(&counts, &eighth) != std::cmp::Ordering::Less {
            pick = Some(class);
        }
    }
    match pick {
        Some(d) => Ok((d, scores)),
        None => Err(Error::LemmaViolation(format!(
            "no vote class reaches 1/8; attachment at {} is not {}-full",
            att.park.stem(),
            att.witness
        ))),
    }
}

/// Slot of a decision in (keep, safe, pstpn) arrays.
fn slot(d: Dcsn) -> usize {
    match d {
        Dcsn::Keep => 0,
        Dcsn::Safe => 1,
        Dcsn::Pstpn => 2,
    }
}

struct Ctx<'c, 'a> {
    lc: &'c LevelCtx<'a>,
    lp: &'a LevelParams,
    v: Vertex,
    vcft: bool,
    last: bool,
    paper: bool,
    exact: bool,
}

pub fn process_vertex(lc: &LevelCtx<'_>, inp: &VertexInput) -> Result<VertexOutput> {
    let sched = lc.sched;
    let i = lc.level;
    let lp = &sched.levels[i];
    let vcft = sched.color_mode == ColorMode::Vcft;
    let cx = Ctx {
        lc,
        lp,
        v: inp.v,
        vcft,
        last: i + 1 == sched.k,
        paper: sched.paper(),
        exact: lc.voting == Voting::Exact,
    };
    let v = inp.v;
    let mut out = VertexOutput {
        stats: LevelStats::new(i, sched.n),
        ..Default::default()
    };
    let mut hat = if lc.two_way {
        TouristicPark::local_only(v, lp.ghat.clone(), lp.lhat.clone())
    } else {
        TouristicPark::new(v, lp.ghat.clone(), lp.lhat.clone())
    };
    let mut cache: BTreeMap<ColorSet, Arc<Attachment>> = BTreeMap::new();
    let mut rng = stream(lc.seed, "vote", ((i as u64) << 32) | v as u64);
    let mut kept_here: Vec<EdgeId> = Vec::new();
    let base = match (vcft, inp.v_color) {
        (true, Some(c)) => ColorSet::singleton(c),
        _ => ColorSet::new(),
    };
    let keep_bound = keep_increment_bound(lp);
    let phi_bound = BigRational::one() / (ratio(8, 1) * &sched.d);
    let mut genuine_keeps = 0u64;
    let mut last = lc.two_way.then(LastLevelVertex::default);
    let size_bound = attachment_bound(lp);

    for le in &inp.edges {
        let att = &le.att;
        let add = if vcft {
            inp.v_color.expect("vertex color")
        } else {
            le.color.expect("edge color")
        };
        out.stats.max_attachment_paths = out.stats.max_attachment_paths.max(att.park.len());
        ensure_lemma!(
            BigRational::from_integer(BigInt::from(att.park.len())) <= size_bound,
            "attachment of edge {} exceeds the park size bound",
            le.id
        );
        if let Some(ac) = &lc.audit {
            check_attachment(&cx, ac, le)?;
            ensure_lemma!(
                hat.paths().iter().all(|p| p.max_weight <= le.weight),
                "park of {v} holds an edge heavier than edge {}",
                le.id
            );
        }

        let allow_pstpn = !lc.two_way;
        let (dcsn, scores, votes) = match lc.voting {
            Voting::Exact => {
                let votes = vote_all(&hat, att, add, allow_pstpn);
                let (d, s) = decide_exact(lp, att, &votes)?;
                (d, s, Some(votes))
            }
            Voting::Sampled { c_s } => {
                out.stats.sampled_decisions += 1;
                let (d, s, votes) =
                    decide_sampled(&cx, &hat, att, add, allow_pstpn, c_s, &mut rng, &mut out.stats)?;
                if lc.audit.is_some() {
                    let exact = vote_all(&hat, att, add, allow_pstpn);
                    if decide_exact(lp, att, &exact)?.0 != d {
                        out.stats.sampled_disagreements += 1;
                    }
                }
                (d, s, votes)
            }
        };

        let mut converted = None;
        let mut final_d = dcsn;
        match dcsn {
            Dcsn::Safe => {
                if let Some(ac) = &lc.audit {
                    let votes = votes.unwrap_or_else(|| vote_all(&hat, att, add, allow_pstpn));
                    replay_safe(&cx, ac, &hat, att, &votes, le, add, &kept_here, &mut out.stats)?;
                }
            }
            Dcsn::Keep => {
                let votes = votes.unwrap_or_else(|| vote_all(&hat, att, add, allow_pstpn));
                if cx.paper && cx.exact && !lc.two_way {
                    let gained = keep_gain(lp, att, &votes, &base, add);
                    ensure_lemma!(
                        gained >= keep_bound,
                        "keep at {v} on edge {} gains less than the keep bound",
                        le.id
                    );
                }
                genuine_keeps += 1;
                let (inserted, clamped) = apply_keep(&cx, &mut hat, att, &votes, le, add, &mut out.stats)?;
                if let Some(ll) = last.as_mut() {
                    account_last(&cx, ll, att, &inserted, clamped, inp.v_color, &phi_bound, le.id)?;
                    ensure_lemma!(
                        ll.phi <= BigRational::from_integer(BigInt::from(hat.locals().count())),
                        "last-level potential of {v} exceeds its number of local parks"
                    );
                }
            }
            Dcsn::Pstpn => {
                let outcome = if cx.last {
                    out.stats.fallback_last_level += 1;
                    converted = Some("last-level");
                    None
                } else {
                    let a = postpone(&cx, &hat, &mut cache, le, inp.v_color, &mut out.stats)?;
                    if a.is_none() {
                        converted = Some("fallback");
                    }
                    a
                };
                match outcome {
                    Some(a) => out.postponed.push((le.id, a)),
                    None => {
                        final_d = Dcsn::Keep;
                        let votes = votes.unwrap_or_else(|| vote_all(&hat, att, add, allow_pstpn));
                        apply_keep(&cx, &mut hat, att, &votes, le, add, &mut out.stats)?;
                    }
                }
            }
        }
        if final_d == Dcsn::Keep {
            kept_here.push(le.id);
        }
        out.stats.record(v, final_d);
        out.decisions.push((le.id, final_d));
        if lc.trace {
            out.trace.push(DecisionRecord {
                level: i,
                vertex: v,
                edge: le.id,
                dcsn: final_d,
                log2_scores: scores,
                converted,
            });
        }
    }

    if lc.audit.is_some() {
        hat.audit()?;
    }
    if cx.paper && cx.exact && !lc.two_way && out.stats.clamps == 0 {
        // every keep adds at least keep_bound to the base link, which stays at most 1
        let total = hat.global().link_score(&base);
        let need = &keep_bound * BigRational::from_integer(BigInt::from(genuine_keeps));
        ensure_lemma!(total >= need, "keep accounting at {v} does not add up");
        ensure_lemma!(total <= BigRational::one(), "base link of {v} above 1");
    }
    out.last = last;
    Ok(out)
}

/// (1/8)·(β̂ρ/β)·1/(α̂f)
fn keep_increment_bound(lp: &LevelParams) -> BigRational {
    let f = BigRational::from_integer(BigInt::from(lp.g.f()));
    ratio(1, 8) * (lp.ghat.beta() / lp.g.beta()) / (lp.ghat.alpha() * f)
}

fn keep_gain(lp: &LevelParams, att: &Attachment, votes: &[Dcsn], base: &ColorSet, add: Color) -> BigRational {
    let ext: Vec<ColorSet> = att
        .park
        .paths()
        .iter()
        .zip(votes)
        .filter(|(_, &d)| d == Dcsn::Keep)
        .map(|(p, _)| p.colors.with(add))
        .collect();
    lp.ghat.collection_score(ext.iter(), base)
}

/// Insert e∘P for every keep voter P. Returns the inserted paths and the number of clamps.
fn apply_keep(
    cx: &Ctx<'_, '_>,
    hat: &mut TouristicPark,
    att: &Attachment,
    votes: &[Dcsn],
    le: &LocalEdge,
    add: Color,
    stats: &mut LevelStats,
) -> Result<(Vec<PathRec>, usize)> {
    let mut inserted = Vec::new();
    let mut clamped = 0;
    for (p, &d) in att.park.paths().iter().zip(votes) {
        if d != Dcsn::Keep {
            continue;
        }
        let ext = p.prepend(le.id, cx.v, le.weight, add);
        match hat.insert_path(ext.clone(), true)? {
            InsertOutcome::Inserted => inserted.push(ext),
            InsertOutcome::Clamped => {
                clamped += 1;
                stats.clamps += 1;
                ensure_lemma!(
                    !cx.paper,
                    "insertion at {} for edge {} would break the park",
                    cx.v,
                    le.id
                );
            }
        }
    }
    Ok((inserted, clamped))
}

/// Potential bookkeeping for a keep at the vertex-colored last level.
#[allow(clippy::too_many_arguments)]
fn account_last(
    cx: &Ctx<'_, '_>,
    ll: &mut LastLevelVertex,
    att: &Attachment,
    inserted: &[PathRec],
    clamped: usize,
    v_color: Option<Color>,
    bound: &BigRational,
    edge: EdgeId,
) -> Result<()> {
    let cv = v_color.expect("vertex color");
    let lhat = &cx.lp.lhat;
    let type2 = att.witness.len() == 2;
    let (mut d, mut dx, mut dy) = (BigRational::zero(), BigRational::zero(), BigRational::zero());
    for p in inserted {
        let cs = p.end_color.expect("path end color");
        let pair = ColorSet::from_slice(&[cv, cs]);
        let s = lhat.path_score(&p.colors, &pair);
        d += &s;
        if type2 {
            if cs != cv {
                dx += s;
            } else {
                dy += lhat.path_score(&p.colors, &ColorSet::singleton(cv));
            }
        }
    }
    ll.phi += &d;
    if type2 {
        ll.type2 += 1;
        ll.phi_x += &dx;
        ll.phi_y += &dy;
    } else {
        ll.type1 += 1;
    }
    if clamped == 0 && cx.exact {
        ll.checks += 1;
        if type2 {
            let two_f = BigRational::from_integer(BigInt::from(2 * cx.lc.sched.f));
            ensure_lemma!(
                dx + two_f * dy >= *bound,
                "type-2 keep of edge {edge} at {} raises the potentials too little",
                cx.v
            );
        } else {
            ensure_lemma!(
                d >= *bound,
                "type-1 keep of edge {edge} at {} raises the potential too little",
                cx.v
            );
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn decide_sampled(
    cx: &Ctx<'_, '_>,
    hat: &TouristicPark,
    att: &Attachment,
    add: Color,
    allow_pstpn: bool,
    c_s: u32,
    rng: &mut crate::rng::Rng,
    stats: &mut LevelStats,
) -> Result<(Dcsn, [f64; 3], Option<Vec<Dcsn>>)> {
    let lp = cx.lp;
    let n = cx.lc.sched.n.max(2) as f64;
    let draws = (c_s as usize * n.ln().ceil() as usize).max(1);
    let global = att.park.global();
    let total = global.link_score(&att.witness);
    let mut memo: BTreeMap<usize, Dcsn> = BTreeMap::new();
    let mut counts = [0usize; 3];
    for _ in 0..draws {
        let x = global.sample_index(&att.witness, rng)?;
        let d = *memo
            .entry(x)
            .or_insert_with(|| vote_one(hat, &att.park.paths()[x], add, allow_pstpn));
        counts[slot(d)] += 1;
    }
    // total·c/draws ≥ 1/8
    let reaches = |c: usize| {
        &total * BigRational::from_integer(BigInt::from(8 * c))
            >= BigRational::from_integer(BigInt::from(draws))
    };
    let scores = [0, 1, 2].map(|s| log2_ratio(&(&total * ratio(counts[s] as i64, draws as i64))));
    let exact = |stats: &mut LevelStats| -> Result<(Dcsn, [f64; 3], Option<Vec<Dcsn>>)> {
        stats.sampled_exact_fallbacks += 1;
        let votes = vote_all(hat, att, add, allow_pstpn);
        let (d, s) = decide_exact(lp, att, &votes)?;
        Ok((d, s, Some(votes)))
    };
    if reaches(counts[slot(Dcsn::Safe)]) {
        // Safety must not rest on sampling luck: the distinct safe voters drawn must already
        // carry more than 1/α of the witness score.
        let safe_sets: Vec<&ColorSet> = memo
            .iter()
            .filter(|(_, &d)| d == Dcsn::Safe)
            .map(|(&x, _)| &att.park.paths()[x].colors)
            .collect();
        if lp.g.collection_score(safe_sets, &att.witness) > lp.g.inv_alpha() {
            return Ok((Dcsn::Safe, scores, None));
        }
        return exact(stats);
    }
    if reaches(counts[slot(Dcsn::Keep)]) {
        return Ok((Dcsn::Keep, scores, None));
    }
    if reaches(counts[slot(Dcsn::Pstpn)]) {
        return Ok((Dcsn::Pstpn, scores, None));
    }
    exact(stats)
}

/// Find the fullness witness and a next-level park. None means the caller must keep the edge.
fn postpone(
    cx: &Ctx<'_, '_>,
    hat: &TouristicPark,
    cache: &mut BTreeMap<ColorSet, Arc<Attachment>>,
    le: &LocalEdge,
    v_color: Option<Color>,
    stats: &mut LevelStats,
) -> Result<Option<Arc<Attachment>>> {
    let search = if cx.vcft {
        ColorSet::from_slice(&[
            v_color.expect("vertex color"),
            le.other_color.expect("neighbor color"),
        ])
    } else {
        ColorSet::singleton(le.color.expect("edge color"))
    };
    let found = hat.global().find_full_subset(&search);
    ensure_lemma!(
        found.is_some() || !(cx.paper && cx.exact),
        "postponed edge {} at {} has no full witness link",
        le.id,
        cx.v
    );
    // A park built for an earlier, lighter edge serves any later edge whose damage colors
    // contain its witness.
    for cand in search.subsets() {
        if cx.vcft && !cand.contains(v_color.expect("vertex color")) {
            continue;
        }
        if let Some(a) = cache.get(&cand) {
            stats.reused_parks += 1;
            return Ok(Some(a.clone()));
        }
    }
    let Some(mut t) = found else {
        stats.fallback_no_witness += 1;
        return Ok(None);
    };
    if cx.vcft {
        t.insert(v_color.expect("vertex color"));
    }
    let sched = cx.lc.sched;
    let i = cx.lc.level;
    let inp = SamplerInput {
        stem: cx.v,
        paths: hat.global().link_items(&t),
        witness: &t,
        level: i,
        cur: &sched.levels[i],
        next: &sched.levels[i + 1],
        bucket_size: sched.bucket_size,
        paper: cx.paper,
    };
    let (res, st) = park_sample(&inp)?;
    stats.sampler += &st;
    match res {
        SampleResult::FullPark(park) => {
            let a = Arc::new(Attachment {
                park,
                witness: t.clone(),
            });
            cache.insert(t, a.clone());
            Ok(Some(a))
        }
        SampleResult::Fallback => {
            stats.fallback_sampler += 1;
            Ok(None)
        }
    }
}

/// Machine-check the level-entry invariant for the neighbor's attachment.
fn check_attachment(cx: &Ctx<'_, '_>, ac: &AuditCtx<'_>, le: &LocalEdge) -> Result<()> {
    let i = cx.lc.level;
    let g = ac.g;
    let att = &le.att;
    let u = le.other;
    att.park.audit()?;
    let dmg = g.damage_colors(le.id);
    ensure_lemma!(
        att.witness.is_subset(&dmg),
        "witness {} of edge {} is not within its damage colors",
        att.witness,
        le.id
    );
    if cx.vcft {
        ensure_lemma!(
            att.witness.contains(g.vertex_color(u)),
            "witness of edge {} misses the holder's color",
            le.id
        );
    }
    let mut fresh = Vec::with_capacity(att.park.len());
    for p in att.park.paths() {
        ensure_lemma!(p.start() == u, "attachment path does not start at {u}");
        ensure_lemma!(p.hop_len() == i, "attachment path has {} hops at level {i}", p.hop_len());
        ensure_lemma!(p.end_level as usize >= i, "attachment path ends outside S_{i}");
        ensure_lemma!(p.max_weight <= le.weight, "attachment path heavier than edge {}", le.id);
        ensure_lemma!(p.vertices.len() == p.edges.len() + 1, "attachment path is malformed");
        let mut colors = ColorSet::new();
        for (h, &e) in p.edges.iter().enumerate() {
            let ed = g.edge(e);
            let (a, b) = (p.vertices[h], p.vertices[h + 1]);
            ensure_lemma!(
                (ed.u == a && ed.v == b) || (ed.u == b && ed.v == a),
                "attachment path is not a walk"
            );
            ensure_lemma!(ac.h_entry[e], "attachment path uses edge {e} outside the spanner");
            if let Some(c) = ed.color {
                colors.insert(c);
            }
        }
        if cx.vcft {
            for &x in &p.vertices {
                colors.insert(g.vertex_color(x));
            }
            ensure_lemma!(
                p.end_color == Some(g.vertex_color(p.end())),
                "cached end color is stale"
            );
        }
        ensure_lemma!(colors == p.colors, "cached path colors are stale");
        fresh.push(colors);
    }
    // Fullness on the witness, recomputed from the graph rather than from the park's index.
    let score = att.park.global().params().collection_score(fresh.iter(), &att.witness);
    ensure_lemma!(
        score > ratio(1, 2),
        "attachment of edge {} at {u} is not full on its witness",
        le.id
    );
    Ok(())
}

/// Rebuild, for every fault set that spares the edge, the detour the safe decision relies on:
/// a surviving path from the neighbor's safe voters and a surviving path of the local park at
/// the shared center.
#[allow(clippy::too_many_arguments)]
fn replay_safe(
    cx: &Ctx<'_, '_>,
    ac: &AuditCtx<'_>,
    hat: &TouristicPark,
    att: &Attachment,
    votes: &[Dcsn],
    le: &LocalEdge,
    add: Color,
    kept_here: &[EdgeId],
    stats: &mut LevelStats,
) -> Result<()> {
    let g = ac.g;
    let i = cx.lc.level;
    let f = cx.lc.sched.f as usize;
    let v = cx.v;
    let u = le.other;
    let mut safe_park: Park<PathRec> = Park::new(cx.lp.g.clone());
    let mut relevant = ColorSet::new();
    for (p, &d) in att.park.paths().iter().zip(votes) {
        if d == Dcsn::Safe {
            safe_park.insert_unchecked(p.clone());
            relevant = relevant.union(&p.colors);
            if let Some(l) = hat.local(p.end()) {
                for q in l.items() {
                    relevant = relevant.union(&q.colors);
                }
            }
        }
    }
    let dmg = g.damage_colors(le.id);
    let universe: Vec<Color> = relevant.iter().filter(|c| !dmg.contains(*c)).collect();
    if count_up_to(universe.len() as u64, f as u64) > AUDIT_BUDGET {
        stats.audit_skipped += 1;
        return Ok(());
    }
    let in_h = |e: EdgeId| ac.h_entry[e] || kept_here.contains(&e);
    let stretch = (2 * i + 1) as f64;
    for faults in subsets_up_to(&universe, f) {
        let p1 = safe_park.surviving_path(&att.witness, &faults)?;
        let s = p1.end();
        let local = hat
            .local(s)
            .ok_or_else(|| Error::LemmaViolation(format!("safe voter ends at {s} with no local park")))?;
        let j = local
            .find_full_subset(&p1.colors.with(add))
            .ok_or_else(|| Error::LemmaViolation("surviving safe voter has no full local link".into()))?;
        let p2 = local.surviving_path(&j, &faults)?;
        ensure_lemma!(p1.start() == u && p2.start() == v, "replayed detour has wrong endpoints");
        ensure_lemma!(
            p1.hop_len() == i && p2.hop_len() == i + 1,
            "replayed detour has wrong hop lengths"
        );
        let mut total = 0.0;
        for &e in p1.edges.iter().chain(&p2.edges) {
            ensure_lemma!(in_h(e), "detour edge {e} is not in the spanner");
            ensure_lemma!(!g.is_damaged(e, &faults), "detour edge {e} is damaged by {faults}");
            ensure_lemma!(g.edge(e).weight <= le.weight, "detour edge {e} is heavier than {}", le.id);
            total += g.edge(e).weight;
        }
        ensure_lemma!(
            total <= stretch * le.weight * (1.0 + 1e-12),
            "detour for edge {} is too long",
            le.id
        );
    }
    stats.safe_audits += 1;
    Ok(())
}

/// Undecided edges of one level with their two attachments.
#[derive(Clone, Debug)]
pub struct LevelState {
    pub level: usize,
    /// E_i, ascending ids.
    pub edges: Vec<EdgeId>,
    /// att[e][0] is held at e.u, att[e][1] at e.v.
    pub att: Vec<Option<[Arc<Attachment>; 2]>>,
}

pub fn initial_state(g: &ColoredGraph, sched: &Schedule, centers: &[u8]) -> LevelState {
    let vcft = g.mode() == ColorMode::Vcft;
    let triv: Vec<Arc<Attachment>> = (0..g.n())
        .map(|u| {
            let c = vcft.then(|| g.vertex_color(u));
            Arc::new(trivial_attachment(sched, u, c, centers[u]))
        })
        .collect();
    LevelState {
        level: 0,
        edges: (0..g.m()).collect(),
        att: g
            .edges()
            .iter()
            .map(|e| Some([triv[e.u].clone(), triv[e.v].clone()]))
            .collect(),
    }
}

/// What vertex `at` sees of edge `id`: the neighbor and the neighbor's attachment.
pub fn local_edge(g: &ColoredGraph, id: EdgeId, at: Vertex, att: Arc<Attachment>) -> LocalEdge {
    let e = g.edge(id);
    let other = e.other(at);
    LocalEdge {
        id,
        other,
        weight: e.weight,
        color: e.color,
        other_color: (g.mode() == ColorMode::Vcft).then(|| g.vertex_color(other)),
        att,
    }
}

/// Per-vertex inputs for a level. With `owner`, an edge goes only to the endpoint in charge.
pub fn vertex_inputs(g: &ColoredGraph, st: &LevelState, owner: Option<&[Vertex]>) -> Vec<VertexInput> {
    let vcft = g.mode() == ColorMode::Vcft;
    let mut inputs: Vec<VertexInput> = (0..g.n())
        .map(|v| VertexInput {
            v,
            v_color: vcft.then(|| g.vertex_color(v)),
            edges: Vec::new(),
        })
        .collect();
    for &id in &st.edges {
        let e = g.edge(id);
        let [au, av] = st.att[id].as_ref().expect("undecided edge has attachments");
        let want = |x: Vertex| owner.is_none_or(|o| o[id] == x);
        if want(e.u) {
            inputs[e.u].edges.push(local_edge(g, id, e.u, av.clone()));
        }
        if want(e.v) {
            inputs[e.v].edges.push(local_edge(g, id, e.v, au.clone()));
        }
    }
    for inp in &mut inputs {
        sort_local_edges(&mut inp.edges);
    }
    inputs
}

pub struct LevelOutcome {
    pub kept: Vec<EdgeId>,
    pub next: LevelState,
    pub stats: LevelStats,
    pub trace: Vec<DecisionRecord>,
    pub last: Vec<Option<LastLevelVertex>>,
}

/// Join the endpoint decisions: kept if either endpoint keeps, next level if both postpone,
/// discarded otherwise. With `owner`, the owner's decision is final.
pub fn combine(
    g: &ColoredGraph,
    st: &LevelState,
    outs: Vec<VertexOutput>,
    owner: Option<&[Vertex]>,
) -> Result<LevelOutcome> {
    let m = g.m();
    let mut stats = LevelStats::new(st.level, g.n());
    stats.edges = st.edges.len();
    let mut dec: Vec<[Option<Dcsn>; 2]> = vec![[None, None]; m];
    let mut post: Vec<[Option<Arc<Attachment>>; 2]> = vec![[None, None]; m];
    let mut trace = Vec::new();
    let mut last = Vec::with_capacity(outs.len());
    for (v, o) in outs.into_iter().enumerate() {
        stats.absorb(&o.stats);
        let side = |id: EdgeId| usize::from(g.edge(id).u != v);
        for (id, d) in o.decisions {
            dec[id][side(id)] = Some(d);
        }
        for (id, a) in o.postponed {
            post[id][side(id)] = Some(a);
        }
        trace.extend(o.trace);
        last.push(o.last);
    }
    let mut kept = Vec::new();
    let mut next = LevelState {
        level: st.level + 1,
        edges: Vec::new(),
        att: vec![None; m],
    };
    for &id in &st.edges {
        let [a, b] = dec[id];
        let both = match owner {
            Some(o) => {
                let d = if o[id] == g.edge(id).u { a } else { b };
                let d = d.ok_or_else(|| Error::SimulationFault(format!("edge {id} was not decided")))?;
                [d, d]
            }
            None => [
                a.ok_or_else(|| Error::SimulationFault(format!("edge {id} undecided at its first endpoint")))?,
                b.ok_or_else(|| Error::SimulationFault(format!("edge {id} undecided at its second endpoint")))?,
            ],
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
    Ok(LevelOutcome {
        kept,
        next,
        stats,
        trace,
        last,
    })
}

/// Run every level sequentially. The vertex-colored last level is delegated to `vcft`.
pub fn run(
    algorithm: &str,
    g: &ColoredGraph,
    sched: &Schedule,
    centers: &[u8],
    cfg: &EngineCfg,
) -> Result<SpannerResult> {
    let k = sched.k;
    let mut res = SpannerResult::new(algorithm, g.mode(), g.n(), g.m(), k, sched.f as usize, cfg.seed);
    res.center_counts = (0..k)
        .map(|i| centers.iter().filter(|&&l| l as usize >= i).count())
        .collect();
    let mut h = vec![false; g.m()];
    let mut st = initial_state(g, sched, centers);
    for i in 0..k {
        let two_way = g.mode() == ColorMode::Vcft && i + 1 == k;
        let oc = if two_way {
            crate::vcft::last_level_vcft(g, sched, &st, centers, cfg, &h)?
        } else {
            let lc = LevelCtx {
                sched,
                level: i,
                voting: cfg.voting,
                seed: cfg.seed,
                trace: cfg.trace,
                audit: cfg.audit.then_some(AuditCtx { g, h_entry: &h }),
                two_way: false,
            };
            let outs = vertex_inputs(g, &st, None)
                .iter()
                .map(|inp| process_vertex(&lc, inp))
                .collect::<Result<Vec<_>>>()?;
            combine(g, &st, outs, None)?
        };
        for &e in &oc.kept {
            h[e] = true;
        }
        res.levels.push(oc.stats);
        res.trace.extend(oc.trace);
        st = oc.next;
    }
    if !st.edges.is_empty() {
        return Err(Error::LemmaViolation(format!(
            "{} edges remain undecided after the last level",
            st.edges.len()
        )));
    }
    res.kept = (0..g.m()).filter(|&e| h[e]).collect();
    Ok(res)
}

/// Approximate value of an exact score for reports.
pub fn approx(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or_else(|| 2f64.powf(log2_ratio(x)))
}
