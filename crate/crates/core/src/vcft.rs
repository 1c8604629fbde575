//! Vertex-color fault-tolerant spanners. The non-last levels reuse the shared engine; the
//! last level has no postpone option and hands each edge to one endpoint.

use std::collections::BTreeSet;

use serde_json::json;

use crate::ecft::{normalize, schedule_json, CftConfig};
use crate::engine::{
    self, approx, combine, process_vertex, vertex_inputs, AuditCtx, EngineCfg, LevelCtx,
    LevelOutcome, LevelState, Symmetry,
};
use crate::error::{ensure_lemma, Result};
use crate::graph::{ColorMode, ColoredGraph, Vertex};
use crate::params::{sample_center_levels, Schedule};
use crate::result::{SpannerResult, VcftLastStats};
use crate::rng::derive_seed;

/// |Ỹ_v|: last-level centers of v's color that end a path of some park attached to an
/// undecided edge at v's neighbor.
pub fn y_tilde(g: &ColoredGraph, st: &LevelState) -> Vec<usize> {
    let mut sets: Vec<BTreeSet<Vertex>> = vec![BTreeSet::new(); g.n()];
    for &id in &st.edges {
        let e = g.edge(id);
        let [au, av] = st.att[id].as_ref().expect("undecided edge has attachments");
        for (v, att) in [(e.u, av), (e.v, au)] {
            let cv = g.vertex_color(v);
            for p in att.park.paths() {
                if p.end_color == Some(cv) && p.end_level as usize >= st.level {
                    sets[v].insert(p.end());
                }
            }
        }
    }
    sets.iter().map(BTreeSet::len).collect()
}

/// Endpoint in charge of each undecided edge (usize::MAX elsewhere). Ties go to the lower id.
pub fn charge_owner(g: &ColoredGraph, st: &LevelState, symmetry: Symmetry, yt: &[usize]) -> Vec<Vertex> {
    let mut class = vec![0usize; g.color_count() as usize];
    for &c in g.vertex_colors() {
        class[c as usize] += 1;
    }
    let key = |x: Vertex| match symmetry {
        Symmetry::Sequential => class[g.vertex_color(x) as usize],
        Symmetry::Distributed => yt[x],
    };
    let mut owner = vec![usize::MAX; g.m()];
    for &id in &st.edges {
        let e = g.edge(id);
        owner[id] = if (key(e.u), e.u) <= (key(e.v), e.v) { e.u } else { e.v };
    }
    owner
}

pub fn last_level_vcft(
    g: &ColoredGraph,
    sched: &Schedule,
    st: &LevelState,
    centers: &[u8],
    cfg: &EngineCfg,
    h: &[bool],
) -> Result<LevelOutcome> {
    let yt = y_tilde(g, st);
    let owner = charge_owner(g, st, cfg.symmetry, &yt);
    let lc = LevelCtx {
        sched,
        level: st.level,
        voting: cfg.voting,
        seed: cfg.seed,
        trace: cfg.trace,
        audit: cfg.audit.then_some(AuditCtx { g, h_entry: h }),
        two_way: true,
    };
    let outs = vertex_inputs(g, st, Some(&owner))
        .iter()
        .map(|inp| process_vertex(&lc, inp))
        .collect::<Result<Vec<_>>>()?;
    let mut oc = combine(g, st, outs, Some(&owner))?;
    oc.stats.vcft_last = Some(last_level_stats(g, st, centers, cfg.symmetry, &owner, &yt, &oc)?);
    Ok(oc)
}

pub(crate) fn last_level_stats(
    g: &ColoredGraph,
    st: &LevelState,
    centers: &[u8],
    symmetry: Symmetry,
    owner: &[Vertex],
    yt: &[usize],
    oc: &LevelOutcome,
) -> Result<VcftLastStats> {
    let n = g.n();
    let last = st.level;
    let mut s = VcftLastStats {
        charged: vec![0; n],
        type1_keeps: vec![0; n],
        type2_keeps: vec![0; n],
        safe: vec![0; n],
        phi: vec![0.0; n],
        phi_x: vec![0.0; n],
        phi_y: vec![0.0; n],
        y_tilde: yt.to_vec(),
        last_level_centers: centers.iter().filter(|&&l| l as usize >= last).count(),
        ..Default::default()
    };
    let mut centers_of_color = vec![0usize; g.color_count() as usize];
    for v in 0..n {
        if centers[v] as usize >= last {
            centers_of_color[g.vertex_color(v) as usize] += 1;
        }
    }
    for &id in &st.edges {
        let v = owner[id];
        s.charged[v] += 1;
        if symmetry == Symmetry::Distributed {
            let u = g.edge(id).other(v);
            ensure_lemma!(
                centers_of_color[g.vertex_color(u) as usize] >= yt[v],
                "edge {id}: fewer centers of its far color than |Y~| at the charged endpoint"
            );
            s.observation_checks += 1;
        }
    }
    for v in 0..n {
        s.safe[v] = oc.stats.per_vertex[v][1];
        if let Some(ll) = &oc.last[v] {
            s.type1_keeps[v] = ll.type1;
            s.type2_keeps[v] = ll.type2;
            s.phi[v] = approx(&ll.phi);
            s.phi_x[v] = approx(&ll.phi_x);
            s.phi_y[v] = approx(&ll.phi_y);
            s.potential_checks += ll.checks;
        }
        debug_assert_eq!(s.type1_keeps[v] + s.type2_keeps[v], oc.stats.per_vertex[v][0]);
    }
    Ok(s)
}

fn run_once(g: &ColoredGraph, f: u32, k: usize, cfg: &CftConfig, seed: u64) -> Result<SpannerResult> {
    let sched = Schedule::new(ColorMode::Vcft, g.n(), k, f, &cfg.params)?;
    let centers = sample_center_levels(g.n(), k, sched.p, seed);
    let mut res = engine::run("vcft", g, &sched, &centers, &cfg.engine(seed))?;
    res.extra = json!({ "schedule": schedule_json(&sched), "symmetry": cfg.symmetry });
    Ok(res)
}

pub fn build_vcft_spanner(g: &ColoredGraph, f: usize, k: usize, cfg: &CftConfig) -> Result<SpannerResult> {
    let (f, warnings) = match normalize("vcft", g, ColorMode::Vcft, f, k, cfg.seed)? {
        Ok(x) => x,
        Err(done) => return Ok(done),
    };
    let mut res = run_once(g, f, k, cfg, cfg.seed)?;
    if let Some(rep) = cfg.repetition {
        let n = g.n().max(2) as f64;
        let kf = k as f64;
        let target = rep.multiple * kf * (f as f64).powf(1.0 - 1.0 / kf) * n.powf(1.0 + 1.0 / kf);
        let runs = rep.c_r.max(1) as usize * n.ln().ceil() as usize;
        let mut attempt = 1;
        while (res.size() as f64) > target && attempt < runs {
            res = run_once(g, f, k, cfg, derive_seed(cfg.seed, "repeat", attempt as u64))?;
            attempt += 1;
        }
        res.extra["repetitions"] = json!({ "runs": attempt, "target": target });
    }
    res.seed = cfg.seed;
    res.warnings = warnings;
    Ok(res)
}
