//! Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::sync::Arc;

use cft_spanner::baselines::{baswana_sen, greedy_cft, parter_vft, BsConfig, ParterConfig, GREEDY_BUDGET};
use cft_spanner::colorset::{Color, ColorSet};
use cft_spanner::distsim::{simulate_congest, simulate_local, SimConfig, Variant};
use cft_spanner::ecft::{build_ecft_spanner, warmup_3spanner, CftConfig};
use cft_spanner::engine::{attachment_bound, Symmetry, Voting};
use cft_spanner::ftgame::{bob_forcing, check_certificate, park_bound, play, Strategy, GAME_BUDGET};
use cft_spanner::graph::{ColorMode, ColoredGraph, ColoringPolicy};
use cft_spanner::park::Park;
use cft_spanner::params::{ParamConfig, Schedule};
use cft_spanner::result::SpannerResult;
use cft_spanner::sampler::SamplerStats;
use cft_spanner::score::ScoreParams;
use cft_spanner::toolbox::{check_concat, check_double_counting, check_score_transition, linkful_bound, Linkful};
use cft_spanner::vcft::build_vcft_spanner;
use cft_spanner::verifier::{verify_cft, verify_vft, VerifyOptions};
use common::{corpus, graph, half, oracle_score, oracle_stretch, rat, surviving_path_trials, Instance};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Totals over every audited construction run.
#[derive(Default)]
struct Audited {
    runs: usize,
    sampler: SamplerStats,
    safe_replays: usize,
    skipped_replays: usize,
}

impl Audited {
    fn absorb(&mut self, r: &SpannerResult) {
        self.runs += 1;
        for l in &r.levels {
            self.sampler.calls += l.sampler.calls;
            self.sampler.full_park += l.sampler.full_park;
            self.sampler.fallback += l.sampler.fallback;
            self.sampler.iterations += l.sampler.iterations;
            self.sampler.error_events += l.sampler.error_events;
            self.safe_replays += l.safe_audits;
            self.skipped_replays += l.audit_skipped;
        }
    }
}

fn params(paper: bool) -> ParamConfig {
    if paper {
        ParamConfig::paper()
    } else {
        ParamConfig::practical()
    }
}

fn cft_config(inst: &Instance) -> CftConfig {
    CftConfig {
        params: params(inst.paper),
        seed: inst.seed,
        voting: if inst.seed % 3 == 2 { Voting::Sampled { c_s: 8 } } else { Voting::Exact },
        audit: true,
        ..Default::default()
    }
}

fn instance_graph(mode: ColorMode, inst: &Instance) -> ColoredGraph {
    graph(mode, inst.n, inst.m, inst.colors, inst.policy, inst.seed)
}

fn c1_ecft(audited: &mut Audited) -> String {
    let (mut runs, mut sets) = (0, 0u64);
    for inst in corpus(200) {
        let g = instance_graph(ColorMode::Ecft, &inst);
        let r = build_ecft_spanner(&g, inst.f, inst.k, &cft_config(&inst)).unwrap();
        audited.absorb(&r);
        let rep = verify_cft(&g, &r.kept, inst.f, inst.k, &VerifyOptions::default()).unwrap();
        assert!(rep.pass && rep.violations == 0, "{inst:?}: {:?}", rep.worst);
        runs += 1;
        sets += rep.fault_sets;
    }
    format!("{runs} instances, {sets} fault sets, 0 violations")
}

fn c2_vcft(audited: &mut Audited) -> String {
    let (mut runs, mut sets) = (0, 0u64);
    for inst in corpus(200) {
        let g = instance_graph(ColorMode::Vcft, &inst);
        for symmetry in [Symmetry::Sequential, Symmetry::Distributed] {
            let cfg = CftConfig { symmetry, ..cft_config(&inst) };
            let r = build_vcft_spanner(&g, inst.f, inst.k, &cfg).unwrap();
            audited.absorb(&r);
            let rep = verify_cft(&g, &r.kept, inst.f, inst.k, &VerifyOptions::default()).unwrap();
            assert!(rep.pass, "{inst:?} {symmetry:?}: {:?}", rep.worst);
            runs += 1;
            sets += rep.fault_sets;
        }
    }
    format!("{runs} runs (both symmetry modes), {sets} fault sets, 0 violations")
}

fn c3_warmup(audited: &mut Audited) -> String {
    let mut replays = 0;
    for s in 0..50u64 {
        let n = 10 + (s as usize % 16);
        let (policy, colors, m) = match s % 4 {
            0 => (ColoringPolicy::Uniform, 5, 4 * n),
            1 => (ColoringPolicy::Legal, 8, 2 * n),
            2 => (ColoringPolicy::MonoBiased, 4, 4 * n),
            _ => (ColoringPolicy::Uniform, 1, 3 * n),
        };
        let g = graph(ColorMode::Ecft, n, m, colors, policy, s);
        let f = 1 + (s % 3) as usize;
        // A small cap constant makes desk-sized graphs postpone edges.
        let c_g = if s % 2 == 0 { 4.0 } else { 0.05 };
        let cfg = CftConfig { seed: s, audit: true, c_g, ..Default::default() };
        let r = warmup_3spanner(&g, f, &cfg).unwrap();
        replays += r.levels.iter().map(|l| l.safe_audits).sum::<usize>();
        audited.absorb(&r);
        let rep = verify_cft(&g, &r.kept, f, 2, &VerifyOptions::default()).unwrap();
        assert!(rep.pass, "seed {s}: {:?}", rep.worst);
    }
    assert!(replays > 0, "no safe decision was replayed");
    format!("50 instances, 0 violations, {replays} safe decisions replayed over all fault sets")
}

fn c4_parks(audited: &Audited) -> String {
    let trials = surviving_path_trials(404, 10_000);
    format!(
        "{} audited runs with every park link ≤ 1; {trials} direct surviving-path trials, 0 failures",
        audited.runs
    )
}

fn random_set<R: Rng>(rng: &mut R, universe: Color, max: usize) -> ColorSet {
    (0..rng.gen_range(0..=max)).map(|_| rng.gen_range(0..universe)).collect()
}

fn random_params<R: Rng>(rng: &mut R) -> (BigRational, BigRational, u32) {
    let ad = rng.gen_range(1..3);
    let alpha = rat(rng.gen_range(2 * ad..12), ad);
    let bn = rng.gen_range(1..=8);
    let beta = rat(bn, bn + rng.gen_range(0..8));
    (alpha, beta, rng.gen_range(1..=3))
}

fn c5_toolbox() -> String {
    const N: usize = 10_000;
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let coll = |rng: &mut ChaCha8Rng| -> Vec<ColorSet> { (0..rng.gen_range(0..8)).map(|_| random_set(rng, 6, 4)).collect() };
    for _ in 0..N {
        let p = random_params(&mut rng);
        let sp = ScoreParams::new(p.0.clone(), p.1.clone(), p.2).unwrap();
        let o = |c: &[ColorSet], j: &ColorSet| oracle_score(&p.0, &p.1, p.2, c, j);
        let cl = coll(&mut rng);

        // concatenation
        let c = rng.gen_range(0..6);
        let j = random_set(&mut rng, 6, 3);
        check_concat(&sp, &cl, c, &j).unwrap();
        let ext: Vec<ColorSet> = cl.iter().map(|x| x.with(c)).collect();
        assert!(o(&cl, &j) <= o(&ext, &j.with(c)));
        assert!(o(&ext, &j) <= o(&cl, &j) + o(&cl, &j.without(c)));

        // score transition
        let (x, y) = (random_set(&mut rng, 6, 3), random_set(&mut rng, 6, 3));
        check_score_transition(&sp, &cl, &x, &y).unwrap();
        let ly: Vec<ColorSet> = cl.iter().filter(|q| y.is_subset(q)).cloned().collect();
        let xy = x.union(&y);
        let lxy: Vec<ColorSet> = cl.iter().filter(|q| xy.is_subset(q)).cloned().collect();
        let af = &p.0 * BigRational::from_integer(BigInt::from(p.2));
        let e = x.len() as i32 - y.len() as i32;
        let scale = num_traits::pow(if e >= 0 { af.clone() } else { af.recip() }, e.unsigned_abs() as usize);
        assert_eq!(o(&ly, &x), o(&lxy, &y) * scale);

        // double counting
        let i = cl.iter().map(|s| s.len()).max().unwrap_or(0);
        check_double_counting(&sp, &cl, i).unwrap();
        let empty = ColorSet::new();
        let all: ColorSet = (0..6).collect();
        let mut sum = BigRational::zero();
        for jj in all.subsets() {
            let l: Vec<ColorSet> = cl.iter().filter(|q| jj.is_subset(q)).cloned().collect();
            sum += o(&l, &empty);
        }
        assert!(o(&cl, &empty) * BigRational::from_integer(BigInt::from(1u64 << i)) >= sum);
    }
    let mut linkful = 0;
    while linkful < N {
        if linkful_trial(&mut rng) {
            linkful += 1;
        }
    }
    format!("{N} exact trials each of concatenation, transition, double counting and linkful maps")
}

fn linkful_trial(rng: &mut ChaCha8Rng) -> bool {
    let alpha2 = rng.gen_range(2..5u64);
    let alpha = alpha2 + rng.gen_range(0..4);
    let f = rng.gen_range(1..=2);
    let b2 = [(1, 1), (3, 4), (2, 3)][rng.gen_range(0..3)];
    let b1 = [(1, 1), (1, 2), (1, 4)][rng.gen_range(0..3)];
    let mut other = Park::new(Arc::new(ScoreParams::from_ints(alpha2, b2.0, b2.1, f).unwrap()));
    for _ in 0..rng.gen_range(1..10) {
        other.insert(random_set(rng, 6, 3), true).unwrap();
    }
    let full: Vec<ColorSet> = other.items().iter().flat_map(|s| s.subsets()).filter(|j| other.is_full(j)).collect();
    if full.is_empty() {
        return false;
    }
    let mut park = Park::new(Arc::new(ScoreParams::from_ints(alpha, b1.0, b1.1, f).unwrap()));
    let mut map = Vec::new();
    for _ in 0..rng.gen_range(1..10) {
        let g = full[rng.gen_range(0..full.len())].clone();
        if park.insert(g.union(&random_set(rng, 6, 2)), true).unwrap() {
            map.push(g);
        }
    }
    let ell = other.items().iter().map(|s| s.len()).max().unwrap();
    let i = random_set(rng, 6, 3);
    let t = linkful_bound(&Linkful { park: &park, other: &other, map: &map, ell }, &i).unwrap();
    let a1 = BigRational::from_integer(BigInt::from(alpha));
    let a2 = BigRational::from_integer(BigInt::from(alpha2));
    let sc_i = oracle_score(&a1, &rat(b1.0 as i64, b1.1 as i64), f, park.items(), &i);
    let scaled = &a1 / (BigRational::from_integer(BigInt::from(1u64 << (ell + i.len() + 1))) * &a2) * sc_i;
    let target = if scaled < half() { scaled } else { half() };
    assert!(t.is_subset(&i));
    assert!(oracle_score(&a2, &rat(b2.0 as i64, b2.1 as i64), f, other.items(), &t) > target);
    true
}

fn c6_sampler(audited: &Audited) -> String {
    let s = &audited.sampler;
    assert!(s.calls > 0 && s.full_park > 0, "sampler never produced a full park");
    format!(
        "{} sampler calls, {} iterations with S1/S2 checked, {} full parks re-verified, {} fallbacks ({} error events)",
        s.calls, s.iterations, s.full_park, s.fallback, s.error_events
    )
}

fn choose(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn c7_game() -> String {
    let mut pairs = 0;
    for f in 1..8usize {
        for k in 1..=8 - f {
            let (u, sets) = bob_forcing(f, k);
            let opt = play(u, f, k, Strategy::Optimal, &sets).unwrap();
            assert_eq!(opt.kept().len() as u64, choose((f + k) as u64, k as u64), "f={f} k={k}");
            assert!(check_certificate(u, opt.all(), opt.kept(), f, GAME_BUDGET).unwrap());
            let pk = play(u, f, k, Strategy::Park, &sets).unwrap();
            assert!(pk.kept().len() as u128 <= park_bound(f, k));
            assert!(check_certificate(u, pk.all(), pk.kept(), f, GAME_BUDGET).unwrap());
            pairs += 1;
        }
    }
    format!("{pairs} (f,k) pairs: optimal keeps C(f+k,k) exactly, park within 2(2f)^k, all certificates valid")
}

fn c8_baselines() -> String {
    for s in 0..50u64 {
        let k = 2 + (s % 2) as usize;
        let n = 12 + (s as usize % 19);
        let g = graph(ColorMode::Ecft, n, (n * (n - 1) / 2).min(6 * n), 3, ColoringPolicy::Uniform, s);
        let c_g = if s % 2 == 0 { 4.0 } else { 0.05 };
        let r = baswana_sen(&g, k, &BsConfig { c_g, seed: s, audit: true }).unwrap();
        let worst = oracle_stretch(&g, &r.kept);
        assert!(worst <= (2 * k - 1) as f64 * (1.0 + 1e-9), "seed {s}: {worst}");
    }
    let mut parter = 0;
    for s in 0..20u64 {
        let n = 10 + (s as usize % 11);
        let g = graph(ColorMode::Ecft, n, 3 * n, 2, ColoringPolicy::Uniform, s);
        for f in 1..=2 {
            let voting = if s % 2 == 0 { Voting::Exact } else { Voting::Sampled { c_s: 6 } };
            let k = 2 + (s % 2) as usize;
            let r = parter_vft(&g, f, k, &ParterConfig { voting, seed: s, audit: true, ..Default::default() }).unwrap();
            assert!(verify_vft(&g, &r.kept, f, k, &VerifyOptions::default()).unwrap().pass);
            parter += 1;
        }
    }
    let (mut smaller, mut total) = (0, 0);
    for inst in corpus(60).into_iter().filter(|i| !i.paper) {
        let g = instance_graph(ColorMode::Ecft, &inst);
        let gr = greedy_cft(&g, inst.f, inst.k, GREEDY_BUDGET).unwrap();
        assert!(verify_cft(&g, &gr.kept, inst.f, inst.k, &VerifyOptions::default()).unwrap().pass);
        let main = build_ecft_spanner(&g, inst.f, inst.k, &CftConfig { seed: inst.seed, ..Default::default() }).unwrap();
        total += 1;
        if gr.size() <= main.size() {
            smaller += 1;
        }
    }
    let share = 100.0 * smaller as f64 / total as f64;
    assert!(share >= 95.0, "greedy no larger in only {share:.1}%");
    format!(
        "baswana-sen 50/50 all-pairs stretch ok; parter-vft {parter}/{parter} exact VFT ok; greedy verified and no larger in {smaller}/{total} ({share:.1}%)"
    )
}

fn c9_distsim() -> String {
    let variants = [Variant::Ecft, Variant::Vcft, Variant::BaswanaSen, Variant::ParterVft];
    let (mut runs, mut max_rounds) = (0, 0.0f64);
    for inst in corpus(50) {
        let n = inst.n.min(20);
        let m = inst.m.min(n * (n - 1) / 2);
        let mut cfg = SimConfig::default();
        cfg.cft.params = params(inst.paper);
        for v in variants {
            let mode = if v == Variant::Vcft { ColorMode::Vcft } else { ColorMode::Ecft };
            let g = graph(mode, n, m, inst.colors, inst.policy, inst.seed);
            let (_, log) = simulate_local(&g, inst.f, inst.k, v, &cfg, inst.seed).unwrap();
            assert!(log.identical && log.local_rounds <= 3 * inst.k);
            max_rounds = max_rounds.max(log.local_rounds as f64 / inst.k as f64);
            let (_, cl) = simulate_congest(&g, inst.f, inst.k, v, 12, &cfg, inst.seed).unwrap();
            assert!(cl.identical && cl.per_round_max_words.iter().all(|&w| w <= 12));
            if matches!(v, Variant::Ecft | Variant::Vcft) {
                let s = Schedule::new(mode, n, inst.k, inst.f as u32, &cfg.cft.params).unwrap();
                for (i, l) in cl.levels.iter().enumerate() {
                    let paths = BigRational::from_integer(BigInt::from(l.max_attachment_paths));
                    assert!(paths <= attachment_bound(&s.levels[i]));
                }
            }
            runs += 1;
        }
    }
    format!("{runs}/{runs} runs identical to sequential; at most {max_rounds:.1}k LOCAL rounds; CONGEST budget held")
}

fn c10_determinism() -> String {
    // Library: every corpus instance rebuilt from its seed gives the same report.
    for inst in corpus(200) {
        let g = instance_graph(ColorMode::Ecft, &inst);
        let cfg = CftConfig { audit: false, ..cft_config(&inst) };
        let a = build_ecft_spanner(&g, inst.f, inst.k, &cfg).unwrap();
        let b = build_ecft_spanner(&g, inst.f, inst.k, &cfg).unwrap();
        assert_eq!(a.report_json(), b.report_json());
    }
    // Binary: every subcommand, run twice, byte for byte.
    let mut commands = 0;
    for inst in corpus(12) {
        let mut outs = Vec::new();
        for _ in 0..2 {
            let dir = tempfile::tempdir().unwrap();
            let d = dir.path();
            let (g, s, r) = ("g.txt".to_string(), "s.txt".to_string(), "r.json".to_string());
            let seed = inst.seed.to_string();
            let mode = if inst.seed % 2 == 0 { "ecft" } else { "vcft" };
            let (n, m, c) = (inst.n.to_string(), inst.m.to_string(), inst.colors.to_string());
            let mut out = Vec::new();
            let mut cmd = |args: &[&str]| out.push(run_bin(d, args));
            cmd(&["gen", "--mode", mode, "--n", &n, "--m", &m, "--colors", &c, "--seed", &seed, "--out", &g]);
            cmd(&["span", "--graph", &g, "--algo", mode, "--voting", "sampled", "--seed", &seed, "--out", &s, "--report", &r]);
            cmd(&["verify", "--graph", &g, "--spanner", &s, "--sample", "20", "--seed", &seed]);
            cmd(&["sim", "--graph", &g, "--algo", mode, "--model", "congest", "--word-budget", "10", "--seed", &seed]);
            cmd(&["game", "--alice", "park", "--f", "2", "--k", "2"]);
            cmd(&["bench", "--seeds", "2", "--n", "10", "--m", "25", "--seed", &seed]);
            out.push(std::fs::read(d.join(&g)).unwrap());
            out.push(std::fs::read(d.join(&s)).unwrap());
            out.push(std::fs::read(d.join(&r)).unwrap());
            outs.push(out);
        }
        assert!(outs[0] == outs[1], "{inst:?} differs between runs");
        commands += 6;
    }
    format!("200 library rebuilds and {commands} command pairs byte-identical")
}

fn run_bin(dir: &Path, args: &[&str]) -> Vec<u8> {
    let o = Command::new(env!("CARGO_BIN_EXE_cftspan")).current_dir(dir).args(args).output().unwrap();
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    o.stdout
}

fn main() {
    std::panic::set_hook(Box::new(|_| {}));
    let mut audited = Audited::default();
    let mut failed = 0;
    let mut line = |n: usize, name: &str, r: std::thread::Result<String>| {
        match r {
            Ok(detail) => println!("PASS {n:>2} {name}: {detail}"),
            Err(e) => {
                failed += 1;
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                println!("FAIL {n:>2} {name}: {msg}");
            }
        }
    };
    let guarded = |f: &mut dyn FnMut() -> String| catch_unwind(AssertUnwindSafe(f));
    line(1, "ecft correctness", guarded(&mut || c1_ecft(&mut audited)));
    line(2, "vcft correctness", guarded(&mut || c2_vcft(&mut audited)));
    line(3, "warm-up 3-spanner", guarded(&mut || c3_warmup(&mut audited)));
    line(4, "park invariants", guarded(&mut || c4_parks(&audited)));
    line(5, "score toolbox", guarded(&mut c5_toolbox));
    line(6, "park sampling", guarded(&mut || c6_sampler(&audited)));
    line(7, "ft game counts", guarded(&mut c7_game));
    line(8, "baselines", guarded(&mut c8_baselines));
    line(9, "distributed simulation", guarded(&mut c9_distsim));
    line(10, "determinism", guarded(&mut c10_determinism));
    if failed > 0 {
        std::process::exit(1);
    }
}
