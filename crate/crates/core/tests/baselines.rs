//! Reference constructions against independent distance oracles and the exact verifier.

mod common;

use cft_spanner::baselines::{baswana_sen, greedy_cft, parter_vft, BsConfig, ParterConfig, GREEDY_BUDGET};
use cft_spanner::ecft::{build_ecft_spanner, CftConfig};
use cft_spanner::engine::Voting;
use cft_spanner::error::Error;
use cft_spanner::graph::{generate_random, ColorMode, ColoredGraph, ColoringPolicy, GenParams, Size};
use cft_spanner::verifier::{verify_cft, verify_plain, verify_vft, VerifyMode, VerifyOptions};
use common::{graph, oracle_stretch};

fn multigraph(n: usize, m: usize, seed: u64) -> ColoredGraph {
    generate_random(&GenParams {
        mode: ColorMode::Ecft,
        n,
        size: Size::Edges(m),
        color_count: 3,
        weight_range: (1.0, 3.0),
        policy: ColoringPolicy::Uniform,
        multigraph: true,
        seed,
    })
    .unwrap()
}

#[test]
fn baswana_sen_all_pairs_stretch() {
    let mut postponed = 0;
    for seed in 0..50u64 {
        let k = 2 + (seed % 2) as usize;
        let n = 12 + (seed as usize % 19);
        let g = if seed % 5 == 4 {
            multigraph(n, 4 * n, seed)
        } else {
            graph(ColorMode::Ecft, n, (n * (n - 1) / 2).min(6 * n), 3, ColoringPolicy::Uniform, seed)
        };
        let c_g = if seed % 2 == 0 { 4.0 } else { 0.05 };
        let r = baswana_sen(&g, k, &BsConfig { c_g, seed, audit: true }).unwrap();
        postponed += r.levels.iter().map(|l| l.postponed_edges).sum::<usize>();
        let worst = oracle_stretch(&g, &r.kept);
        assert!(worst <= (2 * k - 1) as f64 * (1.0 + 1e-9), "seed {seed}: stretch {worst}");
        let opts = VerifyOptions {
            all_pairs: true,
            ..Default::default()
        };
        assert!(verify_plain(&g, &r.kept, k, &opts).unwrap().pass);
    }
    assert!(postponed > 0, "no instance exercised postponement");
}

#[test]
fn baswana_sen_on_a_clique_and_a_tree() {
    let n = 30;
    let clique: Vec<_> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b, 1.0, Some(0))))
        .collect();
    let g = ColoredGraph::new(ColorMode::Ecft, n, 1, clique, vec![]).unwrap();
    for seed in 0..5 {
        let r = baswana_sen(&g, 2, &BsConfig { c_g: 0.1, seed, audit: true }).unwrap();
        assert!(oracle_stretch(&g, &r.kept) <= 3.0);
    }
    let tree: Vec<_> = (1..20).map(|v| ((v - 1) / 2, v, 1.0 + v as f64, Some(0))).collect();
    let t = ColoredGraph::new(ColorMode::Ecft, 20, 1, tree, vec![]).unwrap();
    let r = baswana_sen(&t, 3, &BsConfig::default()).unwrap();
    assert_eq!(r.size(), t.m());
}

#[test]
fn parter_vft_passes_exact_vertex_fault_verification() {
    for seed in 0..12u64 {
        let n = 10 + (seed as usize % 11);
        let g = graph(ColorMode::Ecft, n, 3 * n, 2, ColoringPolicy::Uniform, seed);
        for f in 1..=2 {
            for k in 2..=3 {
                for voting in [Voting::Exact, Voting::Sampled { c_s: 6 }] {
                    let c = if seed % 2 == 0 { 1.0 } else { 0.02 };
                    let cfg = ParterConfig { c, voting, seed, audit: true };
                    let r = parter_vft(&g, f, k, &cfg).unwrap();
                    let rep = verify_vft(&g, &r.kept, f, k, &VerifyOptions::default()).unwrap();
                    assert!(rep.pass, "seed {seed} f {f} k {k}: {:?}", rep.worst);
                }
            }
        }
    }
}

#[test]
fn parter_vft_postpones_on_dense_graphs() {
    // Postponing needs 8kf disjoint routes into the next centers, so only dense graphs get there.
    let g = graph(ColorMode::Ecft, 250, 25_000, 2, ColoringPolicy::Uniform, 1);
    let cfg = ParterConfig { c: 1.5, seed: 1, ..Default::default() };
    let r = parter_vft(&g, 1, 3, &cfg).unwrap();
    assert!(r.levels[0].postponed_edges > 0);
    let opts = VerifyOptions {
        mode: VerifyMode::Sampled(2),
        jobs: 4,
        ..Default::default()
    };
    assert!(verify_vft(&g, &r.kept, 1, 3, &opts).unwrap().pass);
}

#[test]
fn parter_vft_rejects_multigraphs() {
    let g = multigraph(8, 30, 1);
    assert!(g.has_parallel_edges());
    assert!(matches!(
        parter_vft(&g, 1, 2, &ParterConfig::default()),
        Err(Error::InvalidGraph(_))
    ));
}

#[test]
fn greedy_is_correct_and_rarely_larger() {
    let (mut smaller, mut total) = (0, 0);
    for seed in 0..30u64 {
        let g = graph(ColorMode::Ecft, 14, 45, 4, ColoringPolicy::Uniform, seed);
        for f in 1..=2 {
            let r = greedy_cft(&g, f, 2, GREEDY_BUDGET).unwrap();
            assert!(verify_cft(&g, &r.kept, f, 2, &VerifyOptions::default()).unwrap().pass);
            let cfg = CftConfig { seed, ..Default::default() };
            let main = build_ecft_spanner(&g, f, 2, &cfg).unwrap();
            total += 1;
            if r.size() <= main.size() {
                smaller += 1;
            }
        }
    }
    assert!(smaller * 100 >= total * 95, "greedy no larger in {smaller}/{total}");
}

#[test]
fn greedy_respects_its_budget() {
    let g = graph(ColorMode::Ecft, 20, 80, 30, ColoringPolicy::Uniform, 2);
    assert!(matches!(greedy_cft(&g, 3, 2, 10), Err(Error::BudgetExceeded { .. })));
}
