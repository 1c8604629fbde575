//! Exact score arithmetic and the toolbox inequalities against a from-the-definition oracle.

mod common;

use std::sync::Arc;

use cft_spanner::colorset::{Color, ColorSet};
use cft_spanner::park::Park;
use cft_spanner::score::{compare, ScoreParams};
use cft_spanner::toolbox::{
    check_concat, check_double_counting, check_score_transition, concat, link, linkful_bound, Linkful,
};
use common::{half, oracle_score, rat};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

const TRIALS: u32 = 10_000;
const UNIVERSE: Color = 6;

fn set_strategy(max: usize) -> impl Strategy<Value = ColorSet> {
    prop::collection::btree_set(0..UNIVERSE, 0..=max).prop_map(|s| s.into_iter().collect())
}

fn coll_strategy() -> impl Strategy<Value = Vec<ColorSet>> {
    prop::collection::vec(set_strategy(4), 0..8)
}

/// (α, β, f) with α ≥ 2 rational and β ∈ (0, 1].
fn params_strategy() -> impl Strategy<Value = (BigRational, BigRational, u32)> {
    (2i64..12, 1i64..3, 1i64..=8, 0i64..8, 1u32..=3).prop_map(|(an, ad, bn, bx, f)| {
        let alpha = rat(an.max(2 * ad), ad);
        let beta = rat(bn, bn + bx);
        (alpha, beta, f)
    })
}

fn sp(p: &(BigRational, BigRational, u32)) -> ScoreParams {
    ScoreParams::new(p.0.clone(), p.1.clone(), p.2).unwrap()
}

fn oracle(p: &(BigRational, BigRational, u32), coll: &[ColorSet], j: &ColorSet) -> BigRational {
    oracle_score(&p.0, &p.1, p.2, coll, j)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(TRIALS))]

    #[test]
    fn collection_score_matches_definition(p in params_strategy(), coll in coll_strategy(), j in set_strategy(3)) {
        let s = sp(&p);
        let lib = s.collection_score(coll.iter(), &j);
        prop_assert_eq!(&lib, &oracle(&p, &coll, &j));
        let single: BigRational = coll.iter().map(|c| s.path_score(c, &j)).sum();
        prop_assert_eq!(&lib, &single);
        for (op, want) in [("<", lib < half()), ("<=", lib <= half()), ("=", lib == half()), (">", lib > half()), (">=", lib >= half())] {
            prop_assert_eq!(compare(&lib, op, &half()), want);
        }
    }

    #[test]
    fn concatenation_bounds(p in params_strategy(), coll in coll_strategy(), c in 0..UNIVERSE, j in set_strategy(3)) {
        let s = sp(&p);
        check_concat(&s, &coll, c, &j).unwrap();
        let ext: Vec<ColorSet> = coll.iter().map(|x| x.with(c)).collect();
        prop_assert_eq!(&concat(&coll, c), &ext);
        prop_assert!(oracle(&p, &coll, &j) <= oracle(&p, &ext, &j.with(c)));
        prop_assert!(oracle(&p, &ext, &j) <= oracle(&p, &coll, &j) + oracle(&p, &coll, &j.without(c)));
    }

    #[test]
    fn score_transition_between_links(p in params_strategy(), coll in coll_strategy(), x in set_strategy(3), y in set_strategy(3)) {
        let s = sp(&p);
        check_score_transition(&s, &coll, &x, &y).unwrap();
        let link_y: Vec<ColorSet> = coll.iter().filter(|q| y.is_subset(q)).cloned().collect();
        let xy = x.union(&y);
        let link_xy: Vec<ColorSet> = coll.iter().filter(|q| xy.is_subset(q)).cloned().collect();
        prop_assert_eq!(link(&coll, &y).len(), link_y.len());
        let af = &p.0 * BigRational::from_integer(BigInt::from(p.2));
        let e = x.len() as i32 - y.len() as i32;
        let scale = num_traits::pow(if e >= 0 { af.clone() } else { af.recip() }, e.unsigned_abs() as usize);
        prop_assert_eq!(oracle(&p, &link_y, &x), oracle(&p, &link_xy, &y) * scale);
    }

    #[test]
    fn double_counting_over_links(p in params_strategy(), coll in coll_strategy(), slack in 0usize..2) {
        let s = sp(&p);
        let i = coll.iter().map(|c| c.len()).max().unwrap_or(0) + slack;
        check_double_counting(&s, &coll, i).unwrap();
        let empty = ColorSet::new();
        let universe: ColorSet = (0..UNIVERSE).collect();
        let mut sum = BigRational::from_integer(0.into());
        for j in universe.subsets() {
            let lj: Vec<ColorSet> = coll.iter().filter(|q| j.is_subset(q)).cloned().collect();
            sum += oracle(&p, &lj, &empty);
        }
        prop_assert!(oracle(&p, &coll, &empty) * BigRational::from_integer(BigInt::from(1u64 << i)) >= sum);
    }

    #[test]
    fn linkful_map_bound(
        alpha2 in 2u64..5,
        extra in 0u64..4,
        beta2 in prop::sample::select(vec![(1u64, 1u64), (3, 4), (2, 3)]),
        beta in prop::sample::select(vec![(1u64, 1u64), (1, 2), (1, 4)]),
        f in 1u32..=2,
        other_sets in prop::collection::vec(set_strategy(3), 1..10),
        picks in prop::collection::vec((any::<prop::sample::Index>(), set_strategy(2)), 1..10),
        i in set_strategy(3),
    ) {
        let p2 = Arc::new(ScoreParams::from_ints(alpha2, beta2.0, beta2.1, f).unwrap());
        let mut other = Park::new(p2);
        for s in &other_sets {
            other.insert(s.clone(), true).unwrap();
        }
        prop_assume!(!other.is_empty());
        let full: Vec<ColorSet> = other
            .items()
            .iter()
            .flat_map(|s| s.subsets())
            .filter(|j| other.is_full(j))
            .collect();
        prop_assume!(!full.is_empty());
        let p1 = Arc::new(ScoreParams::from_ints(alpha2 + extra, beta.0, beta.1, f).unwrap());
        let mut park = Park::new(p1);
        let mut map = Vec::new();
        for (idx, add) in &picks {
            let g = idx.get(&full).clone();
            if park.insert(g.union(add), true).unwrap() {
                map.push(g);
            }
        }
        let ell = other.items().iter().map(|s| s.len()).max().unwrap();
        let lf = Linkful { park: &park, other: &other, map: &map, ell };
        let t = linkful_bound(&lf, &i).unwrap();
        prop_assert!(t.is_subset(&i));
        // Independent recomputation of both sides.
        let a1 = BigRational::from_integer(BigInt::from(alpha2 + extra));
        let a2 = BigRational::from_integer(BigInt::from(alpha2));
        let sc_i = oracle_score(&a1, &rat(beta.0 as i64, beta.1 as i64), f, park.items(), &i);
        let scaled = &a1 / (BigRational::from_integer(BigInt::from(1u64 << (ell + i.len() + 1))) * &a2) * sc_i;
        let target = if scaled < half() { scaled } else { half() };
        let sc_t = oracle_score(&a2, &rat(beta2.0 as i64, beta2.1 as i64), f, other.items(), &t);
        prop_assert!(sc_t > target);
    }
}

#[test]
fn double_counting_rejects_long_members() {
    let s = ScoreParams::from_ints(2, 1, 1, 1).unwrap();
    let coll = vec![ColorSet::from_slice(&[0, 1, 2])];
    assert!(check_double_counting(&s, &coll, 2).is_err());
}
