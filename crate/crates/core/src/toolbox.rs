//! Checkers for the score algebra the correctness arguments lean on: edge concatenation,
//! score transition between links, double counting over links, and the linkful-map bound.
//!
//! Collections are given by their color sets only; each checker returns a LemmaViolation
//! naming the failing inequality.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::colorset::{Color, ColorSet};
use crate::error::{ensure_lemma, Error, Result};
use crate::park::Park;
use crate::score::{ScoreParams, ScoreValue};

/// The link P[Y]: members whose colors contain Y.
pub fn link<'a>(coll: &'a [ColorSet], y: &ColorSet) -> Vec<&'a ColorSet> {
    coll.iter().filter(|p| y.is_subset(p)).collect()
}

fn score(params: &ScoreParams, coll: &[&ColorSet], j: &ColorSet) -> ScoreValue {
    params.collection_score(coll.iter().copied(), j)
}

/// e ∘ P: prepend an edge (or, with vertex colors, the new endpoint) of color c.
pub fn concat(coll: &[ColorSet], c: Color) -> Vec<ColorSet> {
    coll.iter().map(|p| p.with(c)).collect()
}

/// sc_J(P) ≤ sc_{J∪{c}}(c∘P) and sc_J(c∘P) ≤ sc_J(P) + sc_{J−{c}}(P).
///
/// With edge colors c is c(e); with vertex colors c is the color of the vertex the edge adds.
pub fn check_concat(params: &ScoreParams, coll: &[ColorSet], c: Color, j: &ColorSet) -> Result<()> {
    let all: Vec<&ColorSet> = coll.iter().collect();
    let ext = concat(coll, c);
    let ext_ref: Vec<&ColorSet> = ext.iter().collect();
    let before = score(params, &all, j);
    let after_plus = score(params, &ext_ref, &j.with(c));
    ensure_lemma!(before <= after_plus, "concatenation lowered the score of link {j} beyond {{c}}");
    let after = score(params, &ext_ref, j);
    let split = before + score(params, &all, &j.without(c));
    ensure_lemma!(after <= split, "concatenation raised the score of link {j} above the split bound");
    Ok(())
}

fn af_pow(params: &ScoreParams, e: i64) -> BigRational {
    let af = params.alpha() * BigRational::from_integer(BigInt::from(params.f()));
    if e >= 0 {
        num_traits::pow(af, e as usize)
    } else {
        num_traits::pow(af.recip(), (-e) as usize)
    }
}

/// sc_X(P[Y]) = sc_Y(P[X∪Y])·(αf)^{|X|−|Y|}.
pub fn check_score_transition(params: &ScoreParams, coll: &[ColorSet], x: &ColorSet, y: &ColorSet) -> Result<()> {
    let lhs = score(params, &link(coll, y), x);
    let rhs = score(params, &link(coll, &x.union(y)), y) * af_pow(params, x.len() as i64 - y.len() as i64);
    ensure_lemma!(lhs == rhs, "score transition fails for X={x}, Y={y}");
    Ok(())
}

/// sc(P) ≥ 2^{−i} Σ_J sc(P[J]) when every member has at most i colors.
pub fn check_double_counting(params: &ScoreParams, coll: &[ColorSet], i: usize) -> Result<()> {
    if let Some(p) = coll.iter().find(|p| p.len() > i) {
        return Err(Error::Precondition(format!("member {p} has more than {i} colors")));
    }
    let empty = ColorSet::new();
    let all: Vec<&ColorSet> = coll.iter().collect();
    let total = score(params, &all, &empty);
    let universe: ColorSet = coll.iter().flat_map(|p| p.iter()).collect();
    let mut sum = BigRational::zero();
    // Links over J outside the union are empty.
    for j in universe.subsets() {
        sum += score(params, &link(coll, &j), &empty);
    }
    let lhs = total * BigRational::from_integer(BigInt::from(1u64) << i);
    ensure_lemma!(lhs >= sum, "double counting fails with i={i}");
    Ok(())
}

/// The two parks of a linkful map and the map itself (`map[x]` ⊆ colors of `park.items()[x]`).
pub struct Linkful<'a> {
    pub park: &'a Park<ColorSet>,
    pub other: &'a Park<ColorSet>,
    pub map: &'a [ColorSet],
    /// Every member of `other` has at most this many colors.
    pub ell: usize,
}

/// Find T ⊆ I with sc'_T(P') > min{1/2, α/(2^{ℓ+|I|+1}α')·sc_I(P)}; an error if none exists.
pub fn linkful_bound(lf: &Linkful<'_>, i: &ColorSet) -> Result<ColorSet> {
    let (sc, sc2) = (lf.park.params(), lf.other.params());
    if sc.alpha() < sc2.alpha() || sc.f() != sc2.f() {
        return Err(Error::Precondition("linkful bound needs α ≥ α' and a common f".into()));
    }
    if lf.map.len() != lf.park.len() {
        return Err(Error::Precondition("map must cover every member".into()));
    }
    for (p, g) in lf.park.items().iter().zip(lf.map) {
        if !g.is_subset(p) || !lf.other.is_full(g) {
            return Err(Error::Precondition(format!("map sends {p} to {g}, not a full subset")));
        }
    }
    if let Some(p) = lf.other.items().iter().find(|p| p.len() > lf.ell) {
        return Err(Error::Precondition(format!("member {p} has more than ℓ colors")));
    }
    let pow2 = BigRational::from_integer(BigInt::from(1u64) << (lf.ell + i.len() + 1));
    let scaled = sc.alpha() / (pow2 * sc2.alpha()) * lf.park.link_score(i);
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let target = if scaled < half { scaled } else { half };
    let t = i.subsets().into_iter().find(|t| lf.other.link_score(t) > target);
    t.ok_or_else(|| Error::LemmaViolation(format!("no T ⊆ {i} clears the linkful bound")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    fn s(cs: &[Color]) -> ColorSet {
        ColorSet::from_slice(cs)
    }

    #[test]
    fn concat_on_a_small_collection() {
        let p = ScoreParams::from_ints(2, 1, 2, 3).unwrap();
        let coll = vec![s(&[0, 1]), s(&[1]), s(&[2])];
        for j in [s(&[]), s(&[1]), s(&[4]), s(&[1, 4])] {
            check_concat(&p, &coll, 4, &j).unwrap();
            check_concat(&p, &coll, 1, &j).unwrap();
        }
    }

    #[test]
    fn transition_and_double_counting() {
        let p = ScoreParams::from_ints(3, 1, 1, 2).unwrap();
        let coll = vec![s(&[0, 1]), s(&[1, 2]), s(&[0])];
        check_score_transition(&p, &coll, &s(&[0]), &s(&[1])).unwrap();
        check_score_transition(&p, &coll, &s(&[]), &s(&[1, 2])).unwrap();
        check_double_counting(&p, &coll, 2).unwrap();
        assert!(check_double_counting(&p, &coll, 1).is_err());
    }

    #[test]
    fn linkful_on_a_saturated_link() {
        let p2 = Arc::new(ScoreParams::from_ints(2, 1, 2, 1).unwrap());
        let mut other = Park::new(p2.clone());
        other.insert(s(&[0]), false).unwrap();
        other.insert(s(&[0]), false).unwrap();
        assert!(other.is_full(&s(&[0])));
        let mut park = Park::new(Arc::new(ScoreParams::from_ints(4, 1, 2, 1).unwrap()));
        park.insert(s(&[0, 1]), false).unwrap();
        let map = vec![s(&[0])];
        let lf = Linkful {
            park: &park,
            other: &other,
            map: &map,
            ell: 1,
        };
        // sc'_∅ = 1/2 already clears min{1/2, 4/(2^4·2)·1/2} = 1/16
        assert_eq!(linkful_bound(&lf, &s(&[0, 1])).unwrap(), s(&[]));
    }
}
