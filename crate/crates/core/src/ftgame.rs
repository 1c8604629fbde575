//! The online (f,k)-FT game. Bob presents sets of at most k colors; Alice keeps or discards
//! each one irrevocably, and her kept sets must stay a fault-tolerant certificate of everything
//! presented so far.

use std::fmt::Write as _;
use std::sync::Arc;

use serde::Serialize;

use crate::colorset::{binomial, count_up_to, subsets_up_to, Color, ColorSet};
use crate::error::{ensure_lemma, Error, Result};
use crate::park::Park;
use crate::score::ScoreParams;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    /// Keep exactly when some blame set of at most f colors spares the new set and hits all kept ones.
    Optimal,
    /// Keep unless some subset of the new set already has a full link (α = 2, β = 1/2).
    Park,
}

/// Default cap on blame-set candidates per optimal step and on certificate checks.
pub const GAME_BUDGET: u128 = 5_000_000;

/// All k-subsets of {0, …, f+k−1} in lexicographic order.
pub fn bob_forcing(f: usize, k: usize) -> (u32, Vec<ColorSet>) {
    let universe = (f + k) as u32;
    let colors: Vec<Color> = (0..universe).collect();
    let sets = subsets_up_to(&colors, k)
        .into_iter()
        .filter(|s| s.len() == k)
        .collect();
    (universe, sets)
}

/// Parse a set stream: an optional "universe N" line, then one set per line as "{0,3}" or "0 3".
/// Without the header the universe is one past the largest color seen.
pub fn parse_stream(text: &str) -> Result<(u32, Vec<ColorSet>)> {
    let mut universe = None;
    let mut sets = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let perr = |msg: String| Error::Parse { line: i + 1, msg };
        if let Some(rest) = line.strip_prefix("universe") {
            let u: u32 = rest.trim().parse().map_err(|_| perr(format!("bad universe '{rest}'")))?;
            universe = Some(u);
            continue;
        }
        let body = line.trim_start_matches('{').trim_end_matches('}');
        let mut set = ColorSet::new();
        for tok in body.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()) {
            let c: Color = tok.parse().map_err(|_| perr(format!("bad color '{tok}'")))?;
            set.insert(c);
        }
        sets.push(set);
    }
    let seen = sets.iter().flat_map(|s| s.iter()).max().map_or(0, |c| c + 1);
    let universe = universe.unwrap_or(seen);
    if seen > universe {
        return Err(Error::Parse {
            line: 0,
            msg: format!("color {} outside universe {universe}", seen - 1),
        });
    }
    Ok((universe, sets))
}

#[derive(Clone, Debug, Serialize)]
pub struct GameSummary {
    pub strategy: Strategy,
    pub universe: u32,
    pub f: usize,
    pub k: usize,
    pub presented: usize,
    pub kept: usize,
    /// C(f+k, k)
    pub optimal_bound: u128,
    /// 2(2f)^k
    pub park_bound: u128,
    pub max_link_updates: usize,
    pub certificate: Option<bool>,
}

pub struct Game {
    universe: u32,
    f: usize,
    k: usize,
    strategy: Strategy,
    budget: u128,
    all: Vec<ColorSet>,
    kept: Vec<ColorSet>,
    decisions: Vec<bool>,
    park: Park<ColorSet>,
    max_link_updates: usize,
}

impl Game {
    pub fn new(universe: u32, f: usize, k: usize, strategy: Strategy) -> Result<Self> {
        let fu = u32::try_from(f.max(1)).map_err(|_| Error::InvalidParams("f too large".into()))?;
        let params = ScoreParams::from_ints(2, 1, 2, fu)?;
        Ok(Game {
            universe,
            f,
            k,
            strategy,
            budget: GAME_BUDGET,
            all: Vec::new(),
            kept: Vec::new(),
            decisions: Vec::new(),
            park: Park::new(Arc::new(params)),
            max_link_updates: 0,
        })
    }

    pub fn with_budget(mut self, budget: u128) -> Self {
        self.budget = budget;
        self
    }

    pub fn kept(&self) -> &[ColorSet] {
        &self.kept
    }

    pub fn all(&self) -> &[ColorSet] {
        &self.all
    }

    pub fn decisions(&self) -> &[bool] {
        &self.decisions
    }

    /// Present one set; returns whether Alice keeps it.
    pub fn step(&mut self, p: ColorSet) -> Result<bool> {
        if p.len() > self.k {
            return Err(Error::Precondition(format!("set {p} has more than {} colors", self.k)));
        }
        if p.iter().any(|c| c >= self.universe) {
            return Err(Error::Precondition(format!("set {p} leaves the universe")));
        }
        let keep = match self.strategy {
            Strategy::Optimal => self.blame_set(&p)?.is_some(),
            Strategy::Park => self.park.find_full_subset(&p).is_none(),
        };
        if keep {
            if self.strategy == Strategy::Park {
                let updates = 1usize << p.len();
                ensure_lemma!(updates <= 1 << self.k, "{updates} link updates for one set");
                self.max_link_updates = self.max_link_updates.max(updates);
                self.park.insert(p.clone(), false)?;
                let bound = park_bound(self.f, self.k);
                ensure_lemma!(
                    (self.park.len() as u128) <= bound,
                    "park certificate has {} sets, above 2(2f)^k = {bound}",
                    self.park.len()
                );
            }
            self.kept.push(p.clone());
        }
        self.all.push(p);
        self.decisions.push(keep);
        Ok(keep)
    }

    /// F ⊆ C − P with |F| ≤ f meeting every kept set, if one exists.
    fn blame_set(&self, p: &ColorSet) -> Result<Option<ColorSet>> {
        let pool: Vec<Color> = (0..self.universe).filter(|&c| !p.contains(c)).collect();
        let needed = count_up_to(pool.len() as u64, self.f as u64);
        if needed > self.budget {
            return Err(Error::BudgetExceeded {
                needed,
                budget: self.budget,
            });
        }
        Ok(subsets_up_to(&pool, self.f)
            .into_iter()
            .find(|fs| self.kept.iter().all(|q| q.intersects(fs))))
    }

    pub fn summary(&self, certificate: Option<bool>) -> GameSummary {
        GameSummary {
            strategy: self.strategy,
            universe: self.universe,
            f: self.f,
            k: self.k,
            presented: self.all.len(),
            kept: self.kept.len(),
            optimal_bound: binomial((self.f + self.k) as u64, self.k as u64),
            park_bound: park_bound(self.f, self.k),
            max_link_updates: self.max_link_updates,
            certificate,
        }
    }

    /// "<keep|discard> <set>" per presented set.
    pub fn trace(&self) -> String {
        let mut s = String::new();
        for (p, &k) in self.all.iter().zip(&self.decisions) {
            let _ = writeln!(s, "{} {}", if k { "keep" } else { "discard" }, p);
        }
        s
    }
}

/// 2(2f)^k, the ∅-link capacity of the (2, 1/2) park.
pub fn park_bound(f: usize, k: usize) -> u128 {
    2 * (2 * f.max(1) as u128).pow(k as u32)
}

/// Play a whole stream.
pub fn play(universe: u32, f: usize, k: usize, strategy: Strategy, sets: &[ColorSet]) -> Result<Game> {
    let mut g = Game::new(universe, f, k, strategy)?;
    for p in sets {
        g.step(p.clone())?;
    }
    Ok(g)
}

/// Every F of at most f colors that spares some presented set also spares some kept set.
pub fn check_certificate(universe: u32, all: &[ColorSet], kept: &[ColorSet], f: usize, budget: u128) -> Result<bool> {
    let needed = count_up_to(universe as u64, f as u64);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let colors: Vec<Color> = (0..universe).collect();
    Ok(subsets_up_to(&colors, f).iter().all(|fs| {
        !all.iter().any(|p| !p.intersects(fs)) || kept.iter().any(|p| !p.intersects(fs))
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(cs: &[Color]) -> ColorSet {
        ColorSet::from_slice(cs)
    }

    #[test]
    fn forcing_streams() {
        assert_eq!(bob_forcing(1, 1), (2, vec![set(&[0]), set(&[1])]));
        assert_eq!(bob_forcing(2, 2).1.len(), 6);
    }

    #[test]
    fn park_discards_third_copy() {
        let mut g = Game::new(5, 1, 2, Strategy::Park).unwrap();
        assert!(g.step(set(&[0, 1])).unwrap());
        assert!(g.step(set(&[0, 1])).unwrap());
        assert!(!g.step(set(&[0, 1])).unwrap());
    }

    #[test]
    fn first_set_is_kept() {
        for s in [Strategy::Optimal, Strategy::Park] {
            let mut g = Game::new(4, 1, 2, s).unwrap();
            assert!(g.step(set(&[1, 2])).unwrap());
        }
    }

    #[test]
    fn certificate_edge_cases() {
        let all = vec![set(&[0]), set(&[1])];
        assert!(check_certificate(3, &all, &all, 1, GAME_BUDGET).unwrap());
        assert!(!check_certificate(3, &all, &[], 1, GAME_BUDGET).unwrap());
    }

    #[test]
    fn stream_round_trip() {
        let (u, sets) = parse_stream("universe 6\n{0,2}\n1 3 # comment\n{}\n").unwrap();
        assert_eq!(u, 6);
        assert_eq!(sets, vec![set(&[0, 2]), set(&[1, 3]), set(&[])]);
        assert!(parse_stream("universe 2\n5\n").is_err());
    }

    #[test]
    fn trace_lines() {
        let g = play(3, 1, 1, Strategy::Optimal, &[set(&[0]), set(&[0])]).unwrap();
        assert_eq!(g.trace(), "keep {0}\ndiscard {0}\n");
    }
}
