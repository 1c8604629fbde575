use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

pub type Color = u32;

/// Sorted, duplicate-free set of colors. Small sets stay inline.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ColorSet(SmallVec<[Color; 6]>);

impl ColorSet {
    pub fn new() -> Self {
        ColorSet(SmallVec::new())
    }

    pub fn singleton(c: Color) -> Self {
        let mut s = SmallVec::new();
        s.push(c);
        ColorSet(s)
    }

    pub fn from_slice(cs: &[Color]) -> Self {
        cs.iter().copied().collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Color] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = Color> + '_ {
        self.0.iter().copied()
    }

    pub fn contains(&self, c: Color) -> bool {
        self.0.binary_search(&c).is_ok()
    }

    pub fn insert(&mut self, c: Color) -> bool {
        match self.0.binary_search(&c) {
            Ok(_) => false,
            Err(pos) => {
                self.0.insert(pos, c);
                true
            }
        }
    }

    pub fn with(&self, c: Color) -> Self {
        let mut s = self.clone();
        s.insert(c);
        s
    }

    pub fn without(&self, c: Color) -> Self {
        ColorSet(self.0.iter().copied().filter(|&x| x != c).collect())
    }

    pub fn union(&self, other: &ColorSet) -> Self {
        let mut out = SmallVec::with_capacity(self.len() + other.len());
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            if a[i] < b[j] {
                out.push(a[i]);
                i += 1;
            } else if a[i] > b[j] {
                out.push(b[j]);
                j += 1;
            } else {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        ColorSet(out)
    }

    pub fn is_subset(&self, other: &ColorSet) -> bool {
        self.0.iter().all(|&c| other.contains(c))
    }

    pub fn intersects(&self, other: &ColorSet) -> bool {
        self.0.iter().any(|&c| other.contains(c))
    }

    /// |self \ other|
    pub fn residual(&self, other: &ColorSet) -> usize {
        self.0.iter().filter(|&&c| !other.contains(c)).count()
    }

    /// All subsets ordered by cardinality, then lexicographically.
    pub fn subsets(&self) -> Vec<ColorSet> {
        let n = self.len();
        assert!(n < 32, "color set too large for subset enumeration");
        let mut out = Vec::with_capacity(1 << n);
        for size in 0..=n {
            let mut idx: Vec<usize> = (0..size).collect();
            loop {
                out.push(ColorSet(idx.iter().map(|&i| self.0[i]).collect()));
                // next combination in lexicographic order
                let mut p = size;
                while p > 0 && idx[p - 1] == n - size + p - 1 {
                    p -= 1;
                }
                if p == 0 {
                    break;
                }
                idx[p - 1] += 1;
                for q in p..size {
                    idx[q] = idx[q - 1] + 1;
                }
            }
        }
        out
    }
}

impl FromIterator<Color> for ColorSet {
    fn from_iter<I: IntoIterator<Item = Color>>(iter: I) -> Self {
        let mut v: SmallVec<[Color; 6]> = iter.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        ColorSet(v)
    }
}

impl fmt::Debug for ColorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ColorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "}}")
    }
}

/// All subsets of `universe` with at most `max_size` elements, by size then lexicographically.
pub fn subsets_up_to(universe: &[Color], max_size: usize) -> Vec<ColorSet> {
    let set = ColorSet::from_slice(universe);
    let n = set.len();
    let mut out = Vec::new();
    for size in 0..=max_size.min(n) {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            out.push(ColorSet(idx.iter().map(|&i| set.0[i]).collect()));
            let mut p = size;
            while p > 0 && idx[p - 1] == n - size + p - 1 {
                p -= 1;
            }
            if p == 0 {
                break;
            }
            idx[p - 1] += 1;
            for q in p..size {
                idx[q] = idx[q - 1] + 1;
            }
        }
    }
    out
}

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r
}

/// Number of subsets of an `n`-set with at most `f` elements.
pub fn count_up_to(n: u64, f: u64) -> u128 {
    (0..=f.min(n)).map(|j| binomial(n, j)).sum()
}
