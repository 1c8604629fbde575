//! Exact (α, β) score functions over color sets.
//!
//! A path with color set c(P) scores β(αf)^{−|c(P)−J|} on J when J ⊆ c(P), and 0 otherwise.
//! Collections score linearly. Every value here is an exact rational.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::colorset::ColorSet;
use crate::error::{Error, Result};

pub type ScoreValue = BigRational;

const EAGER_POWERS: usize = 8;

#[derive(Clone)]
pub struct ScoreParams {
    alpha: BigRational,
    beta: BigRational,
    f: u32,
    // αf = af_num / af_den in lowest terms
    af_num: BigUint,
    af_den: BigUint,
    beta_num: BigUint,
    beta_den: BigUint,
    pow_num: Vec<BigUint>,
    pow_den: Vec<BigUint>,
}

impl fmt::Debug for ScoreParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "ScoreParams(alpha~2^{:.1}, beta={}, f={})",
            log2_ratio(&self.alpha),
            short_ratio(&self.beta),
            self.f
        )
    }
}

fn to_biguint(x: &BigInt) -> BigUint {
    x.to_biguint().expect("nonnegative")
}

pub fn log2_ratio(x: &BigRational) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let n = x.numer().abs();
    let d = x.denom();
    let shift = |b: &BigInt| -> (f64, i64) {
        let bits = b.bits() as i64;
        let s = (bits - 60).max(0);
        let top: BigInt = b >> s as usize;
        (top.to_string().parse::<f64>().unwrap_or(1.0), s)
    };
    let (nf, ns) = shift(&n);
    let (df, ds) = shift(d);
    nf.log2() - df.log2() + (ns - ds) as f64
}

fn short_ratio(x: &BigRational) -> String {
    if x.numer().bits() <= 64 && x.denom().bits() <= 64 {
        x.to_string()
    } else {
        format!("~2^{:.1}", log2_ratio(x))
    }
}

pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Exact comparison helper, for thresholds like 1/2 and 1/8.
pub fn compare(a: &ScoreValue, op: &str, b: &ScoreValue) -> bool {
    let o = a.cmp(b);
    match op {
        "<" => o == Ordering::Less,
        "<=" => o != Ordering::Greater,
        "=" | "==" => o == Ordering::Equal,
        ">" => o == Ordering::Greater,
        ">=" => o != Ordering::Less,
        _ => panic!("unknown comparison operator {op}"),
    }
}

impl ScoreParams {
    pub fn new(alpha: BigRational, beta: BigRational, f: u32) -> Result<Self> {
        if alpha < BigRational::from_integer(BigInt::from(2)) {
            return Err(Error::InvalidParams(format!(
                "alpha must be at least 2, got {}",
                short_ratio(&alpha)
            )));
        }
        if !beta.is_positive() || beta > BigRational::one() {
            return Err(Error::InvalidParams(format!(
                "beta must lie in (0,1], got {}",
                short_ratio(&beta)
            )));
        }
        if f == 0 {
            return Err(Error::InvalidParams("f must be at least 1".into()));
        }
        let af = &alpha * BigRational::from_integer(BigInt::from(f));
        let af_num = to_biguint(af.numer());
        let af_den = to_biguint(af.denom());
        let mut pow_num = vec![BigUint::one()];
        let mut pow_den = vec![BigUint::one()];
        for t in 1..=EAGER_POWERS {
            pow_num.push(&pow_num[t - 1] * &af_num);
            pow_den.push(&pow_den[t - 1] * &af_den);
        }
        Ok(ScoreParams {
            beta_num: to_biguint(beta.numer()),
            beta_den: to_biguint(beta.denom()),
            alpha,
            beta,
            f,
            af_num,
            af_den,
            pow_num,
            pow_den,
        })
    }

    pub fn from_ints(alpha: u64, beta_num: u64, beta_den: u64, f: u32) -> Result<Self> {
        Self::new(
            BigRational::from_integer(BigInt::from(alpha)),
            BigRational::new(BigInt::from(beta_num), BigInt::from(beta_den)),
            f,
        )
    }

    pub fn alpha(&self) -> &BigRational {
        &self.alpha
    }

    pub fn beta(&self) -> &BigRational {
        &self.beta
    }

    pub fn f(&self) -> u32 {
        self.f
    }

    fn pn(&self, t: usize) -> std::borrow::Cow<'_, BigUint> {
        match self.pow_num.get(t) {
            Some(x) => std::borrow::Cow::Borrowed(x),
            None => std::borrow::Cow::Owned(num_traits::pow(self.af_num.clone(), t)),
        }
    }

    fn pd(&self, t: usize) -> std::borrow::Cow<'_, BigUint> {
        match self.pow_den.get(t) {
            Some(x) => std::borrow::Cow::Borrowed(x),
            None => std::borrow::Cow::Owned(num_traits::pow(self.af_den.clone(), t)),
        }
    }

    /// β(αf)^{−t}: the score of one path with residual t.
    pub fn unit(&self, t: usize) -> ScoreValue {
        BigRational::new(
            BigInt::from(&self.beta_num * self.pd(t).as_ref()),
            BigInt::from(&self.beta_den * self.pn(t).as_ref()),
        )
    }

    /// 1/α, the threshold of the fault-tolerance lemma.
    pub fn inv_alpha(&self) -> ScoreValue {
        self.alpha.recip()
    }

    pub fn path_score(&self, colors: &ColorSet, j: &ColorSet) -> ScoreValue {
        if !j.is_subset(colors) {
            return BigRational::zero();
        }
        self.unit(colors.len() - j.len())
    }

    pub fn collection_score<'a, I>(&self, sets: I, j: &ColorSet) -> ScoreValue
    where
        I: IntoIterator<Item = &'a ColorSet>,
    {
        self.score_of_counts(&residual_counts(sets, j))
    }

    /// Exact value of Σ_t counts[t]·β(αf)^{−t}.
    pub fn score_of_counts(&self, counts: &[u64]) -> ScoreValue {
        match self.scaled(counts) {
            None => BigRational::zero(),
            Some((num, top)) => BigRational::new(
                BigInt::from(&self.beta_num * num),
                BigInt::from(&self.beta_den * self.pn(top).as_ref()),
            ),
        }
    }

    // Σ_t c_t · den^t · num^{T−t}, with T the largest nonzero index.
    fn scaled(&self, counts: &[u64]) -> Option<(BigUint, usize)> {
        let top = counts.iter().rposition(|&c| c != 0)?;
        let mut acc = BigUint::zero();
        for (t, &c) in counts[..=top].iter().enumerate() {
            if c != 0 {
                acc += BigUint::from(c) * self.pd(t).as_ref() * self.pn(top - t).as_ref();
            }
        }
        Some((acc, top))
    }

    /// Integer weights proportional to the per-class masses counts[t]·β(αf)^{−t}.
    pub fn class_weights(&self, counts: &[u64]) -> Vec<BigUint> {
        let Some(top) = counts.iter().rposition(|&c| c != 0) else {
            return vec![BigUint::zero(); counts.len()];
        };
        counts
            .iter()
            .enumerate()
            .map(|(t, &c)| {
                if c == 0 || t > top {
                    BigUint::zero()
                } else {
                    BigUint::from(c) * self.pd(t).as_ref() * self.pn(top - t).as_ref()
                }
            })
            .collect()
    }

    /// Compare Σ_t counts[t]·β(αf)^{−t} with a nonnegative rational threshold.
    pub fn cmp_counts(&self, counts: &[u64], thr: &BigRational) -> Ordering {
        let Some((num, top)) = self.scaled(counts) else {
            return if thr.is_zero() {
                Ordering::Equal
            } else {
                Ordering::Less
            };
        };
        let lhs = &self.beta_num * num * to_biguint(thr.denom());
        let rhs = to_biguint(thr.numer()) * &self.beta_den * self.pn(top).as_ref();
        lhs.cmp(&rhs)
    }
}

/// Per-residual counts of a collection relative to J: counts[t] = #{P : J ⊆ c(P), |c(P)−J| = t}.
pub fn residual_counts<'a, I>(sets: I, j: &ColorSet) -> Vec<u64>
where
    I: IntoIterator<Item = &'a ColorSet>,
{
    let mut counts = Vec::new();
    for c in sets {
        if j.is_subset(c) {
            let t = c.len() - j.len();
            if counts.len() <= t {
                counts.resize(t + 1, 0);
            }
            counts[t] += 1;
        }
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cs(x: &[u32]) -> ColorSet {
        ColorSet::from_slice(x)
    }

    #[test]
    fn path_score_examples() {
        let p = ScoreParams::from_ints(2, 1, 2, 3).unwrap();
        assert_eq!(p.path_score(&cs(&[0, 1]), &cs(&[])), ratio(1, 72));
        assert_eq!(p.path_score(&cs(&[0, 1]), &cs(&[0])), ratio(1, 12));
        assert_eq!(p.path_score(&cs(&[0, 1]), &cs(&[0, 2])), ratio(0, 1));
    }

    #[test]
    fn comparisons() {
        assert!(!compare(&ratio(1, 2), ">", &ratio(1, 2)));
        assert!(compare(&(ratio(1, 72) + ratio(71, 72)), "=", &ratio(1, 1)));
        let p = ScoreParams::from_ints(2, 1, 1, 1).unwrap();
        let s = p.score_of_counts(&[0, 3]);
        assert!(compare(&s, "=", &ratio(3, 2)));
        assert_eq!(p.cmp_counts(&[0, 3], &ratio(3, 2)), Ordering::Equal);
        assert_eq!(p.cmp_counts(&[0, 3], &ratio(1, 2)), Ordering::Greater);
        assert_eq!(p.cmp_counts(&[], &ratio(1, 2)), Ordering::Less);
    }

    #[test]
    fn invalid_params_rejected() {
        assert!(ScoreParams::from_ints(1, 1, 2, 1).is_err());
        assert!(ScoreParams::from_ints(2, 3, 2, 1).is_err());
        assert!(ScoreParams::from_ints(2, 1, 2, 0).is_err());
    }

    #[test]
    fn huge_alpha_exact() {
        let alpha = BigRational::from_integer(num_traits::pow(BigInt::from(16), 1440));
        let p = ScoreParams::new(alpha, ratio(1, 1), 2).unwrap();
        let counts = [1u64, 0, 0, 5];
        let direct = p.unit(0) + p.unit(3) * BigRational::from_integer(BigInt::from(5));
        assert_eq!(p.score_of_counts(&counts), direct);
        assert_eq!(p.cmp_counts(&counts, &ratio(1, 1)), Ordering::Greater);
        assert!(p.unit(12) > BigRational::zero());
    }

    #[test]
    fn rational_alpha() {
        let alpha = BigRational::new(BigInt::from(25), BigInt::from(8));
        let p = ScoreParams::new(alpha, ratio(1, 2), 2).unwrap();
        // αf = 25/4, unit(2) = (1/2)(4/25)^2
        assert_eq!(p.unit(2), ratio(8, 625));
        assert_eq!(p.score_of_counts(&[0, 0, 2]), ratio(16, 625));
    }
}
