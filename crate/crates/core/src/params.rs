//! Level parameters for the park-based algorithms and center sampling.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::ColorMode;
use crate::rng::stream;
use crate::score::{ratio, ScoreParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ParamMode {
    Paper,
    Practical,
}

#[derive(Clone, Debug)]
pub struct ParamConfig {
    pub mode: ParamMode,
    /// The base D. Paper mode requires 16.
    pub d: BigRational,
    /// The constant inside ρ = p / (c_ρ·k(ln n + k²)).
    pub c_rho: f64,
}

impl ParamConfig {
    pub fn paper() -> Self {
        ParamConfig {
            mode: ParamMode::Paper,
            d: BigRational::from_integer(BigInt::from(16)),
            c_rho: 1.0,
        }
    }

    /// Small D and a large ρ so that postponing and sampling happen on small graphs.
    pub fn practical() -> Self {
        ParamConfig {
            mode: ParamMode::Practical,
            d: ratio(5, 4),
            c_rho: 1.0 / 64.0,
        }
    }
}

/// Parse "16", "5/4" or "1.25" into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::InvalidParams(format!("cannot parse '{s}' as a rational"));
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let a: BigInt = a.trim().parse().map_err(|_| bad())?;
        let b: BigInt = b.trim().parse().map_err(|_| bad())?;
        if b.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(a, b));
    }
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    if frac.chars().any(|c| !c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int}{frac}");
    let num: BigInt = digits.parse().map_err(|_| bad())?;
    let den = num_traits::pow(BigInt::from(10), frac.len());
    Ok(BigRational::new(num, den))
}

/// The four score functions of one level.
#[derive(Clone, Debug)]
pub struct LevelParams {
    pub i: usize,
    /// gsc^i = (α_i, β_i)
    pub g: Arc<ScoreParams>,
    /// lsc^i = (2, β_i)
    pub l: Arc<ScoreParams>,
    /// ĝsc^i = (α̂_i, β̂_i·ρ)
    pub ghat: Arc<ScoreParams>,
    /// l̂sc^i = (2, β_i/D)
    pub lhat: Arc<ScoreParams>,
}

#[derive(Clone, Debug)]
pub struct Schedule {
    pub mode: ParamMode,
    pub color_mode: ColorMode,
    pub n: usize,
    pub k: usize,
    pub f: u32,
    pub d: BigRational,
    /// Center sampling probability.
    pub p: f64,
    pub rho: BigRational,
    /// ⌈1/ρ⌉, the sampler's set size.
    pub bucket_size: usize,
    pub levels: Vec<LevelParams>,
}

fn d_pow(d: &BigRational, e: i64) -> BigRational {
    if e >= 0 {
        num_traits::pow(d.clone(), e as usize)
    } else {
        num_traits::pow(d.recip(), (-e) as usize)
    }
}

impl Schedule {
    pub fn new(color_mode: ColorMode, n: usize, k: usize, f: u32, cfg: &ParamConfig) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidParams("k must be at least 2".into()));
        }
        if f == 0 {
            return Err(Error::InvalidParams("f must be at least 1".into()));
        }
        let d = cfg.d.clone();
        if cfg.mode == ParamMode::Paper && d != BigRational::from_integer(BigInt::from(16)) {
            return Err(Error::InvalidParams("paper mode fixes D = 16".into()));
        }
        if d <= BigRational::one() {
            return Err(Error::InvalidParams("D must exceed 1".into()));
        }
        if !(cfg.c_rho > 0.0 && cfg.c_rho.is_finite()) {
            return Err(Error::InvalidParams("rho constant must be positive".into()));
        }
        let nf = n.max(2) as f64;
        let p = match color_mode {
            ColorMode::Ecft => nf.powf(-1.0 / k as f64),
            ColorMode::Vcft => (nf / f as f64).max(1.0).powf(-1.0 / k as f64),
        };
        let kf = k as f64;
        let rho_real = p / (cfg.c_rho * kf * (nf.ln() + kf * kf));
        // β̂_0·ρ ≤ 1 caps ρ at D^5.
        let cap = d_pow(&d, 5);
        let rho = if rho_real <= 1.0 {
            ratio(1, (1.0 / rho_real).ceil() as i64)
        } else {
            let fl = BigRational::from_integer(BigInt::from(rho_real.floor() as i64));
            if fl > cap {
                cap
            } else {
                fl
            }
        };
        let bucket_size = rho.recip().ceil().to_integer().to_usize().unwrap_or(1).max(1);

        let two = BigRational::from_integer(BigInt::from(2));
        let eight = BigRational::from_integer(BigInt::from(8));
        let kk = k as i64;
        let mut levels = Vec::with_capacity(k);
        for i in 0..k {
            let ii = i as i64;
            let alpha = d_pow(&d, 10 * kk * (4 * kk - 2 * ii));
            let beta = d_pow(&d, -2 * ii);
            let alpha_hat = d_pow(&d, 10 * kk * (4 * kk - 2 * ii - 1));
            let beta_hat = d_pow(&d, -2 * ii - 5) * &rho;
            if alpha <= eight || alpha_hat <= eight {
                return Err(Error::InvalidParams(format!(
                    "alpha at level {i} must exceed 8; increase D"
                )));
            }
            levels.push(LevelParams {
                i,
                g: Arc::new(ScoreParams::new(alpha, beta.clone(), f)?),
                l: Arc::new(ScoreParams::new(two.clone(), beta.clone(), f)?),
                ghat: Arc::new(ScoreParams::new(alpha_hat, beta_hat, f)?),
                lhat: Arc::new(ScoreParams::new(two.clone(), &beta / &d, f)?),
            });
        }
        Ok(Schedule {
            mode: cfg.mode,
            color_mode,
            n,
            k,
            f,
            d,
            p,
            rho,
            bucket_size,
            levels,
        })
    }

    pub fn paper(&self) -> bool {
        self.mode == ParamMode::Paper
    }
}

/// Per-vertex center level: the largest i < k with v ∈ S_i. S_0 = V and each S_{i+1} keeps
/// members of S_i independently with probability p. Each vertex draws from its own stream.
pub fn sample_center_levels(n: usize, k: usize, p: f64, seed: u64) -> Vec<u8> {
    (0..n)
        .map(|v| {
            let mut rng = stream(seed, "centers", v as u64);
            let mut level = 0u8;
            while (level as usize) + 1 < k && rng.gen_bool(p.clamp(0.0, 1.0)) {
                level += 1;
            }
            level
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paper_parameters() {
        let s = Schedule::new(ColorMode::Ecft, 30, 2, 1, &ParamConfig::paper()).unwrap();
        let l0 = &s.levels[0];
        // α_0 = 16^{160}, β_0 = 1, β̂_0 = 16^{-5}ρ
        assert_eq!(
            l0.g.alpha(),
            &BigRational::from_integer(num_traits::pow(BigInt::from(16), 160))
        );
        assert_eq!(l0.g.beta(), &ratio(1, 1));
        assert_eq!(l0.ghat.beta(), &(ratio(1, 1 << 20) * &s.rho));
        assert_eq!(s.levels[1].lhat.beta(), &ratio(1, 16 * 256));
        assert!(s.rho <= ratio(1, 1));
        assert_eq!(BigRational::from_integer(BigInt::from(s.bucket_size as i64)), s.rho.recip());
    }

    #[test]
    fn practical_rho_capped() {
        let cfg = ParamConfig {
            c_rho: 1e-9,
            ..ParamConfig::practical()
        };
        let s = Schedule::new(ColorMode::Ecft, 20, 2, 1, &cfg).unwrap();
        assert_eq!(s.rho, d_pow(&ratio(5, 4), 5));
        assert_eq!(s.bucket_size, 1);
        assert!(s.levels[0].ghat.beta() <= &ratio(1, 1));
    }

    #[test]
    fn rejects_bad_configs() {
        let mut cfg = ParamConfig::paper();
        cfg.d = ratio(2, 1);
        assert!(Schedule::new(ColorMode::Ecft, 10, 2, 1, &cfg).is_err());
        assert!(Schedule::new(ColorMode::Ecft, 10, 1, 1, &ParamConfig::paper()).is_err());
        let mut cfg = ParamConfig::practical();
        cfg.d = ratio(1, 1);
        assert!(Schedule::new(ColorMode::Ecft, 10, 2, 1, &cfg).is_err());
    }

    #[test]
    fn parse_rationals() {
        assert_eq!(parse_rational("5/4").unwrap(), ratio(5, 4));
        assert_eq!(parse_rational("1.25").unwrap(), ratio(5, 4));
        assert_eq!(parse_rational("16").unwrap(), ratio(16, 1));
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn center_levels_nested_and_reproducible() {
        let a = sample_center_levels(50, 3, 0.5, 7);
        assert_eq!(a, sample_center_levels(50, 3, 0.5, 7));
        assert!(a.iter().all(|&l| l < 3));
        assert!(a.iter().any(|&l| l > 0));
    }
}
