//! Random binary profiles where every approval edge appears independently,
//! the exact probability that two seats of the identity cycle block, and
//! the local-lemma lower bound on the expected number of stable cycle
//! arrangements.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact;
use crate::profile::{PreferenceProfile, Topology};

/// Largest `n` for which [`estimate_expected_stable`] counts exactly.
pub const MAX_ESTIMATE_AGENTS: usize = 9;

/// A probability `num / den` with `num <= den`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Probability(Ratio<u64>);

impl Probability {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 || num > den {
            return Err(Error::InvalidParameter(format!(
                "{num}/{den} is not a probability"
            )));
        }
        Ok(Self(Ratio::new(num, den)))
    }

    pub const ZERO: Probability = Probability(Ratio::new_raw(0, 1));
    pub const ONE: Probability = Probability(Ratio::new_raw(1, 1));

    /// The largest multiple of `1 / den` not above `x`.
    pub fn floor_of(x: f64, den: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::InvalidParameter(format!("{x} is not a probability")));
        }
        Self::new((x * den as f64).floor() as u64, den)
    }

    pub fn numer(&self) -> u64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> u64 {
        *self.0.denom()
    }

    pub fn to_f64(&self) -> f64 {
        self.numer() as f64 / self.denom() as f64
    }

    pub fn to_big(&self) -> BigRational {
        BigRational::new(BigInt::from(self.numer()), BigInt::from(self.denom()))
    }

    /// One Bernoulli draw.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> bool {
        rng.gen_range(0..self.denom()) < self.numer()
    }
}

impl fmt::Display for Probability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl FromStr for Probability {
    type Err = Error;

    /// Accepts `a/b` or a decimal such as `0.25`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("`{s}` is not a probability"));
        if let Some((a, b)) = s.split_once('/') {
            return Self::new(
                a.trim().parse().map_err(|_| bad())?,
                b.trim().parse().map_err(|_| bad())?,
            );
        }
        let s = s.trim();
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        if frac.len() > 18 || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let den = 10u64.pow(frac.len() as u32);
        let int: u64 = if int.is_empty() {
            0
        } else {
            int.parse().map_err(|_| bad())?
        };
        let frac: u64 = if frac.is_empty() {
            0
        } else {
            frac.parse().map_err(|_| bad())?
        };
        Self::new(int * den + frac, den)
    }
}

impl Serialize for Probability {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GnpSpec {
    pub n: usize,
    pub p: Probability,
    pub seed: u64,
}

/// Generator for draw `index` under `seed`: one independent stream per
/// index.
pub fn stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Draws an approval profile, visiting ordered pairs row by row.
pub fn sample_with<R: Rng + ?Sized>(n: usize, p: Probability, rng: &mut R) -> PreferenceProfile {
    PreferenceProfile::from_fn(n, |i, j| i64::from(i != j && p.draw(rng)))
}

pub fn sample_profile(spec: &GnpSpec) -> PreferenceProfile {
    sample_with(spec.n, spec.p, &mut ChaCha8Rng::seed_from_u64(spec.seed))
}

/// The constant `(96e)^(-1/2)`.
pub fn lll_constant() -> f64 {
    (96.0 * std::f64::consts::E).powf(-0.5)
}

/// Exact probability that the agents in two seats of the identity cycle
/// form a blocking pair, for seats at cyclic distance at most 2 (`near`)
/// or at least 3.
pub fn blocking_probability(p: Probability, near: bool) -> BigRational {
    let p = p.to_big();
    let q = BigRational::one() - &p;
    let two = BigRational::from_integer(BigInt::from(2));
    if near {
        let e = &p * &q;
        &e * &e
    } else {
        let e = &two * &p * &p * &p * &q + &two * &p * &q * &q * &q + &p * &p * &q * &q;
        &e * &e
    }
}

/// Whether the local lemma applies: `p <= C / sqrt(n)` or
/// `p >= 1 - C / sqrt(n)`.
pub fn lll_applies(n: usize, p: Probability) -> bool {
    let bound = lll_constant() / (n as f64).sqrt();
    let x = p.to_f64();
    x <= bound || x >= 1.0 - bound
}

/// Lower bound `(n-1)!/2 * exp(-n(n-1)/(2n-3))` on the expected number of
/// stable cycle arrangements, when `p` is in range.
pub fn lll_bound(n: usize, p: Probability) -> Option<f64> {
    if n < 3 || !lll_applies(n, p) {
        return None;
    }
    let arrangements: f64 = (1..n).map(|k| k as f64).product::<f64>() / 2.0;
    Some(arrangements * per_arrangement_bound(n))
}

/// `exp(-n(n-1)/(2n-3))`, the bound on the chance one arrangement is
/// stable.
pub fn per_arrangement_bound(n: usize) -> f64 {
    let n = n as f64;
    (-(n * (n - 1.0)) / (2.0 * n - 3.0)).exp()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub mean: f64,
    pub std_error: f64,
    /// Stable cycle arrangement count of every trial, in trial order.
    pub counts: Vec<u64>,
}

/// Mean and standard error of the number of stable cycle arrangements
/// (up to rotation and reflection) of random profiles.
pub fn estimate_expected_stable(
    n: usize,
    p: Probability,
    trials: u64,
    seed: u64,
) -> Result<Estimate> {
    if n > MAX_ESTIMATE_AGENTS {
        return Err(Error::LimitExceeded {
            what: "agents for exact counting",
            limit: MAX_ESTIMATE_AGENTS as u128,
            actual: n as u128,
        });
    }
    if trials == 0 {
        return Err(Error::InvalidParameter(
            "at least one trial is required".into(),
        ));
    }
    let t = Topology::cycle(n)?;
    let counts = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let profile = sample_with(n, p, &mut stream(seed, trial));
            exact::count_stable(&profile, &t)
        })
        .collect::<Result<Vec<u64>>>()?;
    let total: u128 = counts.iter().map(|&c| u128::from(c)).sum();
    let squares: u128 = counts.iter().map(|&c| u128::from(c) * u128::from(c)).sum();
    // exact sample variance as a rational, converted once
    let k = BigRational::from_integer(BigInt::from(trials));
    let sum = BigRational::from_integer(BigInt::from(total));
    let mean = &sum / &k;
    let std_error = if trials > 1 {
        let sq = BigRational::from_integer(BigInt::from(squares));
        let var = (sq - &sum * &mean) / (&k - BigRational::one());
        let var = if var < BigRational::zero() {
            BigRational::zero()
        } else {
            var
        };
        (var.to_f64().unwrap_or(f64::NAN) / trials as f64).sqrt()
    } else {
        0.0
    };
    Ok(Estimate {
        mean: mean.to_f64().unwrap_or(f64::NAN),
        std_error,
        counts,
    })
}
