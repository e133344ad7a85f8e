//! Reproducible random streams and the few distributions the experiments need.
//!
//! Every stochastic task (a Monte-Carlo batch, a grid cell, a trial) draws from
//! its own ChaCha8 stream whose seed is a hash of the master seed and the task
//! coordinates. Results are therefore identical for any scheduling order or
//! worker count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};
use serde::{Deserialize, Serialize};

/// SplitMix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for the task at `coords` under `master`.
pub fn derive_seed(master: u64, coords: &[u64]) -> u64 {
    let mut h = mix(master);
    for &c in coords {
        h = mix(h ^ mix(c));
    }
    h
}

/// Stream for the task at `coords` under `master`.
pub fn stream(master: u64, coords: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(master, coords))
}

/// Draws from `N(mu, 1)` conditioned on being nonnegative.
///
/// Uses plain rejection when `mu ≥ 0` (acceptance ≥ 1/2) and Robert's
/// exponential-proposal sampler otherwise, whose acceptance stays high however
/// far the truncation point lies in the tail.
pub fn truncated_normal_nonneg<R: Rng + ?Sized>(rng: &mut R, mu: f64) -> f64 {
    if mu >= 0.0 {
        loop {
            let z: f64 = StandardNormal.sample(rng);
            let x = mu + z;
            if x >= 0.0 {
                return x;
            }
        }
    }
    // Standardized lower bound a = −mu > 0.
    let a = -mu;
    let alpha = 0.5 * (a + (a * a + 4.0).sqrt());
    loop {
        let e: f64 = Exp1.sample(rng);
        let z = a + e / alpha;
        let u: f64 = rng.random();
        let d = z - alpha;
        if u <= (-0.5 * d * d).exp() {
            return z - a;
        }
    }
}

/// Magnitude distributions for the nonzero entries of test signals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Amplitude {
    /// Standard normal.
    Gaussian,
    /// Uniform on `[−1, 1]`.
    Uniform,
    /// Magnitude of a 2-D standard normal, random sign.
    Rayleigh,
    /// Square root of a χ² with 4 degrees of freedom, random sign.
    SqrtChi2_4,
    /// Square root of a χ² with 6 degrees of freedom, random sign.
    SqrtChi2_6,
    /// `±1` with equal probability.
    Sign,
}

impl Amplitude {
    pub const ALL: [Amplitude; 6] = [
        Amplitude::Gaussian,
        Amplitude::Uniform,
        Amplitude::Rayleigh,
        Amplitude::SqrtChi2_4,
        Amplitude::SqrtChi2_6,
        Amplitude::Sign,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Amplitude::Gaussian => "gaussian",
            Amplitude::Uniform => "uniform",
            Amplitude::Rayleigh => "rayleigh",
            Amplitude::SqrtChi2_4 => "sqrt-chi2-4",
            Amplitude::SqrtChi2_6 => "sqrt-chi2-6",
            Amplitude::Sign => "sign",
        }
    }

    /// One symmetric draw.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let chi = |rng: &mut R, dof: usize| -> f64 {
            (0..dof).map(|_| { let z: f64 = StandardNormal.sample(rng); z * z }).sum::<f64>().sqrt()
        };
        let sign = |rng: &mut R| if rng.random::<bool>() { 1.0 } else { -1.0 };
        match self {
            Amplitude::Gaussian => StandardNormal.sample(rng),
            Amplitude::Uniform => rng.random_range(-1.0..=1.0),
            Amplitude::Rayleigh => { let s = sign(rng); s * chi(rng, 2) }
            Amplitude::SqrtChi2_4 => { let s = sign(rng); s * chi(rng, 4) }
            Amplitude::SqrtChi2_6 => { let s = sign(rng); s * chi(rng, 6) }
            Amplitude::Sign => sign(rng),
        }
    }
}

impl std::fmt::Display for Amplitude {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Amplitude {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Amplitude::ALL
            .iter()
            .find(|a| a.as_str() == s)
            .copied()
            .ok_or_else(|| format!("unknown distribution '{s}' (expected one of gaussian, uniform, rayleigh, sqrt-chi2-4, sqrt-chi2-6, sign)"))
    }
}

/// Uniformly random `k`-subset of `0..n`, sorted.
pub fn random_subset<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize) -> Vec<usize> {
    let mut v = rand::seq::index::sample(rng, n, k).into_vec();
    v.sort_unstable();
    v
}
