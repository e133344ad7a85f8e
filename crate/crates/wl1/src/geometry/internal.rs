//! Internal angle `β(F, G)` by Monte-Carlo on a density at zero.
//!
//! With `a = Σ_i k_i w_i²`, let `S = Σ_j (w_j/√2)·H_j` over the `t` extra
//! vertices of `G`, where the `H_j` are i.i.d. standard half-normals. Then
//!
//! ```text
//! β(F, G) = c₀ · p_Z(0),   p_Z(0) = E_S[ exp(−S²/a) / √(πa) ],
//! c₀ = √π / 2^t · (Σ_i d_i w_i²)^{1/2}
//! ```
//!
//! Plain sampling of `S` is hopeless for large `t`, because the expectation is
//! dominated by exponentially rare small values of `S`. Each `H_j` is therefore
//! drawn from its exponential tilt (a normal `N(ησ_j, 1)` truncated to `[0,∞)`).
//! The likelihood ratio `exp(Σ_j Λ₁(ησ_j) − ηS)` keeps the estimator unbiased,
//! and `η < 0` solves the saddle-point equation `Σ_j σ_j Λ₁′(ησ_j) = −aη/2`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{FacePair, GeometryError};
use crate::kernels::{self, Bracket};
use crate::sampling;

/// Largest accepted relative standard error.
pub const MAX_REL_ERR: f64 = 0.05;
/// Samples per independently seeded batch.
const BATCH: usize = 2048;

/// Monte-Carlo estimate of an internal angle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InternalAngle {
    /// Estimate of `β`; may underflow to 0 for large faces, see `log_estimate`.
    pub estimate: f64,
    /// Standard error of `estimate`.
    pub std_err: f64,
    /// `log β`.
    pub log_estimate: f64,
    /// Standard error of `log β` (delta method: relative error of β).
    pub log_std_err: f64,
    /// Tilt parameter used for the summands.
    pub eta: f64,
    pub samples: usize,
}

impl InternalAngle {
    fn exact_one() -> Self {
        InternalAngle { estimate: 1.0, std_err: 0.0, log_estimate: 0.0, log_std_err: 0.0, eta: 0.0, samples: 0 }
    }

    /// Relative standard error `std_err/estimate`.
    pub fn rel_err(&self) -> f64 {
        self.log_std_err
    }
}

/// `β(F, G)`, failing with `InsufficientSamples` if the relative standard error exceeds [`MAX_REL_ERR`].
pub fn internal_angle(pair: &FacePair, mc_samples: usize, seed: u64) -> Result<InternalAngle, GeometryError> {
    let r = internal_angle_unchecked(pair, mc_samples, seed)?;
    if r.rel_err() > MAX_REL_ERR {
        return Err(GeometryError::InsufficientSamples { rel_err: r.rel_err(), limit: MAX_REL_ERR });
    }
    Ok(r)
}

/// `β(F, G)` without the precision check.
pub fn internal_angle_unchecked(pair: &FacePair, mc_samples: usize, seed: u64) -> Result<InternalAngle, GeometryError> {
    let t = pair.t_total();
    if t == 0 {
        return Ok(InternalAngle::exact_one());
    }
    let a: f64 = pair.k.iter().zip(&pair.w).map(|(&k, &w)| k as f64 * w * w).sum();
    if pair.k_total() == 0 || a <= 0.0 {
        return Err(GeometryError::Domain("internal angle needs a nonempty face F".into()));
    }
    if mc_samples == 0 {
        return Err(GeometryError::InsufficientSamples { rel_err: f64::INFINITY, limit: MAX_REL_ERR });
    }
    let xi2: f64 = pair.d().iter().zip(&pair.w).map(|(&d, &w)| d as f64 * w * w).sum();
    let log_c0 = 0.5 * std::f64::consts::PI.ln() - t as f64 * std::f64::consts::LN_2 + 0.5 * xi2.ln();

    // σ per class and the count of summands with that σ.
    let groups: Vec<(f64, usize)> = pair
        .t
        .iter()
        .zip(&pair.w)
        .filter(|(&ti, _)| ti > 0)
        .map(|(&ti, &w)| (w * std::f64::consts::FRAC_1_SQRT_2, ti))
        .collect();
    let eta = tilt(&groups, a)?;
    let log_norm: f64 = groups.iter().map(|&(s, c)| c as f64 * kernels::half_normal_cgf(eta * s)).sum();
    let log_dens_const = -0.5 * (std::f64::consts::PI * a).ln();

    // log of each sample's contribution: −S²/a − ηS + Σ Λ₁ − log √(πa)
    let batches = mc_samples.div_ceil(BATCH);
    let per_batch: Vec<(f64, f64, f64, usize)> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let count = BATCH.min(mc_samples - b * BATCH);
            let mut rng = sampling::stream(seed, &[b as u64]);
            let mut logs = Vec::with_capacity(count);
            for _ in 0..count {
                let mut s = 0.0;
                for &(sig, c) in &groups {
                    let mu = eta * sig;
                    for _ in 0..c {
                        s += sig * sampling::truncated_normal_nonneg(&mut rng, mu);
                    }
                }
                logs.push(-s * s / a - eta * s + log_norm + log_dens_const);
            }
            // Shifted sums so batches combine without overflow.
            let m = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let s1: f64 = logs.iter().map(|l| (l - m).exp()).sum();
            let s2: f64 = logs.iter().map(|l| (2.0 * (l - m)).exp()).sum();
            (m, s1, s2, count)
        })
        .collect();
    let m = per_batch.iter().map(|b| b.0).fold(f64::NEG_INFINITY, f64::max);
    let (mut s1, mut s2, mut n) = (0.0, 0.0, 0usize);
    for &(bm, b1, b2, c) in &per_batch {
        s1 += b1 * (bm - m).exp();
        s2 += b2 * (2.0 * (bm - m)).exp();
        n += c;
    }
    let nf = n as f64;
    let mean = s1 / nf;
    let var = (s2 / nf - mean * mean).max(0.0) * nf / (nf - 1.0).max(1.0);
    let rel = (var / nf).sqrt() / mean;
    let log_p = m + mean.ln();
    let log_beta = log_c0 + log_p;
    let est = log_beta.exp();
    Ok(InternalAngle { estimate: est, std_err: est * rel, log_estimate: log_beta, log_std_err: rel, eta, samples: n })
}

/// Saddle-point tilt `η < 0`: root of `Σ σ_j Λ₁′(ησ_j) + aη/2`.
fn tilt(groups: &[(f64, usize)], a: f64) -> Result<f64, GeometryError> {
    let f = |eta: f64| groups.iter().map(|&(s, c)| c as f64 * s * kernels::half_normal_cgf_deriv(eta * s)).sum::<f64>() + 0.5 * a * eta;
    // f(0) > 0 and f(η) ~ (a/2 + Σσ²_j … )η < 0 as η → −∞.
    let r = kernels::find_root(f, Bracket::new(-1.0, -1e-9), 1e-12)
        .map_err(|e| GeometryError::Domain(format!("tilt equation: {e}")))?;
    Ok(r.x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_faces_have_angle_one() {
        let p = FacePair::two_class(2, 1, 0, 0, 5, 5, 1.0, 2.0).unwrap();
        let r = internal_angle(&p, 10, 1).unwrap();
        assert_eq!((r.estimate, r.std_err), (1.0, 0.0));
    }

    #[test]
    fn segment_and_triangle() {
        // Vertex of a segment sees half of the line: β = 1/2 exactly.
        let p = FacePair::new(vec![1], vec![1], vec![2], vec![1.0]).unwrap();
        let r = internal_angle(&p, 200_000, 3).unwrap();
        assert!((r.estimate - 0.5).abs() < 4.0 * r.std_err + 1e-12, "{r:?}");
        // Vertex of an equilateral triangle: 60°/360° = 1/6.
        let p = FacePair::new(vec![1], vec![2], vec![3], vec![1.0]).unwrap();
        let r = internal_angle(&p, 100_000, 4).unwrap();
        assert!((r.estimate - 1.0 / 6.0).abs() < 4.0 * r.std_err, "{r:?}");
    }

    #[test]
    fn tetrahedron_edge_dihedral_angle() {
        // Edge of a regular tetrahedron: dihedral angle acos(1/3) over 2π.
        let p = FacePair::new(vec![2], vec![2], vec![4], vec![1.0]).unwrap();
        let r = internal_angle(&p, 100_000, 5).unwrap();
        let exact = (1.0f64 / 3.0).acos() / (2.0 * std::f64::consts::PI);
        assert!((r.estimate - exact).abs() < 4.0 * r.std_err, "{r:?} vs {exact}");
    }

    #[test]
    fn weighted_planar_angle() {
        // Triangle with vertices e1/w1, e2/w2, e3/w3; angle at e1/w1 from the
        // edge directions u = e2/w2 − e1/w1, v = e3/w3 − e1/w1.
        let (w1, w2) = (1.0f64, 2.0f64);
        let p = FacePair::two_class(1, 0, 0, 2, 1, 2, w1, w2).unwrap();
        let r = internal_angle(&p, 100_000, 6).unwrap();
        let u = [-1.0 / w1, 1.0 / w2, 0.0];
        let v = [-1.0 / w1, 0.0, 1.0 / w2];
        let dot: f64 = u.iter().zip(&v).map(|(a, b)| a * b).sum();
        let nu = u.iter().map(|x| x * x).sum::<f64>().sqrt();
        let nv = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        let exact = (dot / (nu * nv)).acos() / (2.0 * std::f64::consts::PI);
        assert!((r.estimate - exact).abs() < 4.0 * r.std_err, "{r:?} vs {exact}");
    }

    #[test]
    fn deterministic_given_seed() {
        let p = FacePair::two_class(3, 1, 4, 5, 20, 20, 1.0, 2.0).unwrap();
        let a = internal_angle(&p, 5000, 9).unwrap();
        let b = internal_angle(&p, 5000, 9).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn stays_precise_for_large_faces() {
        // k = (80, 10), t = (20, 40): the n = 400 point of the exponent bridge.
        let p = FacePair::two_class(80, 10, 20, 40, 200, 200, 1.0, 2.5).unwrap();
        let r = internal_angle(&p, 20_000, 11).unwrap();
        assert!(r.log_std_err < 0.02, "{r:?}");
        assert!(r.log_estimate < -50.0);
    }
}
