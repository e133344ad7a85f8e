//! Grassmann-angle upper bound on the probability that weighted ℓ1 fails.
//!
//! ```text
//! P(failure) ≤ Σ_t 2^{Σt_i + 1} Π_i C(n_i − k_i, t_i) · β(k | t) · ζ(k + t)
//! ```
//!
//! Which face sizes enter the sum is governed by [`IndexRule`].

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{log_external_angle, internal_angle_unchecked, FacePair, GeometryError};
use crate::sampling;

/// Largest ambient dimension accepted by [`failure_bound`].
pub const MAX_BOUND_DIM: usize = 80;

/// Which faces `G` (with `l = Σ(k_i + t_i)` vertices) enter the sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IndexRule {
    /// `Σt_i > m − Σk_i + 1`, i.e. every `l ≥ m + 2`.
    AsPrinted,
    /// Faces of dimension `m + 1 + 2s` only, i.e. `l = m + 2 + 2s`, `s ≥ 0`.
    Parity,
}

impl IndexRule {
    pub fn admits(&self, l: usize, m: usize) -> bool {
        match self {
            IndexRule::AsPrinted => l >= m + 2,
            IndexRule::Parity => l >= m + 2 && (l - m) % 2 == 0,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            IndexRule::AsPrinted => "as-printed",
            IndexRule::Parity => "parity",
        }
    }
}

impl std::str::FromStr for IndexRule {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "as-printed" => Ok(IndexRule::AsPrinted),
            "parity" => Ok(IndexRule::Parity),
            o => Err(format!("unknown index rule '{o}' (expected as-printed or parity)")),
        }
    }
}

/// Problem dimensions for the finite-`n` bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiniteModel {
    /// Class sizes `n_i` (summing to `n`).
    pub n: Vec<usize>,
    /// Support sizes `k_i`.
    pub k: Vec<usize>,
    /// Number of measurements.
    pub m: usize,
    /// Per-class weights.
    pub w: Vec<f64>,
}

impl FiniteModel {
    pub fn new(n: Vec<usize>, k: Vec<usize>, m: usize, w: Vec<f64>) -> Result<Self, GeometryError> {
        let u = n.len();
        if u == 0 || k.len() != u || w.len() != u {
            return Err(GeometryError::Domain("per-class vectors must be nonempty and of equal length".into()));
        }
        if k.iter().zip(&n).any(|(k, n)| k > n) {
            return Err(GeometryError::Domain("support size exceeds class size".into()));
        }
        let total: usize = n.iter().sum();
        if m >= total {
            return Err(GeometryError::Domain(format!("m = {m} must be below n = {total}")));
        }
        if w.iter().any(|&x| !(x > 0.0 && x.is_finite())) {
            return Err(GeometryError::Domain("weights must be positive".into()));
        }
        Ok(FiniteModel { n, k, m, w })
    }

    /// Two classes of sizes `n1` and `n − n1`.
    #[allow(clippy::too_many_arguments)]
    pub fn two_class(n: usize, n1: usize, k1: usize, k2: usize, m: usize, w1: f64, w2: f64) -> Result<Self, GeometryError> {
        if n1 > n {
            return Err(GeometryError::Domain(format!("n1 = {n1} exceeds n = {n}")));
        }
        Self::new(vec![n1, n - n1], vec![k1, k2], m, vec![w1, w2])
    }

    pub fn dim(&self) -> usize {
        self.n.iter().sum()
    }
}

/// One term of the bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundTerm {
    pub t: Vec<usize>,
    /// `log` of the whole term.
    pub log_term: f64,
    /// `log` of `2^{Σt+1} Π C(n_i − k_i, t_i)`.
    pub log_count: f64,
    pub log_beta: f64,
    pub beta_rel_err: f64,
    pub log_zeta: f64,
}

/// The bound and its term table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    /// Sum of all terms (may exceed 1).
    pub bound: f64,
    /// `min(bound, 1)`.
    pub clamped: f64,
    /// Propagated Monte-Carlo standard error of `bound`.
    pub std_err: f64,
    pub rule: IndexRule,
    pub terms: Vec<BoundTerm>,
}

fn ln_choose(n: usize, k: usize) -> f64 {
    libm::lgamma(n as f64 + 1.0) - libm::lgamma(k as f64 + 1.0) - libm::lgamma((n - k) as f64 + 1.0)
}

/// Evaluates the bound; `β` for each term comes from its own seeded stream.
pub fn failure_bound(fm: &FiniteModel, mc_samples: usize, seed: u64, rule: IndexRule) -> Result<BoundReport, GeometryError> {
    if fm.dim() > MAX_BOUND_DIM {
        return Err(GeometryError::Domain(format!("n = {} exceeds the supported {MAX_BOUND_DIM}", fm.dim())));
    }
    let u = fm.n.len();
    let ksum: usize = fm.k.iter().sum();
    // Enumerate t in lexicographic order.
    let ranges: Vec<usize> = (0..u).map(|i| fm.n[i] - fm.k[i]).collect();
    let mut ts = Vec::new();
    let mut cur = vec![0usize; u];
    loop {
        let l = ksum + cur.iter().sum::<usize>();
        if rule.admits(l, fm.m) {
            ts.push(cur.clone());
        }
        let mut i = u;
        loop {
            if i == 0 {
                break;
            }
            i -= 1;
            if cur[i] < ranges[i] {
                cur[i] += 1;
                for c in cur.iter_mut().skip(i + 1) {
                    *c = 0;
                }
                break;
            }
            if i == 0 {
                i = usize::MAX;
                break;
            }
        }
        if i == usize::MAX {
            break;
        }
    }
    let terms: Result<Vec<BoundTerm>, GeometryError> = ts
        .par_iter()
        .map(|t| {
            let pair = FacePair::new(fm.k.clone(), t.clone(), fm.n.clone(), fm.w.clone())?;
            let tsum: usize = t.iter().sum();
            let log_count = (tsum as f64 + 1.0) * std::f64::consts::LN_2
                + (0..u).map(|i| ln_choose(fm.n[i] - fm.k[i], t[i])).sum::<f64>();
            let coords: Vec<u64> = t.iter().map(|&x| x as u64).collect();
            let beta = if ksum == 0 {
                // No support: the face F is empty and the cone is the whole space.
                return Err(GeometryError::Domain("the bound needs at least one nonzero".into()));
            } else {
                internal_angle_unchecked(&pair, mc_samples, sampling::derive_seed(seed, &coords))?
            };
            let log_zeta = log_external_angle(&pair)?;
            Ok(BoundTerm {
                t: t.clone(),
                log_term: log_count + beta.log_estimate + log_zeta,
                log_count,
                log_beta: beta.log_estimate,
                beta_rel_err: beta.log_std_err,
                log_zeta,
            })
        })
        .collect();
    let terms = terms?;
    let bound: f64 = terms.iter().map(|t| t.log_term.exp()).sum();
    let var: f64 = terms.iter().map(|t| (t.log_term.exp() * t.beta_rel_err).powi(2)).sum();
    Ok(BoundReport { bound, clamped: bound.min(1.0), std_err: var.sqrt(), rule, terms })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_index_set_gives_zero() {
        let fm = FiniteModel::two_class(10, 5, 1, 1, 9, 1.0, 1.0).unwrap();
        let r = failure_bound(&fm, 100, 1, IndexRule::AsPrinted).unwrap();
        assert!(r.terms.is_empty());
        assert_eq!(r.bound, 0.0);
    }

    #[test]
    fn parity_terms_are_a_subset() {
        let fm = FiniteModel::two_class(16, 8, 2, 1, 8, 1.0, 2.0).unwrap();
        let a = failure_bound(&fm, 2000, 1, IndexRule::AsPrinted).unwrap();
        let b = failure_bound(&fm, 2000, 1, IndexRule::Parity).unwrap();
        assert!(b.terms.len() < a.terms.len());
        assert!(b.bound <= a.bound);
        for t in &b.terms {
            assert!(a.terms.iter().any(|s| s.t == t.t && s.log_term == t.log_term));
        }
    }

    #[test]
    fn monotone_in_m() {
        let mut prev = f64::INFINITY;
        for m in [6, 8, 10, 12, 14] {
            let fm = FiniteModel::two_class(16, 8, 2, 1, m, 1.0, 2.0).unwrap();
            let r = failure_bound(&fm, 2000, 1, IndexRule::AsPrinted).unwrap();
            assert!(r.bound <= prev);
            prev = r.bound;
        }
    }

    #[test]
    fn rejects_large_n() {
        let fm = FiniteModel::two_class(100, 50, 2, 1, 50, 1.0, 1.0).unwrap();
        assert!(failure_bound(&fm, 10, 1, IndexRule::AsPrinted).is_err());
    }
}
