//! Weighted null-space condition for a fixed support.
//!
//! Weighted ℓ1 minimization recovers every `x` supported on `K` with sign
//! pattern `s` if and only if every nonzero `z` with `Az = 0` satisfies
//!
//! ```text
//! Σ_{i∈K} w_i s_i z_i  <  Σ_{i∉K} w_i |z_i|.
//! ```
//!
//! The condition is scale-invariant, so for each `s` the LP
//! `min Σ_{i∉K} w_i|z_i|  s.t.  Az = 0,  Σ_{i∈K} w_i s_i z_i = 1` decides it:
//! the pattern is safe when the minimum exceeds 1 (or the LP is infeasible)
//! and fails when the minimum is below 1. Every `x` on `K` is recovered iff all
//! patterns are safe. Patterns `s` and `−s` are equivalent, so the first sign
//! is fixed.

use nalgebra::{DMatrix, DVector};
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::GeometryError;
use crate::lp::{self, LpOptions, LpProblem, LpStatus};
use crate::sampling;

/// Largest support enumerated exhaustively (2^(|K|−1) sign patterns).
pub const EXACT_SUPPORT_LIMIT: usize = 12;
/// Margin around 1 inside which a pattern's verdict is left open.
pub const MARGIN_TOL: f64 = 1e-7;

/// Overall verdict of the check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NullSpaceVerdict {
    /// Every `x` supported on `K` is the unique minimizer.
    Holds,
    /// Some sign pattern on `K` fails; a witness null-space vector is attached.
    Violated,
    /// Randomized search found no violation, or a pattern sits on the boundary.
    Undetermined,
}

/// Outcome for one sign pattern.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatternResult {
    pub signs: Vec<i8>,
    /// `min Σ_{K̄} w|z|` under the normalization; `+∞` when no null vector qualifies.
    pub ratio: f64,
}

impl PatternResult {
    pub fn verdict(&self) -> NullSpaceVerdict {
        if self.ratio > 1.0 + MARGIN_TOL {
            NullSpaceVerdict::Holds
        } else if self.ratio < 1.0 - MARGIN_TOL {
            NullSpaceVerdict::Violated
        } else {
            NullSpaceVerdict::Undetermined
        }
    }
}

/// Full report of [`null_space_condition_check`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NullSpaceReport {
    pub verdict: NullSpaceVerdict,
    /// Whether all sign patterns were enumerated.
    pub exact: bool,
    /// Smallest ratio over the patterns examined.
    pub min_ratio: f64,
    /// Per-pattern results (first sign fixed to +1).
    pub patterns: Vec<PatternResult>,
    /// A null-space vector violating the condition, if one was found.
    pub witness: Option<Vec<f64>>,
}

/// Solves the LP for one sign pattern; returns the ratio and the minimizing `z`.
pub fn pattern_ratio(a: &DMatrix<f64>, support: &[usize], w: &[f64], signs: &[i8]) -> Result<(f64, Option<Vec<f64>>), GeometryError> {
    let (m, n) = a.shape();
    let mut in_k = vec![false; n];
    for &i in support {
        in_k[i] = true;
    }
    let mut big = DMatrix::zeros(m + 1, 2 * n);
    big.view_mut((0, 0), (m, n)).copy_from(a);
    big.view_mut((0, n), (m, n)).copy_from(&(-a));
    for (&i, &s) in support.iter().zip(signs) {
        big[(m, i)] = w[i] * s as f64;
        big[(m, n + i)] = -w[i] * s as f64;
    }
    let mut b = DVector::zeros(m + 1);
    b[m] = 1.0;
    let c = DVector::from_fn(2 * n, |j, _| if in_k[j % n] { 0.0 } else { w[j % n] });
    let problem = LpProblem::new(big, b, c).map_err(|e| GeometryError::Lp(e.to_string()))?;
    let sol = lp::solve(&problem, &LpOptions::default()).map_err(|e| GeometryError::Lp(e.to_string()))?;
    match sol.status {
        LpStatus::Optimal => {
            let z: Vec<f64> = (0..n).map(|i| sol.x[i] - sol.x[n + i]).collect();
            Ok((sol.objective, Some(z)))
        }
        LpStatus::Infeasible => Ok((f64::INFINITY, None)),
        LpStatus::Unbounded => Err(GeometryError::Lp("null-space LP unbounded".into())),
        LpStatus::IterLimit => Err(GeometryError::Lp("null-space LP hit the iteration limit".into())),
    }
}

/// Checks the weighted null-space condition of `a` for the support `k`.
///
/// `w` holds one weight per coordinate. Supports up to [`EXACT_SUPPORT_LIMIT`]
/// are decided exactly. Larger ones are probed with `trials` random null-space
/// directions, each polished by the LP of its sign pattern; that search can
/// only return `Violated` or `Undetermined`.
pub fn null_space_condition_check(a: &DMatrix<f64>, k: &[usize], w: &[f64], trials: usize, seed: u64) -> Result<NullSpaceReport, GeometryError> {
    let (m, n) = a.shape();
    if w.len() != n {
        return Err(GeometryError::Domain(format!("{} weights for {n} columns", w.len())));
    }
    if w.iter().any(|&x| !(x > 0.0 && x.is_finite())) {
        return Err(GeometryError::Domain("weights must be positive".into()));
    }
    if k.iter().any(|&i| i >= n) {
        return Err(GeometryError::Domain("support index out of range".into()));
    }
    let mut support = k.to_vec();
    support.sort_unstable();
    support.dedup();
    let rank = lp::independent_rows(a).rank();
    if rank < m {
        return Err(GeometryError::RankDeficient { rank, rows: m });
    }
    if support.is_empty() || m == n {
        return Ok(NullSpaceReport {
            verdict: NullSpaceVerdict::Holds,
            exact: true,
            min_ratio: f64::INFINITY,
            patterns: vec![],
            witness: None,
        });
    }

    let exact = support.len() <= EXACT_SUPPORT_LIMIT;
    let sign_sets: Vec<Vec<i8>> = if exact {
        (0..1u64 << (support.len() - 1))
            .map(|bits| {
                std::iter::once(1i8)
                    .chain((1..support.len()).map(|j| if bits >> (j - 1) & 1 == 1 { -1 } else { 1 }))
                    .collect()
            })
            .collect()
    } else {
        random_null_patterns(a, &support, trials, seed)
    };
    let solved: Result<Vec<(PatternResult, Option<Vec<f64>>)>, GeometryError> = sign_sets
        .into_par_iter()
        .map(|s| {
            let (ratio, z) = pattern_ratio(a, &support, w, &s)?;
            Ok((PatternResult { signs: s, ratio }, z))
        })
        .collect();
    let solved = solved?;
    let min_ratio = solved.iter().map(|(p, _)| p.ratio).fold(f64::INFINITY, f64::min);
    let witness = solved
        .iter()
        .filter(|(p, _)| p.verdict() == NullSpaceVerdict::Violated)
        .min_by(|x, y| x.0.ratio.total_cmp(&y.0.ratio))
        .and_then(|(_, z)| z.clone());
    let verdict = if witness.is_some() {
        NullSpaceVerdict::Violated
    } else if exact && solved.iter().all(|(p, _)| p.verdict() == NullSpaceVerdict::Holds) {
        NullSpaceVerdict::Holds
    } else {
        NullSpaceVerdict::Undetermined
    };
    Ok(NullSpaceReport { verdict, exact, min_ratio, patterns: solved.into_iter().map(|(p, _)| p).collect(), witness })
}

/// Sign patterns on `K` of random null-space directions (first sign normalized to +1).
fn random_null_patterns(a: &DMatrix<f64>, support: &[usize], trials: usize, seed: u64) -> Vec<Vec<i8>> {
    let n = a.ncols();
    let gram = (a * a.transpose()).lu();
    let mut out: Vec<Vec<i8>> = (0..trials)
        .map(|t| {
            let mut rng = sampling::stream(seed, &[t as u64]);
            let g = DVector::from_fn(n, |_, _| StandardNormal.sample(&mut rng));
            let coef = gram.solve(&(a * &g)).unwrap_or_else(|| DVector::zeros(a.nrows()));
            let z = g - a.transpose() * coef;
            let flip = if z[support[0]] < 0.0 { -1i8 } else { 1 };
            support.iter().map(|&i| if z[i] < 0.0 { -flip } else { flip }).collect()
        })
        .collect();
    out.sort();
    out.dedup();
    out
}
