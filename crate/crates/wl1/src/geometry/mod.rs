//! Finite-dimensional angles of the weighted cross-polytope.
//!
//! `P_w = {y : Σ w_j|y_j| ≤ 1}` has vertices `±e_j/w_j`. A face is described
//! by how many of its vertices fall in each weight class. For a face `F` with
//! `k_i` vertices in class `i` and a face `G ⊇ F` with `t_i` further vertices,
//! this module computes:
//!
//! * the external angle `ζ(G)`, as a one-dimensional integral;
//! * the internal angle `β(F, G)`, by Monte-Carlo on a density at zero;
//! * the Grassmann-angle failure bound that sums them over all `G`;
//! * an LP-based oracle for the weighted null-space condition.

mod bound;
mod external;
mod internal;
mod nullspace;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use bound::{failure_bound, BoundReport, BoundTerm, FiniteModel, IndexRule};
pub use external::{external_angle, log_external_angle};
pub use internal::{internal_angle, internal_angle_unchecked, InternalAngle, MAX_REL_ERR};
pub use nullspace::{null_space_condition_check, NullSpaceVerdict, NullSpaceReport, EXACT_SUPPORT_LIMIT};

/// Errors from the geometry routines.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum GeometryError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("quadrature did not converge: {0}")]
    QuadratureFailure(String),
    #[error("Monte-Carlo relative error {rel_err:.3} exceeds {limit}; increase the sample count")]
    InsufficientSamples { rel_err: f64, limit: f64 },
    #[error("measurement matrix is rank deficient (rank {rank} < {rows})")]
    RankDeficient { rank: usize, rows: usize },
    #[error("linear program failed: {0}")]
    Lp(String),
}

/// A face `F` and a face `G ⊇ F`, described per class.
///
/// `k[i]` vertices of `F` and `k[i] + t[i]` vertices of `G` lie in class `i`,
/// which holds `n[i]` coordinates of weight `w[i]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FacePair {
    pub k: Vec<usize>,
    pub t: Vec<usize>,
    pub n: Vec<usize>,
    pub w: Vec<f64>,
}

impl FacePair {
    pub fn new(k: Vec<usize>, t: Vec<usize>, n: Vec<usize>, w: Vec<f64>) -> Result<Self, GeometryError> {
        let u = k.len();
        if t.len() != u || n.len() != u || w.len() != u || u == 0 {
            return Err(GeometryError::Domain("per-class vectors must be nonempty and of equal length".into()));
        }
        for i in 0..u {
            if k[i] + t[i] > n[i] {
                return Err(GeometryError::Domain(format!(
                    "class {i}: k + t = {} exceeds class size {}",
                    k[i] + t[i],
                    n[i]
                )));
            }
            if !(w[i] > 0.0 && w[i].is_finite()) {
                return Err(GeometryError::Domain(format!("class {i}: weight {} must be positive", w[i])));
            }
        }
        Ok(FacePair { k, t, n, w })
    }

    /// Two-class face pair.
    #[allow(clippy::too_many_arguments)]
    pub fn two_class(k1: usize, k2: usize, t1: usize, t2: usize, n1: usize, n2: usize, w1: f64, w2: f64) -> Result<Self, GeometryError> {
        Self::new(vec![k1, k2], vec![t1, t2], vec![n1, n2], vec![w1, w2])
    }

    /// `d_i = k_i + t_i`, vertices of `G` per class.
    pub fn d(&self) -> Vec<usize> {
        self.k.iter().zip(&self.t).map(|(a, b)| a + b).collect()
    }

    /// `r_i = n_i − d_i`, coordinates outside `G` per class.
    pub fn r(&self) -> Vec<usize> {
        self.n.iter().zip(self.d()).map(|(n, d)| n - d).collect()
    }

    /// Total vertex count `l` of `G`.
    pub fn l(&self) -> usize {
        self.d().iter().sum()
    }

    pub fn k_total(&self) -> usize {
        self.k.iter().sum()
    }

    pub fn t_total(&self) -> usize {
        self.t.iter().sum()
    }
}
