//! A small dense linear-programming solver.
//!
//! Standard form `min cᵀx  s.t.  Ax = b, x ≥ 0`. Dependent equality rows are
//! removed by a rank-revealing QR presolve, then a two-phase revised primal
//! simplex runs on the reduced system. Every solution carries a certificate:
//! primal residual, most negative reduced cost, and duality gap.

mod presolve;
mod simplex;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use presolve::{independent_rows, RowBasis, RANK_TOL};
pub use simplex::{solve, DEGENERATE_SWITCH, REFACTOR_EVERY};

/// Errors that prevent the solver from running at all.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum LpError {
    #[error("inconsistent dimensions: {0}")]
    Dimension(String),
    #[error("problem data contains NaN or infinity")]
    NonFinite,
    #[error("basis matrix became singular")]
    SingularBasis,
}

/// Standard-form LP data.
#[derive(Debug, Clone, PartialEq)]
pub struct LpProblem {
    pub a: DMatrix<f64>,
    pub b: DVector<f64>,
    pub c: DVector<f64>,
}

impl LpProblem {
    pub fn new(a: DMatrix<f64>, b: DVector<f64>, c: DVector<f64>) -> Result<Self, LpError> {
        if a.nrows() != b.len() || a.ncols() != c.len() {
            return Err(LpError::Dimension(format!(
                "A is {}×{}, b has {} entries, c has {}",
                a.nrows(),
                a.ncols(),
                b.len(),
                c.len()
            )));
        }
        if a.iter().chain(b.iter()).chain(c.iter()).any(|v| !v.is_finite()) {
            return Err(LpError::NonFinite);
        }
        Ok(LpProblem { a, b, c })
    }
}

/// Outcome of the simplex run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    IterLimit,
}

/// Optimality evidence computed from the final basis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    /// `‖Ax − b‖₂` over all original rows.
    pub primal_residual: f64,
    /// Smallest reduced cost `c_j − a_jᵀπ`; nonnegative at an optimum.
    pub min_reduced_cost: f64,
    /// `|cᵀx − bᵀπ|`.
    pub duality_gap: f64,
}

/// Solver settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LpOptions {
    /// Feasibility and optimality tolerance.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for LpOptions {
    fn default() -> Self {
        LpOptions { tol: 1e-9, max_iter: 50_000 }
    }
}

/// Result of [`solve`].
#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    pub x: DVector<f64>,
    pub objective: f64,
    /// Multipliers for the original rows (zero on rows removed by presolve).
    pub duals: DVector<f64>,
    pub iterations: usize,
    /// Row rank found by presolve.
    pub rank: usize,
    pub certificate: Certificate,
}

impl LpSolution {
    /// Checks the certificate: residual ≤ tol·(1+‖b‖), reduced costs ≥ −tol·max(1,‖c‖∞),
    /// duality gap ≤ tol·(1+|objective|).
    pub fn is_certified(&self, problem: &LpProblem, tol: f64) -> bool {
        let c = &self.certificate;
        let cscale = problem.c.amax().max(1.0);
        self.status == LpStatus::Optimal
            && c.primal_residual <= tol * (1.0 + problem.b.norm())
            && c.min_reduced_cost >= -tol * cscale
            && c.duality_gap <= tol * (1.0 + self.objective.abs())
    }
}
