//! Weighted ℓ1 minimization over nonuniform sparse models.
//!
//! The index set of a signal is split into classes; class `i` holds a
//! fraction `γ_i` of the coordinates, of which a fraction `p_i` is nonzero.
//! Recovery solves `min Σ w_j|x_j|  s.t.  Ax = y` with one weight per class.
//!
//! The crate covers three layers:
//!
//! * **Asymptotics** — [`exponents`] evaluates the combinatorial, internal-angle
//!   and external-angle exponents, and [`thresholds`] turns their sign into the
//!   weak, sectional and strong recovery thresholds `δ_c = m/n`, searches for
//!   the best weight ratio and evaluates the robustness constant.
//! * **Finite n** — [`geometry`] computes external angles by log-space
//!   quadrature, internal angles by tilted Monte-Carlo, the resulting union
//!   bound on the failure probability, and an exact null-space check.
//! * **Simulation** — [`lp`] is a certified dense simplex solver, [`recovery`]
//!   samples instances and solves weighted ℓ1, and [`experiments`] runs the
//!   phase-grid, p1-sweep, reweighted and noisy studies.
//!
//! [`report`] and [`cli`] turn results into reproducible CSV files with JSON
//! manifests. Every random quantity derives from a master seed through
//! [`sampling::stream`], so results do not depend on the thread count.

/// Special functions, entropy and bracketed root finding.
pub mod kernels;
/// Per-dimension exponents of the union bound.
pub mod exponents;
/// Recovery thresholds, weight optimization and robustness.
pub mod thresholds;
/// Seed derivation and random variates.
pub mod sampling;
/// Grassmann angles, the finite-n bound and the null-space condition.
pub mod geometry;
/// Dense two-phase revised simplex.
pub mod lp;
/// Instances and the weighted ℓ1 solver.
pub mod recovery;
/// CSV tables and run manifests.
pub mod report;
/// Monte-Carlo recovery experiments.
pub mod experiments;
/// Command-line front end.
pub mod cli;
