//! External angle of a face of the weighted cross-polytope.
//!
//! ```text
//! ζ(G) = π^{-1/2} ∫₀^∞ e^{−x²} Π_i G(w_i x/ξ)^{r_i} dx,    ξ² = Σ_i d_i w_i²
//! ```
//!
//! The integrand is log-concave, so it has a single mode. The integral is taken
//! in log space relative to that mode, split there, and each half is mapped to a
//! finite interval with `x = x* ± h·tan θ` before adaptive Simpson.

use std::f64::consts::{FRAC_PI_2, PI};

use super::{FacePair, GeometryError};
use crate::kernels::{self, Bracket};

/// Relative tolerance of the quadrature (relative to the integrand's peak).
const QUAD_TOL: f64 = 1e-13;
const MAX_DEPTH: usize = 60;

/// `ζ(G)` for the face `G` with `d_i = k_i + t_i` vertices per class.
pub fn external_angle(pair: &FacePair) -> Result<f64, GeometryError> {
    Ok(log_external_angle(pair)?.exp())
}

/// `log ζ(G)`, finite even when `ζ` underflows.
pub fn log_external_angle(pair: &FacePair) -> Result<f64, GeometryError> {
    let d = pair.d();
    let r = pair.r();
    let l = pair.l();
    if l == 0 {
        return Err(GeometryError::Domain("the face G must have at least one vertex".into()));
    }
    let xi = d.iter().zip(&pair.w).map(|(&di, &wi)| di as f64 * wi * wi).sum::<f64>().sqrt();
    let a: Vec<(f64, f64)> = r
        .iter()
        .zip(&pair.w)
        .filter(|(&ri, _)| ri > 0)
        .map(|(&ri, &wi)| (ri as f64, wi / xi))
        .collect();

    let logf = |x: f64| -> f64 {
        let mut v = -x * x;
        for &(ri, ci) in &a {
            v += ri * kernels::log_erf(ci * x);
        }
        v
    };
    if a.is_empty() {
        // π^{-1/2} ∫₀^∞ e^{−x²} dx = 1/2
        return Ok(-(2f64).ln());
    }
    // Mode: d/dx log f = −2x + Σ r_i c_i R(c_i x), decreasing from +∞ to −∞.
    let dlogf = |x: f64| -> f64 {
        let mut v = -2.0 * x;
        for &(ri, ci) in &a {
            v += ri * ci * kernels::half_normal_ratio(ci * x);
        }
        v
    };
    let mode = kernels::find_root(dlogf, Bracket::new(1e-3, 1.0), 1e-14)
        .map_err(|e| GeometryError::QuadratureFailure(format!("mode search: {e}")))?
        .x;
    let peak = logf(mode);
    // Local width from the curvature at the mode.
    let h = 1e-5 * mode.max(1e-3);
    let curv = (logf(mode + h) - 2.0 * peak + logf(mode - h).max(peak - 1e6)) / (h * h);
    let width = if curv < 0.0 { (-1.0 / curv).sqrt() } else { 1.0 };

    let scaled = |x: f64| -> f64 {
        if x <= 0.0 {
            return if a.is_empty() { 1.0 } else { 0.0 };
        }
        (logf(x) - peak).exp()
    };
    // Right half: x = mode + width·tan θ, θ ∈ [0, π/2).
    let right = |theta: f64| -> f64 {
        if theta >= FRAC_PI_2 {
            return 0.0;
        }
        let t = theta.tan();
        let sec2 = 1.0 + t * t;
        scaled(mode + width * t) * width * sec2
    };
    // Left half: x = mode − width·tan θ for θ ∈ [0, atan(mode/width)].
    let theta_max = (mode / width).atan();
    let left = |theta: f64| -> f64 {
        let t = theta.tan();
        let sec2 = 1.0 + t * t;
        scaled(mode - width * t) * width * sec2
    };
    let ir = adaptive_simpson(&right, 0.0, FRAC_PI_2, QUAD_TOL)?;
    let il = adaptive_simpson(&left, 0.0, theta_max, QUAD_TOL)?;
    Ok(peak + (ir + il).ln() - 0.5 * PI.ln())
}

/// Adaptive Simpson quadrature with Richardson correction.
pub(crate) fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> Result<f64, GeometryError> {
    if b <= a {
        return Ok(0.0);
    }
    // Start from a uniform split so narrow features are not skipped.
    let pieces = 16;
    let mut total = 0.0;
    for i in 0..pieces {
        let lo = a + (b - a) * i as f64 / pieces as f64;
        let hi = a + (b - a) * (i + 1) as f64 / pieces as f64;
        let fa = f(lo);
        let fb = f(hi);
        let m = 0.5 * (lo + hi);
        let fm = f(m);
        let whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
        total += simpson_rec(f, lo, hi, fa, fm, fb, whole, tol / pieces as f64, MAX_DEPTH)?;
    }
    Ok(total)
}

#[allow(clippy::too_many_arguments)]
fn simpson_rec<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: usize,
) -> Result<f64, GeometryError> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if !delta.is_finite() {
        return Err(GeometryError::QuadratureFailure(format!("non-finite integrand near x = {m}")));
    }
    if delta.abs() <= 15.0 * tol || (b - a) < 1e-15 {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(GeometryError::QuadratureFailure(format!("recursion limit on [{a}, {b}]")));
    }
    Ok(simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)?
        + simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn facet_and_trivial_cases() {
        let p = FacePair::two_class(3, 2, 1, 4, 4, 6, 1.0, 2.0).unwrap();
        assert!((external_angle(&p).unwrap() - 0.5).abs() < 1e-12);
        let p = FacePair::new(vec![1], vec![0], vec![1], vec![1.0]).unwrap();
        assert!((external_angle(&p).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn cross_polytope_vertex_in_three_dimensions() {
        // The six vertex normal cones {y : y_j ≥ |y_i| ∀i} tile space, so each covers 1/6.
        let p = FacePair::new(vec![1], vec![0], vec![3], vec![1.0]).unwrap();
        assert!((external_angle(&p).unwrap() - 1.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn octahedron_edge_matches_plain_quadrature() {
        let p = FacePair::new(vec![2], vec![0], vec![3], vec![1.0]).unwrap();
        let xi = 2f64.sqrt();
        let f = |x: f64| (-x * x).exp() * kernels::erf_scaled(x / xi);
        let direct = adaptive_simpson(&f, 0.0, 12.0, 1e-15).unwrap() / PI.sqrt();
        assert!((external_angle(&p).unwrap() - direct).abs() < 1e-12);
    }

    #[test]
    fn more_outer_coordinates_shrink_the_angle() {
        let mut prev = 1.0;
        for n in 5..30 {
            let p = FacePair::new(vec![2, 1], vec![1, 0], vec![n, n], vec![1.0, 2.0]).unwrap();
            let z = external_angle(&p).unwrap();
            assert!(z < prev);
            prev = z;
        }
    }

    #[test]
    fn log_space_survives_underflow() {
        let p = FacePair::new(vec![5, 5], vec![0, 0], vec![2000, 2000], vec![1.0, 3.0]).unwrap();
        // ζ ≈ e^{-176} would lose all precision outside log space; mpmath oracle.
        let lz = log_external_angle(&p).unwrap();
        assert!((lz - (-176.43401509543382689)).abs() < 1e-9, "{lz}");
    }
}
