//! Critical measurement ratios `δ_c` and the quantities derived from them.
//!
//! For a candidate `δ`, the union bound decays whenever `ψ_tot(τ) < 0` on the
//! whole region `{0 ≤ τ_i ≤ γ_i(1 − p_i), Στ_i ≥ δ − ρ}`. The region shrinks
//! as `δ` grows, so its maximum `M(δ)` is nonincreasing and `δ_c` is found by
//! bisection on the sign of `M`.
//!
//! The exact weak exponent never exceeds zero; it touches zero at a single
//! point, and the `λ` of that point is the weak threshold. A sign test at exact
//! zero is therefore ill-conditioned, and `M(δ) ≥ −PSI_SLACK` counts as "not yet
//! negative". The induced error on `δ_c` is about `√(2·PSI_SLACK/κ)` (`κ` the
//! curvature of `ψ_tot` at its peak), i.e. a few `1e-5`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exponents::{psi_tot, psi_tot_value, ExponentError, ExponentPoint, SparsityModel, ThresholdKind};

/// Values of `ψ_tot` at or above `−PSI_SLACK` count as nonnegative.
pub const PSI_SLACK: f64 = 1e-9;
/// Cap on bisection steps over `δ`.
pub const MAX_BISECTIONS: usize = 40;
/// Cap on the total number of product-grid points.
pub const MAX_GRID_POINTS: usize = 1_000_000;
/// Smallest accepted per-axis grid resolution.
pub const MIN_GRID: usize = 50;
/// Number of best grid points used as refinement seeds.
const SEEDS: usize = 4;
/// Compass search stops once the step falls below this (in τ units).
const MIN_STEP: f64 = 1e-10;

/// Errors from the threshold search.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum ThresholdError {
    #[error("no δ ≤ 1 makes the exponent negative (max ψ_tot at δ = 1 is {max_psi:.3e})")]
    Infeasible { max_psi: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Exponent(#[from] ExponentError),
}

/// One bisection step: `M(δ)` and whether it counted as nonnegative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceStep {
    pub delta: f64,
    pub max_psi: f64,
    pub nonnegative: bool,
}

/// Outcome of [`delta_c`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdResult {
    pub delta_c: f64,
    pub kind: ThresholdKind,
    pub model: SparsityModel,
    /// The τ achieving the maximum of ψ_tot over the region at `delta_c`.
    pub witness_tau: Vec<f64>,
    /// Exponents at the witness.
    pub witness: ExponentPoint,
    /// Points per axis of the product grid.
    pub grid_resolution: usize,
    /// Requested bisection tolerance on δ.
    pub refine_tol: f64,
    /// Lower end of the final bracket (largest δ found with M(δ) ≥ −slack).
    pub delta_lo: f64,
    /// Max of ψ_tot over the region at `delta_c`, grid points only.
    pub grid_max: f64,
    /// Max of ψ_tot over the region at `delta_c` after local refinement.
    pub refined_max: f64,
    /// Global (unconstrained) maximizer of ψ_tot and its value.
    pub peak_tau: Vec<f64>,
    pub peak_psi: f64,
    pub trace: Vec<TraceStep>,
}

/// The scanned landscape of ψ_tot for one model and kind.
///
/// Grid values do not depend on δ, so they are computed once (in parallel) and
/// reused by every bisection step.
#[derive(Debug, Clone)]
pub struct Landscape {
    model: SparsityModel,
    kind: ThresholdKind,
    caps: Vec<f64>,
    free: Vec<usize>,
    per_axis: usize,
    points: Vec<(Vec<f64>, f64)>,
    peak: (Vec<f64>, f64),
}

impl Landscape {
    /// Evaluates ψ_tot on the product grid and locates its global peak.
    pub fn scan(model: &SparsityModel, kind: ThresholdKind, grid: usize) -> Result<Self, ThresholdError> {
        if grid < MIN_GRID {
            return Err(ThresholdError::InvalidArgument(format!("grid must be at least {MIN_GRID}, got {grid}")));
        }
        let caps = model.tau_caps();
        let free: Vec<usize> = (0..caps.len()).filter(|&i| caps[i] > 0.0).collect();
        let d = free.len();
        let per_axis = if d <= 1 {
            grid.max(2)
        } else {
            let limit = (MAX_GRID_POINTS as f64).powf(1.0 / d as f64).floor() as usize;
            grid.min(limit).max(2)
        };
        let total = per_axis.pow(d as u32);
        let taus: Vec<Vec<f64>> = (0..total)
            .map(|mut idx| {
                let mut tau = vec![0.0; caps.len()];
                for &i in &free {
                    let j = idx % per_axis;
                    idx /= per_axis;
                    tau[i] = caps[i] * j as f64 / (per_axis - 1) as f64;
                }
                tau
            })
            .collect();
        let values: Result<Vec<f64>, ExponentError> =
            taus.par_iter().map(|t| psi_tot_value(model, t, kind)).collect();
        let points: Vec<(Vec<f64>, f64)> = taus.into_iter().zip(values?).collect();
        let mut ls = Landscape {
            model: model.clone(),
            kind,
            caps,
            free,
            per_axis,
            points,
            peak: (Vec::new(), f64::NEG_INFINITY),
        };
        ls.peak = ls.refined_max(f64::NEG_INFINITY)?;
        Ok(ls)
    }

    /// Points per axis actually used.
    pub fn per_axis(&self) -> usize {
        self.per_axis
    }

    /// Number of grid points.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Global maximizer of ψ_tot over the box.
    pub fn peak(&self) -> (&[f64], f64) {
        (&self.peak.0, self.peak.1)
    }

    /// Max of ψ_tot over grid points with `Στ ≥ lambda_min`.
    pub fn grid_max(&self, lambda_min: f64) -> Option<(&[f64], f64)> {
        self.points
            .iter()
            .filter(|(t, _)| lambda_sum(t) >= lambda_min - 1e-15)
            .fold(None, |best: Option<(&[f64], f64)>, (t, v)| match best {
                Some((_, bv)) if bv >= *v => best,
                _ => Some((t.as_slice(), *v)),
            })
    }

    /// `M(δ)`: max of ψ_tot over the region `Στ ≥ δ − ρ`, with its argmax.
    pub fn region_max(&self, delta: f64) -> Result<(Vec<f64>, f64), ThresholdError> {
        let lmin = delta - self.model.rho();
        if lambda_sum(&self.peak.0) >= lmin {
            return Ok(self.peak.clone());
        }
        self.refined_max(lmin)
    }

    /// Compass refinement from the best grid seeds inside `Στ ≥ lmin`.
    fn refined_max(&self, lmin: f64) -> Result<(Vec<f64>, f64), ThresholdError> {
        let total_cap: f64 = self.caps.iter().sum();
        let lmin_eff = lmin.min(total_cap);
        let mut seeds: Vec<(Vec<f64>, f64)> = self
            .points
            .iter()
            .filter(|(t, _)| lambda_sum(t) >= lmin_eff - 1e-15)
            .cloned()
            .collect();
        if seeds.is_empty() {
            // Only the full corner is feasible.
            let t = self.caps.clone();
            let v = psi_tot_value(&self.model, &t, self.kind)?;
            seeds.push((t, v));
        }
        // Stable order: value descending, then grid order.
        let mut order: Vec<usize> = (0..seeds.len()).collect();
        order.sort_by(|&a, &b| seeds[b].1.partial_cmp(&seeds[a].1).unwrap_or(std::cmp::Ordering::Equal).then(a.cmp(&b)));
        let h0 = 1.0 / (self.per_axis - 1) as f64;
        let mut best: (Vec<f64>, f64) = (seeds[order[0]].0.clone(), seeds[order[0]].1);
        for &i in order.iter().take(SEEDS) {
            if !seeds[i].1.is_finite() {
                continue;
            }
            let r = self.compass(seeds[i].0.clone(), seeds[i].1, lmin_eff, h0)?;
            if r.1 > best.1 {
                best = r;
            }
        }
        Ok(best)
    }

    /// Pattern search over coordinate moves `±e_i` and transfers `e_i − e_j`
    /// (which slide along `Στ = const`), kept inside the box and `Στ ≥ lmin`.
    fn compass(&self, mut x: Vec<f64>, mut fx: f64, lmin: f64, h0: f64) -> Result<(Vec<f64>, f64), ThresholdError> {
        let mut h = h0;
        let d = self.free.len();
        let mut dirs: Vec<Vec<(usize, f64)>> = Vec::new();
        for a in 0..d {
            dirs.push(vec![(self.free[a], 1.0)]);
            dirs.push(vec![(self.free[a], -1.0)]);
            for b in 0..d {
                if a != b {
                    dirs.push(vec![(self.free[a], 1.0), (self.free[b], -1.0)]);
                }
            }
        }
        let mut iters = 0;
        while h >= MIN_STEP && iters < 20_000 {
            iters += 1;
            let mut improved = false;
            for dir in &dirs {
                let mut y = x.clone();
                for &(i, s) in dir {
                    // Step relative to the axis length so every class moves comparably.
                    y[i] = (y[i] + s * h * self.caps[i]).clamp(0.0, self.caps[i]);
                }
                let sum = lambda_sum(&y);
                if sum < lmin {
                    // Land exactly on the constraint plane when a single decrease overshoots it.
                    if dir.len() == 1 {
                        let (i, _) = dir[0];
                        y[i] += lmin - sum;
                        if y[i] > self.caps[i] {
                            continue;
                        }
                    } else {
                        continue;
                    }
                }
                if y == x {
                    continue;
                }
                let fy = psi_tot_value(&self.model, &y, self.kind)?;
                if fy > fx {
                    x = y;
                    fx = fy;
                    improved = true;
                    break;
                }
            }
            if !improved {
                h *= 0.5;
            }
        }
        Ok((x, fx))
    }
}

fn lambda_sum(t: &[f64]) -> f64 {
    t.iter().sum()
}

/// Smallest `δ ∈ (ρ, 1]` (to `tol`) at which ψ_tot is strictly negative on the
/// whole region `Στ_i ≥ δ − ρ`.
pub fn delta_c(model: &SparsityModel, kind: ThresholdKind, grid: usize, tol: f64) -> Result<ThresholdResult, ThresholdError> {
    if !(tol > 0.0) {
        return Err(ThresholdError::InvalidArgument(format!("tol must be positive, got {tol}")));
    }
    let ls = Landscape::scan(model, kind, grid)?;
    delta_c_on(&ls, tol)
}

/// [`delta_c`] on a precomputed landscape.
pub fn delta_c_on(ls: &Landscape, tol: f64) -> Result<ThresholdResult, ThresholdError> {
    let rho = ls.model.rho();
    let mut trace = Vec::new();
    let nonneg = |v: f64| v >= -PSI_SLACK;

    let (t1, m1) = ls.region_max(1.0)?;
    trace.push(TraceStep { delta: 1.0, max_psi: m1, nonnegative: nonneg(m1) });
    if nonneg(m1) {
        return Err(ThresholdError::Infeasible { max_psi: m1 });
    }
    let (mut lo, mut hi) = (rho, 1.0);
    let mut hi_arg = (t1, m1);
    let (t0, m0) = ls.region_max(rho)?;
    trace.push(TraceStep { delta: rho, max_psi: m0, nonnegative: nonneg(m0) });
    if !nonneg(m0) {
        // Negative everywhere: any δ above ρ works.
        hi = rho;
        hi_arg = (t0, m0);
    } else {
        for _ in 0..MAX_BISECTIONS {
            if hi - lo <= tol {
                break;
            }
            let mid = 0.5 * (lo + hi);
            let (t, m) = ls.region_max(mid)?;
            let nn = nonneg(m);
            trace.push(TraceStep { delta: mid, max_psi: m, nonnegative: nn });
            if nn {
                lo = mid;
            } else {
                hi = mid;
                hi_arg = (t, m);
            }
        }
    }
    let witness = psi_tot(&ls.model, &hi_arg.0, ls.kind).or_else(|e| match e {
        ExponentError::Domain(_) => psi_tot(&ls.model, &vec![0.0; ls.model.u()], ls.kind),
        other => Err(other),
    })?;
    let grid_max = ls.grid_max(hi - rho).map(|(_, v)| v).unwrap_or(f64::NEG_INFINITY);
    Ok(ThresholdResult {
        delta_c: hi,
        kind: ls.kind,
        model: ls.model.clone(),
        witness_tau: hi_arg.0.clone(),
        witness,
        grid_resolution: ls.per_axis,
        refine_tol: tol,
        delta_lo: lo,
        grid_max,
        refined_max: hi_arg.1,
        peak_tau: ls.peak.0.clone(),
        peak_psi: ls.peak.1,
        trace,
    })
}

/// Output of [`optimal_weight`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimalWeight {
    pub omega_star: f64,
    pub delta_star: f64,
    /// `(ω, δ_c(ω))` on the log-spaced scan followed by the golden-section probes.
    pub curve: Vec<(f64, f64)>,
    /// Whether the scanned curve has a single sign change of its discrete slope.
    pub unimodal: bool,
}

/// Settings shared by the weight search and the ordering report.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchSettings {
    pub grid: usize,
    pub tol: f64,
    /// Points of the log-spaced ω scan.
    pub scan_points: usize,
}

impl Default for SearchSettings {
    fn default() -> Self {
        SearchSettings { grid: 60, tol: 1e-6, scan_points: 17 }
    }
}

/// Weight ratio `ω = w2/w1` minimizing `δ_c` for a two-class model.
///
/// Scans `δ_c` on a log-spaced grid over `omega_range`, then refines the
/// minimizer by golden-section search in `log ω` down to `search_tol`
/// (relative). Infeasible weights count as `δ_c = +∞`.
pub fn optimal_weight(
    model: &SparsityModel,
    kind: ThresholdKind,
    omega_range: (f64, f64),
    search_tol: f64,
    settings: SearchSettings,
) -> Result<OptimalWeight, ThresholdError> {
    if model.u() != 2 {
        return Err(ThresholdError::InvalidArgument(format!("optimal_weight needs a two-class model, got u = {}", model.u())));
    }
    let (lo, hi) = omega_range;
    if !(lo > 0.0 && hi > lo) {
        return Err(ThresholdError::InvalidArgument(format!("invalid omega range ({lo}, {hi})")));
    }
    let n = settings.scan_points.max(3);
    let eval = |omega: f64| -> Result<f64, ThresholdError> {
        let m = model.with_omega(&[1.0, omega])?;
        match delta_c(&m, kind, settings.grid, settings.tol) {
            Ok(r) => Ok(r.delta_c),
            Err(ThresholdError::Infeasible { .. }) => Ok(f64::INFINITY),
            Err(e) => Err(e),
        }
    };
    let (llo, lhi) = (lo.ln(), hi.ln());
    let omegas: Vec<f64> = (0..n).map(|i| (llo + (lhi - llo) * i as f64 / (n - 1) as f64).exp()).collect();
    let values: Result<Vec<f64>, ThresholdError> = omegas.iter().map(|&w| eval(w)).collect();
    let values = values?;
    let mut curve: Vec<(f64, f64)> = omegas.iter().cloned().zip(values.iter().cloned()).collect();
    let unimodal = slope_sign_changes(&values) <= 1;
    let imin = (0..n).fold(0, |b, i| if values[i] < values[b] { i } else { b });

    let mut a = omegas[imin.saturating_sub(1)].ln();
    let mut b = omegas[(imin + 1).min(n - 1)].ln();
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - phi * (b - a);
    let mut d = a + phi * (b - a);
    let mut fc = eval(c.exp())?;
    let mut fd = eval(d.exp())?;
    curve.push((c.exp(), fc));
    curve.push((d.exp(), fd));
    while (b - a) > search_tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = eval(c.exp())?;
            curve.push((c.exp(), fc));
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = eval(d.exp())?;
            curve.push((d.exp(), fd));
        }
    }
    let mut best = (omegas[imin], values[imin]);
    for &(w, v) in &curve {
        if v < best.1 {
            best = (w, v);
        }
    }
    Ok(OptimalWeight { omega_star: best.0, delta_star: best.1, curve, unimodal })
}

/// Number of sign changes of the discrete slope (flat steps ignored).
pub fn slope_sign_changes(values: &[f64]) -> usize {
    let signs: Vec<f64> = values
        .windows(2)
        .map(|w| w[1] - w[0])
        .filter(|d| d.abs() > 1e-9)
        .map(f64::signum)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Thresholds of all three kinds for one model; `None` means infeasible (`+∞`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderingReport {
    pub weak: Option<f64>,
    pub sectional: Option<f64>,
    pub strong: Option<f64>,
    /// `weak ≤ sectional ≤ strong` within the bisection tolerance.
    pub holds: bool,
}

/// Computes weak, sectional and strong thresholds and checks their ordering.
pub fn threshold_ordering_check(model: &SparsityModel, settings: SearchSettings) -> Result<OrderingReport, ThresholdError> {
    let mut out = [None; 3];
    for (slot, kind) in out.iter_mut().zip(ThresholdKind::ALL) {
        *slot = match delta_c(model, kind, settings.grid, settings.tol) {
            Ok(r) => Some(r.delta_c),
            Err(ThresholdError::Infeasible { .. }) => None,
            Err(e) => return Err(e),
        };
    }
    let v = |o: Option<f64>| o.unwrap_or(f64::INFINITY);
    let t = settings.tol;
    let holds = v(out[0]) <= v(out[1]) + t && v(out[1]) <= v(out[2]) + t;
    Ok(OrderingReport { weak: out[0], sectional: out[1], strong: out[2], holds })
}

/// `C_{ε1,ε2} = (1 + μ)/(1 − μ)` with `μ = min(ε1p1/(1−p1), ε2p2/(1−p2))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RobustnessConstant {
    pub eps1: f64,
    pub eps2: f64,
    pub p1: f64,
    pub p2: f64,
    pub mu: f64,
    pub value: f64,
}

/// Robustness constant of the two-class weighted ℓ1 error bound.
pub fn robustness_constant(eps1: f64, eps2: f64, p1: f64, p2: f64) -> Result<RobustnessConstant, ThresholdError> {
    for (name, v) in [("eps1", eps1), ("eps2", eps2), ("p1", p1), ("p2", p2)] {
        if !(0.0..=1.0).contains(&v) {
            return Err(ThresholdError::InvalidArgument(format!("{name} = {v} outside [0,1]")));
        }
    }
    let ratio = |e: f64, p: f64| if e == 0.0 { 0.0 } else { e * p / (1.0 - p) };
    let mu = ratio(eps1, p1).min(ratio(eps2, p2));
    if !(mu < 1.0) {
        return Err(ThresholdError::InvalidArgument(format!("mu = {mu} ≥ 1: the robustness bound is vacuous")));
    }
    Ok(RobustnessConstant { eps1, eps2, p1, p2, mu, value: (1.0 + mu) / (1.0 - mu) })
}

/// Both sides of the robustness inequality for one recovery.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RobustnessCheck {
    /// `‖(x0 − x̂)_{K1}‖₁ + ω‖(x0 − x̂)_{K2}‖₁`.
    pub lhs: f64,
    /// `C·(‖(x0)_{K1∖L1}‖₁ + ω‖(x0)_{K2∖L2}‖₁)`.
    pub rhs: f64,
    pub holds: bool,
}

/// Evaluates the robustness inequality.
///
/// `class_of[j] ∈ {0, 1}` assigns index `j` to `K1` or `K2`. `L_i` is taken as
/// the `l_sizes[i]` largest-magnitude entries of `x0` inside `K_i`, which gives
/// the smallest right-hand side. `rel_slack` absorbs solver round-off.
pub fn robustness_check(
    x0: &[f64],
    x_hat: &[f64],
    class_of: &[usize],
    omega: f64,
    l_sizes: [usize; 2],
    c: f64,
    rel_slack: f64,
) -> RobustnessCheck {
    let w = [1.0, omega];
    let lhs: f64 = (0..x0.len()).map(|j| w[class_of[j]] * (x0[j] - x_hat[j]).abs()).sum();
    let mut tail = 0.0;
    for (cls, &l) in l_sizes.iter().enumerate() {
        let mut mags: Vec<f64> = (0..x0.len()).filter(|&j| class_of[j] == cls).map(|j| x0[j].abs()).collect();
        mags.sort_by(|a, b| b.partial_cmp(a).unwrap());
        tail += w[cls] * mags.iter().skip(l).sum::<f64>();
    }
    let rhs = c * tail;
    RobustnessCheck { lhs, rhs, holds: lhs <= rhs * (1.0 + rel_slack) + rel_slack }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_class_weak_threshold() {
        let m = SparsityModel::single(0.1).unwrap();
        let r = delta_c(&m, ThresholdKind::Weak, 60, 1e-6).unwrap();
        assert!((r.delta_c - 0.328_793_5).abs() < 1e-4, "{}", r.delta_c);
        assert!(r.peak_psi.abs() < 1e-9);
    }

    #[test]
    fn trace_is_monotone_and_bracket_is_consistent() {
        let m = SparsityModel::new(&[0.5, 0.5], &[0.4, 0.05], &[1.0, 2.5]).unwrap();
        let r = delta_c(&m, ThresholdKind::Weak, 50, 1e-5).unwrap();
        let mut steps = r.trace.clone();
        steps.sort_by(|a, b| a.delta.partial_cmp(&b.delta).unwrap());
        for w in steps.windows(2) {
            assert!(w[1].max_psi <= w[0].max_psi + 1e-12);
        }
        assert!(r.delta_c - r.delta_lo <= 1e-5);
        assert!(r.refined_max < -PSI_SLACK);
        assert!((r.delta_c - 0.476_844).abs() < 2e-4, "{}", r.delta_c);
    }

    #[test]
    fn no_nonzeros_means_tiny_threshold() {
        let m = SparsityModel::new(&[0.5, 0.5], &[0.0, 0.0], &[1.0, 1.0]).unwrap();
        let r = delta_c(&m, ThresholdKind::Weak, 50, 1e-6).unwrap();
        assert!(r.delta_c <= 1e-5);
    }

    #[test]
    fn robustness_examples() {
        assert_eq!(robustness_constant(0.0, 0.0, 0.3, 0.2).unwrap().value, 1.0);
        let c = robustness_constant(0.5, 0.5, 0.5, 0.5).unwrap();
        assert_eq!(c.mu, 0.5);
        assert_eq!(c.value, 3.0);
        let c = robustness_constant(0.1, 0.2, 0.4, 0.05).unwrap();
        assert!((c.mu - 1.0 / 95.0).abs() < 1e-17);
        assert!((c.value - 48.0 / 47.0).abs() < 1e-15);
        assert!(robustness_constant(1.0, 1.0, 0.6, 0.6).is_err());
    }

    #[test]
    fn robustness_check_sides() {
        let x0 = [3.0, 0.1, 0.0, 2.0];
        let xh = [3.0, 0.0, 0.0, 2.0];
        let r = robustness_check(&x0, &xh, &[0, 0, 1, 1], 2.0, [1, 1], 1.0, 0.0);
        assert!((r.lhs - 0.1).abs() < 1e-15);
        assert!((r.rhs - 0.1).abs() < 1e-15);
        assert!(r.holds);
    }

    #[test]
    fn slope_sign_changes_counts() {
        assert_eq!(slope_sign_changes(&[3.0, 2.0, 1.0, 2.0, 3.0]), 1);
        assert_eq!(slope_sign_changes(&[3.0, 2.0, 1.0, 1.0, 3.0]), 1);
        assert_eq!(slope_sign_changes(&[1.0, 2.0, 1.0, 2.0]), 2);
    }
}
