//! Per-dimension decay exponents of the Grassmann-angle union bound.
//!
//! For a face `F` of the weighted cross-polytope that carries the support, and
//! a larger face `G ⊇ F` with `t_i = τ_i n` extra vertices in class `i`, the
//! union bound term behaves like `exp(n·ψ_tot)` with
//!
//! ```text
//! ψ_tot = ψ_com − ψ_int − ψ_ext
//! ```
//!
//! where `ψ_com` counts the faces `G`, `ψ_int` is the decay rate of the internal
//! angle `β(F, G)` and `ψ_ext` the decay rate of the external angle `ζ(G)`.
//! Only the `u`-class formulas are implemented; two-class models are simply
//! `u = 2`.

use std::f64::consts::LN_2;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kernels::{self, Bracket, RootError};

/// Tolerance on `Σγ_i = 1`.
pub const GAMMA_SUM_TOL: f64 = 1e-12;
/// Slack allowed when checking `τ_i ≤ γ_i(1 − p_i)`.
const TAU_SLACK: f64 = 1e-12;
/// Absolute bracket width for the stationarity roots.
const ROOT_TOL: f64 = 1e-15;

/// Errors raised while building a model or evaluating an exponent.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum ExponentError {
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("stationarity root failed: {0}")]
    RootFailure(#[from] RootError),
}

/// One class of a nonuniform sparse model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Class {
    /// Fraction of all indices that belong to the class.
    pub gamma: f64,
    /// Fraction of the class's indices that are nonzero.
    pub p: f64,
    /// Weight applied to the class in the ℓ1 objective.
    pub omega: f64,
}

impl Class {
    /// `γ(1 − p)`: the fraction of indices in this class that lie off the support.
    pub fn off_support(&self) -> f64 {
        self.gamma * (1.0 - self.p)
    }

    /// `γp`: the fraction of indices in this class that lie on the support.
    pub fn on_support(&self) -> f64 {
        self.gamma * self.p
    }
}

/// Nonuniform sparse model: `u` classes with fractions, sparsities and weights.
///
/// Weights are scale-free. [`SparsityModel::new`] stores them normalized so that
/// the smallest weight is 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SparsityModel {
    classes: Vec<Class>,
}

impl SparsityModel {
    /// Validates and normalizes a model given per-class vectors.
    pub fn new(gamma: &[f64], p: &[f64], omega: &[f64]) -> Result<Self, ExponentError> {
        let mut m = Self::new_unnormalized(gamma, p, omega)?;
        let wmin = m.classes.iter().map(|c| c.omega).fold(f64::INFINITY, f64::min);
        for c in &mut m.classes {
            c.omega /= wmin;
        }
        Ok(m)
    }

    /// Like [`SparsityModel::new`] but keeps the weights exactly as given.
    ///
    /// Every exponent is invariant under a common rescaling of the weights; this
    /// constructor exists so that invariance can be exercised directly.
    pub fn new_unnormalized(gamma: &[f64], p: &[f64], omega: &[f64]) -> Result<Self, ExponentError> {
        let u = gamma.len();
        if u == 0 {
            return Err(ExponentError::InvalidModel("at least one class is required".into()));
        }
        if p.len() != u || omega.len() != u {
            return Err(ExponentError::InvalidModel(format!(
                "per-class vectors have mismatched lengths (gamma {}, p {}, omega {})",
                u,
                p.len(),
                omega.len()
            )));
        }
        let sum: f64 = gamma.iter().sum();
        if (sum - 1.0).abs() > GAMMA_SUM_TOL {
            return Err(ExponentError::InvalidModel(format!("class fractions must sum to 1 (got {sum})")));
        }
        let mut classes = Vec::with_capacity(u);
        for i in 0..u {
            if !(0.0..=1.0).contains(&gamma[i]) {
                return Err(ExponentError::InvalidModel(format!("gamma[{i}] = {} outside [0,1]", gamma[i])));
            }
            if !(0.0..=1.0).contains(&p[i]) {
                return Err(ExponentError::InvalidModel(format!("p[{i}] = {} outside [0,1]", p[i])));
            }
            if !(omega[i] > 0.0 && omega[i].is_finite()) {
                return Err(ExponentError::InvalidModel(format!("omega[{i}] = {} must be positive", omega[i])));
            }
            classes.push(Class { gamma: gamma[i], p: p[i], omega: omega[i] });
        }
        Ok(SparsityModel { classes })
    }

    /// Single class with sparsity fraction `p` and unit weight.
    pub fn single(p: f64) -> Result<Self, ExponentError> {
        Self::new(&[1.0], &[p], &[1.0])
    }

    /// Two-class model `(γ1, 1−γ1)`, `(p1, p2)` with weight ratio `ω = w2/w1`.
    pub fn two_class(gamma1: f64, p1: f64, p2: f64, omega: f64) -> Result<Self, ExponentError> {
        Self::new(&[gamma1, 1.0 - gamma1], &[p1, p2], &[1.0, omega])
    }

    pub fn classes(&self) -> &[Class] {
        &self.classes
    }

    /// Number of classes `u`.
    pub fn u(&self) -> usize {
        self.classes.len()
    }

    pub fn gamma(&self) -> Vec<f64> {
        self.classes.iter().map(|c| c.gamma).collect()
    }

    pub fn p(&self) -> Vec<f64> {
        self.classes.iter().map(|c| c.p).collect()
    }

    pub fn omega(&self) -> Vec<f64> {
        self.classes.iter().map(|c| c.omega).collect()
    }

    /// Overall sparsity `ρ = Σ γ_i p_i`.
    pub fn rho(&self) -> f64 {
        self.classes.iter().map(Class::on_support).sum()
    }

    /// Upper limits `γ_i(1 − p_i)` of the fraction vector.
    pub fn tau_caps(&self) -> Vec<f64> {
        self.classes.iter().map(Class::off_support).collect()
    }

    /// Same model with a new weight vector.
    pub fn with_omega(&self, omega: &[f64]) -> Result<Self, ExponentError> {
        Self::new(&self.gamma(), &self.p(), omega)
    }

    /// Checks `0 ≤ τ_i ≤ γ_i(1 − p_i)` (with a 1e-12 slack).
    pub fn check_tau(&self, tau: &[f64]) -> Result<(), ExponentError> {
        if tau.len() != self.u() {
            return Err(ExponentError::Domain(format!("tau has {} entries, model has {} classes", tau.len(), self.u())));
        }
        for (i, (&t, c)) in tau.iter().zip(&self.classes).enumerate() {
            let cap = c.off_support();
            if !(t >= -TAU_SLACK && t <= cap + TAU_SLACK) {
                return Err(ExponentError::Domain(format!("tau[{i}] = {t} outside [0, {cap}]")));
            }
        }
        Ok(())
    }
}

impl fmt::Display for SparsityModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: Vec<f64>| v.iter().map(|x| format!("{x}")).collect::<Vec<_>>().join(",");
        write!(f, "gamma=({}) p=({}) omega=({})", join(self.gamma()), join(self.p()), join(self.omega()))
    }
}

/// Which family of supports and sign patterns must be recovered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ThresholdKind {
    /// A random support with random signs.
    Weak,
    /// All supports, random signs.
    Sectional,
    /// All supports and all signs.
    Strong,
}

impl ThresholdKind {
    pub const ALL: [ThresholdKind; 3] = [ThresholdKind::Weak, ThresholdKind::Sectional, ThresholdKind::Strong];

    pub fn as_str(&self) -> &'static str {
        match self {
            ThresholdKind::Weak => "weak",
            ThresholdKind::Sectional => "sectional",
            ThresholdKind::Strong => "strong",
        }
    }
}

impl fmt::Display for ThresholdKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for ThresholdKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "weak" => Ok(ThresholdKind::Weak),
            "sectional" => Ok(ThresholdKind::Sectional),
            "strong" => Ok(ThresholdKind::Strong),
            other => Err(format!("unknown threshold kind '{other}' (expected weak, sectional or strong)")),
        }
    }
}

/// Intermediate quantities of an exponent evaluation, kept for diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExponentWitness {
    /// Root of the external-angle stationarity equation (`∞` when `c = 0`).
    pub x0: f64,
    /// Root `s* < 0` of the internal-angle saddle-point equation (0 when `λ = 0`).
    pub s_star: f64,
    /// Saddle point `y = −s*Ω′/λ` of the internal-angle rate function.
    pub y: f64,
    /// `b = Σ ω_i² τ_i / λ`.
    pub b: f64,
    /// `Ω′ = Σ ω_i² γ_i p_i`.
    pub omega_prime: f64,
    /// `c = Σ ω_i² (τ_i + γ_i p_i)`.
    pub c: f64,
    /// `α_i = γ_i(1 − p_i) − τ_i`.
    pub alpha: Vec<f64>,
    /// `λ = Σ τ_i`.
    pub lambda: f64,
}

/// `(ψ_com, ψ_int, ψ_ext, ψ_tot)` at one fraction vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExponentPoint {
    pub psi_com: f64,
    pub psi_int: f64,
    pub psi_ext: f64,
    pub psi_tot: f64,
    pub witness: ExponentWitness,
}

/// Combinatorial exponent: growth rate of the number of faces `G ⊇ F`.
///
/// Weak: `Σ_i γ_i(1−p_i)·H(τ_i/(γ_i(1−p_i))) + τ_i·log 2` with `H` in nats, the
/// rate of `Π_i 2^{t_i} C(n_i − k_i, t_i)`. Sectional adds `Σ γ_i H(p_i)` (the
/// number of supports) and Strong additionally `Σ γ_i p_i log 2` (their sign
/// patterns).
pub fn psi_com(model: &SparsityModel, tau: &[f64], kind: ThresholdKind) -> Result<f64, ExponentError> {
    model.check_tau(tau)?;
    let mut total = 0.0;
    for (c, &t) in model.classes.iter().zip(tau) {
        let t = t.max(0.0);
        let cap = c.off_support();
        if cap > 0.0 {
            let r = (t / cap).min(1.0);
            total += cap * kernels::entropy(r).map_err(|e| ExponentError::Domain(e.0))?;
        }
        total += t * LN_2;
        if kind != ThresholdKind::Weak {
            total += c.gamma * kernels::entropy(c.p).map_err(|e| ExponentError::Domain(e.0))?;
        }
        if kind == ThresholdKind::Strong {
            total += c.on_support() * LN_2;
        }
    }
    Ok(total)
}

/// External-angle exponent and the stationarity root `x₀`.
///
/// Solves `2c = Σ_i ω_i α_i g(ω_i x)/(x G(ω_i x))` for `x₀ > 0` and returns
/// `c x₀² − Σ_i α_i log G(ω_i x₀)`. When every `α_i` vanishes the face is the
/// whole support and the angle is one (exponent 0, `x₀ = 0`). When `c = 0`
/// there is no face at all and the exponent is 0 with `x₀ = ∞`.
pub fn psi_ext(model: &SparsityModel, tau: &[f64]) -> Result<(f64, f64), ExponentError> {
    model.check_tau(tau)?;
    let (c, alpha) = ext_coefficients(model, tau);
    if alpha.iter().all(|&a| a <= 0.0) {
        return Ok((0.0, 0.0));
    }
    if c <= 0.0 {
        return Ok((0.0, f64::INFINITY));
    }
    let w = model.omega();
    // 2c x − Σ α_i ω_i R(ω_i x) with R = g/G; increasing in x, −∞ at 0⁺, +∞ at ∞.
    let f = |x: f64| {
        let mut s = 2.0 * c * x;
        for i in 0..w.len() {
            if alpha[i] > 0.0 {
                s -= alpha[i] * w[i] * kernels::half_normal_ratio(w[i] * x);
            }
        }
        s
    };
    let wmax = w.iter().cloned().fold(0.0, f64::max);
    let guess = 1.0 / wmax;
    let root = kernels::find_root(f, Bracket::new(0.5 * guess, 2.0 * guess), ROOT_TOL * guess.min(1.0))?;
    let x0 = root.x;
    let mut val = c * x0 * x0;
    for i in 0..w.len() {
        if alpha[i] > 0.0 {
            val -= alpha[i] * kernels::log_erf(w[i] * x0);
        }
    }
    Ok((val, x0))
}

fn ext_coefficients(model: &SparsityModel, tau: &[f64]) -> (f64, Vec<f64>) {
    let mut c = 0.0;
    let mut alpha = Vec::with_capacity(tau.len());
    for (cl, &t) in model.classes.iter().zip(tau) {
        let t = t.max(0.0);
        c += cl.omega * cl.omega * (t + cl.on_support());
        alpha.push((cl.off_support() - t).max(0.0));
    }
    (c, alpha)
}

/// Result of the internal-angle saddle-point computation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InternalSaddle {
    pub psi_int: f64,
    pub s_star: f64,
    pub y: f64,
    pub b: f64,
    pub omega_prime: f64,
    pub lambda: f64,
}

/// Internal-angle exponent with its saddle point `(s*, y)`.
///
/// With `λ = Στ_i`, `b = Σω_i²τ_i/λ` and `Ω′ = Σω_i²γ_ip_i`, solves
/// `M̂(s) = −s/Q(s) = λ/(λb + Ω′)` for `s* < 0`, where
/// `Q(s) = Σ_i (τ_i/λ) ω_i φ(ω_i s)/Φ(ω_i s)`. Then `y = s*(b − 1/M̂(s*))`,
/// `Λ*(y) = s*y − (1/λ)Σ_i τ_i Λ₁(ω_i s*)`, and the exponent is
/// `λ(Λ*(y) + λy²/(2Ω′) + log 2)`.
pub fn psi_int(model: &SparsityModel, tau: &[f64]) -> Result<(f64, f64, f64), ExponentError> {
    let s = internal_saddle(model, tau)?;
    Ok((s.psi_int, s.s_star, s.y))
}

/// Full saddle-point record behind [`psi_int`].
pub fn internal_saddle(model: &SparsityModel, tau: &[f64]) -> Result<InternalSaddle, ExponentError> {
    model.check_tau(tau)?;
    let tau: Vec<f64> = tau.iter().map(|t| t.max(0.0)).collect();
    let lambda: f64 = tau.iter().sum();
    let w = model.omega();
    let omega_prime: f64 = model.classes.iter().map(|c| c.omega * c.omega * c.on_support()).sum();
    if lambda <= 0.0 {
        return Ok(InternalSaddle { psi_int: 0.0, s_star: 0.0, y: 0.0, b: 0.0, omega_prime, lambda: 0.0 });
    }
    if omega_prime <= 0.0 {
        return Err(ExponentError::Domain(
            "internal-angle exponent undefined: empty support (Ω′ = 0) with λ > 0".into(),
        ));
    }
    let b: f64 = tau.iter().zip(&w).map(|(t, wi)| wi * wi * t).sum::<f64>() / lambda;
    let target = lambda / (lambda * b + omega_prime);
    let q = |s: f64| -> f64 {
        tau.iter().zip(&w).filter(|(t, _)| **t > 0.0).map(|(t, wi)| t / lambda * wi * kernels::normal_hazard(wi * s)).sum()
    };
    // h(s) = −s − target·Q(s): negative as s → 0⁻, grows like |s|Ω′/(λb+Ω′) as s → −∞.
    let h = |s: f64| -s - target * q(s);
    let wmax = w.iter().cloned().fold(0.0, f64::max);
    let guess = 1.0 / wmax;
    let root = kernels::find_root(h, Bracket::new(-2.0 * guess, -0.5 * guess), ROOT_TOL * guess.min(1.0))?;
    let s = root.x;
    let y = -s * omega_prime / lambda;
    let mut lambda_star = s * y;
    for (t, wi) in tau.iter().zip(&w) {
        if *t > 0.0 {
            lambda_star -= t / lambda * kernels::half_normal_cgf(wi * s);
        }
    }
    let psi = lambda * (lambda_star + lambda * y * y / (2.0 * omega_prime) + LN_2);
    Ok(InternalSaddle { psi_int: psi, s_star: s, y, b, omega_prime, lambda })
}

/// All three exponents and `ψ_tot = ψ_com − ψ_int − ψ_ext`.
pub fn psi_tot(model: &SparsityModel, tau: &[f64], kind: ThresholdKind) -> Result<ExponentPoint, ExponentError> {
    let com = psi_com(model, tau, kind)?;
    let (ext, x0) = psi_ext(model, tau)?;
    let sad = internal_saddle(model, tau)?;
    let (c, alpha) = ext_coefficients(model, tau);
    Ok(ExponentPoint {
        psi_com: com,
        psi_int: sad.psi_int,
        psi_ext: ext,
        psi_tot: com - sad.psi_int - ext,
        witness: ExponentWitness {
            x0,
            s_star: sad.s_star,
            y: sad.y,
            b: sad.b,
            omega_prime: sad.omega_prime,
            c,
            alpha,
            lambda: sad.lambda,
        },
    })
}

/// `ψ_tot` alone, with the empty-support degeneracy (Ω′ = 0, λ > 0) mapped to `−∞`.
///
/// This is the objective scanned by the threshold search. A model without
/// nonzeros has nothing to recover, so every such point counts as safe.
pub fn psi_tot_value(model: &SparsityModel, tau: &[f64], kind: ThresholdKind) -> Result<f64, ExponentError> {
    match psi_tot(model, tau, kind) {
        Ok(p) => Ok(p.psi_tot),
        Err(ExponentError::Domain(msg)) if msg.contains("Ω′ = 0") => Ok(f64::NEG_INFINITY),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig2() -> SparsityModel {
        SparsityModel::new(&[0.5, 0.5], &[0.4, 0.05], &[1.0, 2.5]).unwrap()
    }

    #[test]
    fn model_validation() {
        let e = SparsityModel::new(&[0.6, 0.5], &[0.1, 0.1], &[1.0, 1.0]).unwrap_err();
        assert!(e.to_string().contains("class fractions must sum to 1"));
        assert!(SparsityModel::new(&[1.0], &[1.1], &[1.0]).is_err());
        assert!(SparsityModel::new(&[1.0], &[0.1], &[0.0]).is_err());
        assert!(SparsityModel::new(&[0.5, 0.5], &[0.1], &[1.0, 1.0]).is_err());
        let m = SparsityModel::new(&[0.5, 0.5], &[0.1, 0.2], &[4.0, 2.0]).unwrap();
        assert_eq!(m.omega(), vec![2.0, 1.0]);
    }

    #[test]
    fn psi_com_examples() {
        let m = fig2();
        for k in ThresholdKind::ALL {
            if k == ThresholdKind::Weak {
                assert_eq!(psi_com(&m, &[0.0, 0.0], k).unwrap(), 0.0);
            }
        }
        let m0 = SparsityModel::new(&[0.5, 0.5], &[0.0, 0.0], &[1.0, 1.0]).unwrap();
        let v = psi_com(&m0, &[0.5, 0.0], ThresholdKind::Weak).unwrap();
        assert!((v - 0.5 * LN_2).abs() < 1e-15);
        // Extended-precision oracle values (binary-entropy reading of the count).
        let w = psi_com(&m, &[0.1, 0.2], ThresholdKind::Weak).unwrap();
        let s = psi_com(&m, &[0.1, 0.2], ThresholdKind::Sectional).unwrap();
        let st = psi_com(&m, &[0.1, 0.2], ThresholdKind::Strong).unwrap();
        assert!((w - 0.722_197_411_404_967_571_6).abs() < 1e-14);
        assert!((s - 1.157_960_866_582_532_068).abs() < 1e-14);
        assert!((st - 1.313_918_982_208_519_762_4).abs() < 1e-14);
        assert!(psi_com(&m, &[0.31, 0.2], ThresholdKind::Weak).is_err());
    }

    #[test]
    fn psi_com_matches_log_binomials() {
        // (1/n) log[2^t C(n−k, t)] → ψ_com for a single class.
        let m = SparsityModel::single(0.2).unwrap();
        let n = 200_000.0f64;
        let (k, t) = (0.2 * n, 0.3 * n);
        let lg = |x: f64| libm::lgamma(x + 1.0);
        let exact = (t * LN_2 + lg(n - k) - lg(t) - lg(n - k - t)) / n;
        let v = psi_com(&m, &[0.3], ThresholdKind::Weak).unwrap();
        assert!((v - exact).abs() < 1e-4, "{v} vs {exact}");
    }

    #[test]
    fn psi_ext_boundaries() {
        let m = fig2();
        let caps = m.tau_caps();
        assert_eq!(psi_ext(&m, &caps).unwrap().0, 0.0);
        let (v, x0) = psi_ext(&m, &[0.05, 0.1]).unwrap();
        assert!(v > 0.0 && x0 > 0.0);
        let no_support = SparsityModel::new(&[1.0], &[0.0], &[1.0]).unwrap();
        let (v, x0) = psi_ext(&no_support, &[0.0]).unwrap();
        assert_eq!(v, 0.0);
        assert!(x0.is_infinite());
    }

    #[test]
    fn psi_ext_root_matches_grid_scan() {
        let m = fig2();
        let tau = [0.05, 0.1];
        let (_, x0) = psi_ext(&m, &tau).unwrap();
        let (c, alpha) = ext_coefficients(&m, &tau);
        let w = m.omega();
        let f = |x: f64| 2.0 * c * x - (0..2).map(|i| alpha[i] * w[i] * kernels::half_normal_ratio(w[i] * x)).sum::<f64>();
        // Dense scan for the sign change, then linear interpolation.
        let mut prev = (1e-4, f(1e-4));
        let mut scan_root = f64::NAN;
        for i in 1..=200_000 {
            let x = 1e-4 + i as f64 * 1e-5;
            let v = f(x);
            if prev.1 < 0.0 && v >= 0.0 {
                scan_root = prev.0 + (x - prev.0) * (-prev.1) / (v - prev.1);
                break;
            }
            prev = (x, v);
        }
        assert!((scan_root - x0).abs() < 1e-8, "{scan_root} vs {x0}");
    }

    #[test]
    fn psi_int_zero_and_positive() {
        let m = fig2();
        assert_eq!(psi_int(&m, &[0.0, 0.0]).unwrap(), (0.0, 0.0, 0.0));
        let (v, s, y) = psi_int(&m, &[0.05, 0.1]).unwrap();
        assert!(v > 0.0 && s < 0.0 && y > 0.0);
        let empty = SparsityModel::single(0.0).unwrap();
        assert!(matches!(psi_int(&empty, &[0.1]), Err(ExponentError::Domain(_))));
    }

    /// The two-class internal exponent written out literally, with `ω` inside `φ`.
    fn two_class_psi_int(g: [f64; 2], p: [f64; 2], omega: f64, t: [f64; 2]) -> f64 {
        let lambda = t[0] + t[1];
        let b = (t[0] + omega * omega * t[1]) / lambda;
        let om = g[0] * p[0] + omega * omega * g[1] * p[1];
        let q = |s: f64| {
            (t[0] * kernels::std_normal_pdf(s) / kernels::std_normal_cdf(s)
                + omega * t[1] * kernels::std_normal_pdf(omega * s) / kernels::std_normal_cdf(omega * s))
                / lambda
        };
        let target = lambda / (lambda * b + om);
        let r = kernels::find_root(|s| -s - target * q(s), Bracket::new(-5.0, -1e-12), 1e-15).unwrap();
        let s = r.x;
        let y = s * (b - (lambda * b + om) / lambda);
        let l1 = |z: f64| z * z / 2.0 + (2.0 * kernels::std_normal_cdf(z)).ln();
        let ls = s * y - (t[0] * l1(s) + t[1] * l1(omega * s)) / lambda;
        lambda * (ls + lambda * y * y / (2.0 * om) + LN_2)
    }

    #[test]
    fn general_form_reproduces_two_class_form() {
        for &(p1, p2, om, t1, t2) in &[(0.4, 0.05, 2.5, 0.05, 0.1), (0.2, 0.1, 1.0, 0.2, 0.05), (0.3, 0.02, 5.0, 0.01, 0.3)] {
            let m = SparsityModel::new(&[0.5, 0.5], &[p1, p2], &[1.0, om]).unwrap();
            let (v, _, _) = psi_int(&m, &[t1, t2]).unwrap();
            let lit = two_class_psi_int([0.5, 0.5], [p1, p2], om, [t1, t2]);
            assert!((v - lit).abs() < 1e-11, "{v} vs {lit}");
        }
    }

    #[test]
    fn psi_int_swap_symmetry() {
        let a = SparsityModel::new(&[0.3, 0.7], &[0.2, 0.1], &[1.0, 1.0]).unwrap();
        let b = SparsityModel::new(&[0.7, 0.3], &[0.1, 0.2], &[1.0, 1.0]).unwrap();
        let va = psi_int(&a, &[0.1, 0.2]).unwrap().0;
        let vb = psi_int(&b, &[0.2, 0.1]).unwrap().0;
        assert!((va - vb).abs() < 1e-12);
    }

    #[test]
    fn psi_tot_composition_and_ordering() {
        let m = fig2();
        let z = psi_tot(&m, &[0.0, 0.0], ThresholdKind::Weak).unwrap();
        assert!(z.psi_tot.abs() < 1e-15 || z.psi_ext > 0.0);
        let tau = [0.1, 0.15];
        let w = psi_tot(&m, &tau, ThresholdKind::Weak).unwrap();
        let s = psi_tot(&m, &tau, ThresholdKind::Sectional).unwrap();
        let st = psi_tot(&m, &tau, ThresholdKind::Strong).unwrap();
        assert_eq!(w.psi_tot, w.psi_com - w.psi_int - w.psi_ext);
        assert!(w.psi_tot <= s.psi_tot && s.psi_tot <= st.psi_tot);
        let again = psi_tot(&m, &tau, ThresholdKind::Weak).unwrap();
        assert!((again.psi_tot - w.psi_tot).abs() < 1e-15);
    }

    #[test]
    fn weak_exponent_touches_zero_at_the_l1_threshold() {
        // Single class, p = 0.1: max over λ of ψ_tot is 0, attained at λ ≈ 0.2288.
        let m = SparsityModel::single(0.1).unwrap();
        let v = psi_tot(&m, &[0.228_793_5], ThresholdKind::Weak).unwrap().psi_tot;
        assert!(v.abs() < 1e-10, "{v}");
        for l in [0.15, 0.2, 0.25, 0.4] {
            assert!(psi_tot(&m, &[l], ThresholdKind::Weak).unwrap().psi_tot < 0.0);
        }
    }
}
