//! Scalar special functions and a bracketed root finder.
//!
//! Everything here is pure. The Gaussian tail functions are written so that
//! `log Φ(x)` and the Mills ratio `φ(x)/Φ(x)` stay finite and accurate far
//! into the lower tail, where the naive quotient underflows to `0/0`.

use std::f64::consts::{FRAC_1_SQRT_2, LN_2, PI};

use thiserror::Error;

/// `2/√π`.
pub const TWO_OVER_SQRT_PI: f64 = std::f64::consts::FRAC_2_SQRT_PI;
/// `1/√(2π)`.
pub const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;
/// `√(2/π)`.
const SQRT_2_OVER_PI: f64 = 0.797_884_560_802_865_4;
/// `ln √(2π)`.
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// `G(x) = (2/√π)∫₀ˣ e^{−y²} dy`, i.e. `erf(x)`, extended to negative `x` by oddness.
pub fn erf_scaled(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    libm::erf(x)
}

/// `erfc(x) = 1 − erf(x)` without cancellation.
pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}

/// Scaled complementary error function `e^{x²}·erfc(x)`.
///
/// Finite for every finite `x ≥ 0` (decays like `1/(x√π)`); for negative
/// arguments it grows like `2e^{x²}` and overflows below about `−26.6`.
pub fn erfcx(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x < 4.0 {
        let (hi, lo) = square_split(x);
        return libm::exp(hi) * libm::exp(lo) * libm::erfc(x);
    }
    if x.is_infinite() {
        return 0.0;
    }
    // erfc(x)e^{x²}√π = 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + …)))), modified Lentz.
    let tiny = 1e-300;
    let mut f = x;
    let mut c = x;
    let mut d = 0.0;
    for k in 1..500 {
        let a = 0.5 * k as f64;
        d = x + a * d;
        if d.abs() < tiny {
            d = tiny;
        }
        c = x + a / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    1.0 / (f * PI.sqrt())
}

/// `x²` as an unevaluated sum `hi + lo` (exact via fused multiply-add).
fn square_split(x: f64) -> (f64, f64) {
    let hi = x * x;
    let lo = x.mul_add(x, -hi);
    (hi, lo)
}

/// `g(x) = (2/√π)e^{−x²}` on `x ≥ 0`, zero for `x < 0`.
pub fn half_normal_density(x: f64) -> f64 {
    if x < 0.0 {
        0.0
    } else {
        TWO_OVER_SQRT_PI * (-x * x).exp()
    }
}

/// `g(x)/G(x)` for `x > 0`, the ratio in the external-angle stationarity equation.
///
/// Tends to `1/x` as `x → 0⁺` and to zero super-exponentially as `x → ∞`.
pub fn half_normal_ratio(x: f64) -> f64 {
    if x <= 0.0 {
        return f64::INFINITY;
    }
    if x < 1e-8 {
        // erf(x) = (2/√π)(x − x³/3 + …)
        return 1.0 / (x * (1.0 - x * x / 3.0)) * (-x * x).exp();
    }
    half_normal_density(x) / erf_scaled(x)
}

/// `log G(x)` for `x > 0` without cancellation at either end.
pub fn log_erf(x: f64) -> f64 {
    if x <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if x > 3.0 {
        (-erfc(x)).ln_1p()
    } else {
        erf_scaled(x).ln()
    }
}

/// Standard normal density `φ(x)`.
pub fn std_normal_pdf(x: f64) -> f64 {
    if x.is_infinite() {
        return 0.0;
    }
    let (hi, lo) = square_split(x);
    INV_SQRT_2PI * (-0.5 * hi).exp() * (-0.5 * lo).exp()
}

/// Standard normal cdf `Φ(x)`, relative error near machine precision for `|x| ≤ 40`.
pub fn std_normal_cdf(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x >= 0.0 {
        1.0 - 0.5 * erfc(x * FRAC_1_SQRT_2)
    } else if x > -1.0 {
        0.5 * erfc(-x * FRAC_1_SQRT_2)
    } else {
        let (hi, lo) = square_split(x);
        0.5 * (-0.5 * hi).exp() * (-0.5 * lo).exp() * erfcx(-x * FRAC_1_SQRT_2)
    }
}

/// `(φ(x), Φ(x))`.
pub fn std_normal_pdf_cdf(x: f64) -> (f64, f64) {
    (std_normal_pdf(x), std_normal_cdf(x))
}

/// `log Φ(x)`, finite for every finite `x`.
pub fn log_std_normal_cdf(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    if x < -5.0 {
        let (hi, lo) = square_split(x);
        -LN_2 - 0.5 * hi - 0.5 * lo + erfcx(-x * FRAC_1_SQRT_2).ln()
    } else if x > 0.0 {
        (-0.5 * erfc(x * FRAC_1_SQRT_2)).ln_1p()
    } else {
        std_normal_cdf(x).ln()
    }
}

/// Mills-type ratio `φ(x)/Φ(x)`; behaves like `−x` as `x → −∞`.
pub fn normal_hazard(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x == f64::NEG_INFINITY {
        return f64::INFINITY;
    }
    if x < -5.0 {
        SQRT_2_OVER_PI / erfcx(-x * FRAC_1_SQRT_2)
    } else {
        (-0.5 * x * x - LN_SQRT_2PI - log_std_normal_cdf(x)).exp()
    }
}

/// Cumulant generating function of a standard half-normal variable,
/// `Λ₁(z) = log E[e^{z|N|}] = z²/2 + log 2 + log Φ(z)`.
///
/// In the lower tail the `z²/2` terms cancel analytically, leaving
/// `log erfcx(−z/√2)`, which is evaluated directly.
pub fn half_normal_cgf(z: f64) -> f64 {
    if z < -5.0 {
        erfcx(-z * FRAC_1_SQRT_2).ln()
    } else {
        0.5 * z * z + LN_2 + log_std_normal_cdf(z)
    }
}

/// Derivative of [`half_normal_cgf`]: `Λ₁′(z) = z + φ(z)/Φ(z)`, the mean of the
/// exponentially tilted half-normal.
pub fn half_normal_cgf_deriv(z: f64) -> f64 {
    z + normal_hazard(z)
}

/// Entropy `H(x) = −x log x − (1−x) log(1−x)` in nats.
pub fn entropy(x: f64) -> Result<f64, DomainError> {
    if !(0.0..=1.0).contains(&x) {
        return Err(DomainError(format!("entropy argument {x} outside [0,1]")));
    }
    Ok(xlogx(x) + xlogx(1.0 - x))
}

/// `−x log x` with the continuous extension at 0.
fn xlogx(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        -x * x.ln()
    }
}

/// Argument outside the domain of a function.
#[derive(Debug, Clone, Error, PartialEq)]
#[error("domain error: {0}")]
pub struct DomainError(pub String);

/// Closed interval handed to [`find_root`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
}

impl Bracket {
    pub fn new(lo: f64, hi: f64) -> Self {
        assert!(lo < hi, "bracket requires lo < hi, got [{lo}, {hi}]");
        Bracket { lo, hi }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    /// One geometric expansion step that never moves an endpoint across zero.
    ///
    /// Same-sign brackets scale the far endpoint up and the near endpoint down
    /// by two, so `(ε, B)` becomes `(ε/2, 2B)` and `(−B, −ε)` becomes
    /// `(−2B, −ε/2)`. Brackets straddling zero double both endpoints.
    fn expand(self) -> Bracket {
        let (lo, hi) = (self.lo, self.hi);
        if lo >= 0.0 {
            Bracket { lo: lo * 0.5, hi: if hi == 0.0 { 1.0 } else { hi * 2.0 } }
        } else if hi <= 0.0 {
            Bracket { lo: lo * 2.0, hi: hi * 0.5 }
        } else {
            Bracket { lo: lo * 2.0, hi: hi * 2.0 }
        }
    }
}

/// Failure modes of [`find_root`].
#[derive(Debug, Clone, Error, PartialEq)]
pub enum RootError {
    #[error("no sign change on [{lo}, {hi}] after bracket expansion")]
    NoSignChange { lo: f64, hi: f64 },
    #[error("function is not finite at x = {x}")]
    NonFinite { x: f64 },
}

/// Maximum geometric bracket expansions before giving up.
pub const MAX_EXPANSIONS: usize = 60;

/// Root found by [`find_root`] together with its final bracket.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub x: f64,
    pub bracket: Bracket,
}

/// Bracketed root of a continuous `f`.
///
/// Expands the bracket geometrically (at most [`MAX_EXPANSIONS`] times) until
/// the endpoints have opposite signs, then runs regula falsi with the Illinois
/// modification, falling back to bisection whenever the interpolant would
/// shrink the bracket by less than half. Terminates when the bracket is no
/// wider than `tol` or `f` hits zero exactly. Deterministic.
pub fn find_root<F: FnMut(f64) -> f64>(mut f: F, bracket: Bracket, tol: f64) -> Result<Root, RootError> {
    let mut eval = |x: f64| -> Result<f64, RootError> {
        let v = f(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(RootError::NonFinite { x })
        }
    };
    let mut b = bracket;
    let mut flo = eval(b.lo)?;
    let mut fhi = eval(b.hi)?;
    let mut expansions = 0;
    while flo.signum() == fhi.signum() && flo != 0.0 && fhi != 0.0 {
        if expansions == MAX_EXPANSIONS {
            return Err(RootError::NoSignChange { lo: b.lo, hi: b.hi });
        }
        b = b.expand();
        flo = eval(b.lo)?;
        fhi = eval(b.hi)?;
        expansions += 1;
    }
    if flo == 0.0 {
        return Ok(Root { x: b.lo, bracket: Bracket { lo: b.lo, hi: b.lo } });
    }
    if fhi == 0.0 {
        return Ok(Root { x: b.hi, bracket: Bracket { lo: b.hi, hi: b.hi } });
    }

    let (mut lo, mut hi) = (b.lo, b.hi);
    // Which side was retained on the previous step: -1 lo, +1 hi, 0 none.
    let mut side = 0i8;
    for _ in 0..400 {
        let width = hi - lo;
        if width <= tol {
            break;
        }
        let mut x = (lo * fhi - hi * flo) / (fhi - flo);
        if !(x > lo && x < hi) || !x.is_finite() {
            x = 0.5 * (lo + hi);
        }
        // Guard against stagnation: keep at least a bisection's worth of progress
        // every other step by bisecting when interpolation hugs an endpoint.
        let min_step = 0.25 * width;
        if (x - lo) < 1e-3 * width || (hi - x) < 1e-3 * width {
            x = if (x - lo) < (hi - x) { lo + min_step.min(0.5 * width) } else { hi - min_step.min(0.5 * width) };
        }
        let fx = eval(x)?;
        if fx == 0.0 {
            return Ok(Root { x, bracket: Bracket { lo: x, hi: x } });
        }
        if fx.signum() == flo.signum() {
            lo = x;
            flo = fx;
            if side == -1 {
                fhi *= 0.5;
            }
            side = -1;
        } else {
            hi = x;
            fhi = fx;
            if side == 1 {
                flo *= 0.5;
            }
            side = 1;
        }
        // If the step failed to halve the bracket, bisect once.
        if hi - lo > 0.5 * width {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let fm = eval(mid)?;
            if fm == 0.0 {
                return Ok(Root { x: mid, bracket: Bracket { lo: mid, hi: mid } });
            }
            if fm.signum() == flo.signum() {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
                fhi = fm;
            }
            side = 0;
        }
    }
    let x = if flo.abs() < fhi.abs() { lo } else { hi };
    Ok(Root { x, bracket: Bracket { lo, hi } })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn erf_oracle_values() {
        assert_eq!(erf_scaled(0.0), 0.0);
        assert_eq!(erf_scaled(f64::INFINITY), 1.0);
        assert!(rel(erf_scaled(1.0), 0.842_700_792_949_714_869_34) < 1e-15);
        assert!(rel(erf_scaled(0.1), 0.112_462_916_018_284_898_4) < 1e-15);
        assert!(rel(erfc(5.0), 1.537_459_794_428_034_850_2e-12) < 1e-14);
        assert!(rel(erfc(26.0), 5.663_192_408_856_142_846_5e-296) < 1e-13);
    }

    #[test]
    fn erfcx_across_the_switch() {
        for (x, v) in [
            (1.0, 0.427_583_576_155_807_004_41),
            (2.5, 0.210_806_364_061_143_580_65),
            (4.0, 0.136_999_457_625_061_389_89),
            (10.0, 0.056_140_992_743_822_585_858),
            (30.0, 0.018_795_888_861_416_751_497),
            (100.0, 0.005_641_613_782_989_432_903_6),
        ] {
            assert!(rel(erfcx(x), v) < 2e-15, "erfcx({x}) = {}", erfcx(x));
        }
    }

    #[test]
    fn normal_oracle_values() {
        let (p, c) = std_normal_pdf_cdf(0.0);
        assert!(rel(p, INV_SQRT_2PI) < 1e-16);
        assert_eq!(c, 0.5);
        assert_eq!(std_normal_pdf_cdf(f64::INFINITY), (0.0, 1.0));
        let (p, c) = std_normal_pdf_cdf(1.0);
        assert!(rel(p, 0.241_970_724_519_143_349_8) < 1e-15);
        assert!(rel(c, 0.841_344_746_068_542_948_59) < 1e-15);
        for (x, v) in [
            (-1.0, 0.158_655_253_931_457_051_41),
            (-5.0, 2.866_515_718_791_939_116_7e-7),
            (-10.0, 7.619_853_024_160_526_066e-24),
            (-20.0, 2.753_624_118_606_233_695_1e-89),
            (-37.0, 5.725_571_222_524_576_822_7e-300),
        ] {
            assert!(rel(std_normal_cdf(x), v) < 1e-14, "Φ({x}) = {}", std_normal_cdf(x));
        }
    }

    #[test]
    fn log_cdf_and_hazard_in_the_tail() {
        for (x, lv, h) in [
            (1.0, -0.172_753_779_023_449_889_53, 0.287_599_970_939_178_361_23),
            (-1.0, -1.841_021_645_009_263_505_8, 1.525_135_276_160_981_209_1),
            (-5.0, -15.064_998_393_988_725_736, 5.186_503_967_125_842_115_6),
            (-39.5, -784.720_879_104_317_577_2, 39.525_284_107_407_583_049),
            (3.0, -0.001_350_809_964_748_193_798_8, 0.004_437_839_042_125_663_793_3),
            (8.0, -6.220_960_574_271_786_058_5e-16, 5.052_271_083_536_895_430_9e-15),
        ] {
            assert!(rel(log_std_normal_cdf(x), lv) < 1e-13, "logΦ({x})");
            assert!(rel(normal_hazard(x), h) < 1e-13, "φ/Φ({x}) = {}", normal_hazard(x));
        }
        assert!(normal_hazard(-1e8).is_finite());
        assert!(rel(normal_hazard(-1e8), 1e8) < 1e-12);
    }

    #[test]
    fn cgf_is_continuous_at_the_switch() {
        let a = half_normal_cgf(-5.0 - 1e-12);
        let b = 0.5 * 25.0 + LN_2 + log_std_normal_cdf(-5.0);
        assert!((a - b).abs() < 1e-11);
        assert!((half_normal_cgf(0.0) - 0.0).abs() < 1e-16);
        // Λ₁'(0) = E|N| = √(2/π).
        assert!(rel(half_normal_cgf_deriv(0.0), SQRT_2_OVER_PI) < 1e-15);
        let z = -8.0;
        let direct = 0.5 * z * z + LN_2 + log_std_normal_cdf(z);
        assert!((half_normal_cgf(z) - direct).abs() < 1e-12);
    }

    #[test]
    fn half_normal_examples() {
        assert_eq!(half_normal_density(0.0), TWO_OVER_SQRT_PI);
        assert_eq!(half_normal_density(-1.0), 0.0);
        assert!(rel(half_normal_density(1.0), TWO_OVER_SQRT_PI * (-1.0f64).exp()) < 1e-16);
        assert!(rel(half_normal_ratio(1e-10), 1e10) < 1e-12);
        assert!(rel(half_normal_ratio(1.0), half_normal_density(1.0) / erf_scaled(1.0)) < 1e-15);
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(entropy(0.0).unwrap(), 0.0);
        assert_eq!(entropy(1.0).unwrap(), 0.0);
        assert!(rel(entropy(0.5).unwrap(), LN_2) < 1e-15);
        assert!(rel(entropy(0.25).unwrap(), 0.562_335_144_618_808_350_29) < 1e-15);
        assert!(entropy(1.5).is_err());
        assert!(entropy(-0.1).is_err());
    }

    #[test]
    fn g_matches_phi_identity() {
        for i in 0..400 {
            let x = i as f64 * 0.02;
            let lhs = erf_scaled(x);
            let rhs = 2.0 * std_normal_cdf(x * std::f64::consts::SQRT_2) - 1.0;
            assert!((lhs - rhs).abs() < 1e-12, "x = {x}");
        }
    }

    #[test]
    fn root_examples() {
        let r = find_root(|x| x - 1.0, Bracket::new(0.0, 2.0), 1e-12).unwrap();
        assert!((r.x - 1.0).abs() <= 1e-12);
        let r = find_root(|x| x * x - 2.0, Bracket::new(1.0, 2.0), 1e-12).unwrap();
        assert!((r.x - 2f64.sqrt()).abs() <= 1e-12);
        assert!(r.bracket.width() <= 1e-12);
    }

    #[test]
    fn root_expands_without_crossing_zero() {
        // Root far outside the initial positive bracket.
        let r = find_root(|x| x - 1e6, Bracket::new(1.0, 2.0), 1e-6).unwrap();
        assert!((r.x - 1e6).abs() < 1e-6);
        // Root close to zero inside a negative domain.
        let r = find_root(|s| s + 1e-9, Bracket::new(-1.0, -1e-3), 1e-18).unwrap();
        assert!((r.x + 1e-9).abs() < 1e-17);
    }

    #[test]
    fn root_errors() {
        assert!(matches!(
            find_root(|x| x * x + 1.0, Bracket::new(-1.0, 1.0), 1e-12),
            Err(RootError::NoSignChange { .. })
        ));
        assert!(matches!(
            find_root(|x| if x > 0.5 { f64::NAN } else { x - 1.0 }, Bracket::new(0.0, 2.0), 1e-12),
            Err(RootError::NonFinite { .. })
        ));
    }

    #[test]
    fn root_is_idempotent() {
        let f = |x: f64| x.cos() - x;
        let r = find_root(f, Bracket::new(0.0, 1.0), 1e-13).unwrap();
        let w = r.bracket.width().max(1e-15);
        let r2 = find_root(f, Bracket::new(r.bracket.lo - w, r.bracket.hi + w), 1e-13).unwrap();
        assert!((r.x - r2.x).abs() <= 1e-13);
    }
}
