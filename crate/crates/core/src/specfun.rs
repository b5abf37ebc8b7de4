//! Special functions: `ln Γ`, Gegenbauer polynomials, Legendre functions of the
//! second kind and hypersphere surface areas.
//!
//! Every Gamma-ratio prefactor is assembled in log space and exponentiated
//! once, so factorials such as `(n_r + 2l + N − 2)!` never overflow for the
//! quantum numbers used here.

use std::f64::consts::PI;

use crate::error::{domain, Error, Result};

/// `ln √π`
pub const LN_SQRT_PI: f64 = 0.572_364_942_924_700_087_071_713_675_677;
/// `ln √(2π)`
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_741_780_329_736_406;

/// Below this argument `legendre_q` leaves the hypergeometric series for the
/// Heine integral.
pub const Q_HYPERGEOMETRIC_THRESHOLD: f64 = 1.1;

const STIRLING_SHIFT: f64 = 15.0;

// B_{2k} / (2k (2k-1)), k = 1..8
const STIRLING_COEFFS: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// `ln Γ(x)` for `x > 0`.
///
/// Arguments below 15 are shifted upward with `Γ(x+1) = xΓ(x)` and the
/// Stirling series is summed to eight terms.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(domain("ln_gamma", x, "x > 0"));
    }
    Ok(ln_gamma_pos(x))
}

pub(crate) fn ln_gamma_pos(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    if x == x.trunc() && x <= 23.0 {
        // (x−1)! is exact in f64 up to 22!
        return (2..x as u64).map(|k| k as f64).product::<f64>().ln();
    }
    let mut shifted = x;
    let mut product = 1.0;
    while shifted < STIRLING_SHIFT {
        product *= shifted;
        shifted += 1.0;
    }
    let inv = 1.0 / shifted;
    let inv2 = inv * inv;
    let mut series = 0.0;
    let mut power = inv;
    for c in STIRLING_COEFFS {
        series += c * power;
        power *= inv2;
    }
    let stirling = (shifted - 0.5) * shifted.ln() - shifted + LN_SQRT_2PI + series;
    stirling - product.ln()
}

/// Degree and superscript of a Gegenbauer polynomial `C_n^{(α)}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GegenbauerOrder {
    pub n: usize,
    pub alpha: f64,
}

impl GegenbauerOrder {
    pub fn new(n: usize, alpha: f64) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(domain("Gegenbauer superscript", alpha, "alpha > 0"));
        }
        Ok(Self { n, alpha })
    }
}

/// `C_n^{(α)}(x)` by the forward three-term recurrence.
pub fn gegenbauer(order: GegenbauerOrder, x: f64) -> Result<f64> {
    if !(x.abs() <= 1.0) {
        return Err(domain("Gegenbauer argument", x, "|x| <= 1"));
    }
    Ok(gegenbauer_unchecked(order.n, order.alpha, x))
}

pub(crate) fn gegenbauer_unchecked(n: usize, alpha: f64, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = 2.0 * alpha * x;
    for k in 2..=n {
        let kf = k as f64;
        let next = (2.0 * (kf + alpha - 1.0) * x * cur - (kf + 2.0 * alpha - 2.0) * prev) / kf;
        prev = cur;
        cur = next;
    }
    cur
}

/// `C_0^{(α)}(x), …, C_{n_max}^{(α)}(x)` in one recurrence pass.
pub fn gegenbauer_sequence(alpha: f64, n_max: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(1.0);
    if n_max == 0 {
        return out;
    }
    out.push(2.0 * alpha * x);
    for k in 2..=n_max {
        let kf = k as f64;
        let next = (2.0 * (kf + alpha - 1.0) * x * out[k - 1] - (kf + 2.0 * alpha - 2.0) * out[k - 2])
            / kf;
        out.push(next);
    }
    out
}

/// `C_n^{(α)}(1) = Γ(n+2α) / (n! Γ(2α))`.
pub fn gegenbauer_at_one(order: GegenbauerOrder) -> f64 {
    let GegenbauerOrder { n, alpha } = order;
    if n == 0 {
        return 1.0;
    }
    let nf = n as f64;
    (ln_gamma_pos(nf + 2.0 * alpha) - ln_gamma_pos(nf + 1.0) - ln_gamma_pos(2.0 * alpha)).exp()
}

/// `ln ∫₋₁¹ (1−ξ²)^{α−½} [C_n^{(α)}(ξ)]² dξ = ln[π Γ(n+2α) / (2^{2α−1} n! (n+α) Γ(α)²)]`.
pub fn ln_gegenbauer_norm_sq(n: usize, alpha: f64) -> f64 {
    let nf = n as f64;
    PI.ln() + ln_gamma_pos(nf + 2.0 * alpha)
        - (2.0 * alpha - 1.0) * std::f64::consts::LN_2
        - ln_gamma_pos(nf + 1.0)
        - (nf + alpha).ln()
        - 2.0 * ln_gamma_pos(alpha)
}

/// Degree and argument of `Q_ν(z)`, the Legendre function of the second kind.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LegendreQArg {
    pub nu: f64,
    pub z: f64,
}

impl LegendreQArg {
    pub fn new(nu: f64, z: f64) -> Result<Self> {
        check_nu(nu)?;
        if !(z > 1.0) || !z.is_finite() {
            return Err(domain("Legendre Q argument", z, "z > 1"));
        }
        Ok(Self { nu, z })
    }
}

fn check_nu(nu: f64) -> Result<()> {
    if !(nu > -1.0) || !nu.is_finite() {
        return Err(domain("Legendre Q degree", nu, "nu > -1"));
    }
    Ok(())
}

/// `Q_ν(z)` from the Gauss hypergeometric series in `1/z²`:
///
/// ```text
/// Q_ν(z) = √π Γ(ν+1) / (Γ(ν+3/2) (2z)^{ν+1}) · ₂F₁((ν+1)/2, (ν+2)/2; ν+3/2; 1/z²)
/// ```
///
/// Only valid for `z ≥ 1.1`; closer to the branch point the series is left to
/// the integral evaluator.
pub fn legendre_q_hyp(arg: LegendreQArg) -> Result<f64> {
    let LegendreQArg { nu, z } = arg;
    if !(z > 1.0) {
        return Err(domain("Legendre Q argument", z, "z > 1"));
    }
    if z < Q_HYPERGEOMETRIC_THRESHOLD {
        return Err(Error::DeferToIntegral {
            z,
            threshold: Q_HYPERGEOMETRIC_THRESHOLD,
        });
    }
    check_nu(nu)?;
    Ok(q_hypergeometric(nu, z))
}

fn q_hypergeometric(nu: f64, z: f64) -> f64 {
    let a = 0.5 * (nu + 1.0);
    let b = 0.5 * (nu + 2.0);
    let c = nu + 1.5;
    let x = 1.0 / (z * z);
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 0.0;
    // all terms are positive, so stopping on a tiny relative term is safe
    for _ in 0..20_000 {
        term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * x;
        sum += term;
        k += 1.0;
        if term < 1e-17 * sum {
            break;
        }
    }
    let ln_prefactor =
        LN_SQRT_PI + ln_gamma_pos(nu + 1.0) - ln_gamma_pos(nu + 1.5) - (nu + 1.0) * (2.0 * z).ln();
    ln_prefactor.exp() * sum
}

/// Heine integrand `(z + √(z²−1) cosh t)^{−ν−1}` with `z − 1` supplied directly.
struct Heine {
    z: f64,
    s: f64,
    power: f64,
    t_max: f64,
}

impl Heine {
    fn new(nu: f64, zm1: f64) -> Self {
        let z = 1.0 + zm1;
        let s = (zm1 * (2.0 + zm1)).sqrt();
        let power = nu + 1.0;
        // flat up to cosh t ≈ z/s, then decays like e^{-(ν+1)t}; the tail past
        // t_max is below 1e-17 of the integral
        let t_flat = (2.0 * (z + 1.6 * s) / s).ln();
        let t_max = t_flat + (1e17 / power).ln() / power + 1.0;
        Self { z, s, power, t_max }
    }

    #[inline]
    fn eval(&self, t: f64) -> f64 {
        (-self.power * (self.z + self.s * t.cosh()).ln()).exp()
    }
}

/// `Q_ν(z)` from the Heine integral `∫₀^∞ (z + √(z²−1) cosh t)^{−ν−1} dt`.
///
/// The range is truncated where the tail drops below `1e−17` of the value and
/// integrated with composite 16-point Gauss–Legendre, doubling the panel count
/// until two successive estimates agree to `1e−12`.
pub fn legendre_q_integral(arg: LegendreQArg) -> Result<f64> {
    check_nu(arg.nu)?;
    if !(arg.z > 1.0) {
        return Err(domain("Legendre Q argument", arg.z, "z > 1"));
    }
    heine_gauss(arg.nu, arg.z - 1.0)
}

fn heine_gauss(nu: f64, zm1: f64) -> Result<f64> {
    let heine = Heine::new(nu, zm1);
    let rule = crate::quadrature::gauss_legendre_cached(16);
    let composite = |panels: usize| -> f64 {
        let width = heine.t_max / panels as f64;
        (0..panels)
            .map(|i| {
                let a = i as f64 * width;
                rule.integrate(a, a + width, |t| heine.eval(t))
            })
            .sum()
    };
    let mut panels = (heine.t_max / 4.0).ceil().max(1.0) as usize;
    let mut previous = composite(panels);
    for _ in 0..12 {
        panels *= 2;
        let current = composite(panels);
        let delta = (current - previous).abs();
        if delta <= 1e-12 * current.abs() {
            return Ok(current);
        }
        previous = current;
    }
    Err(Error::Convergence {
        best: previous,
        err_estimate: f64::NAN,
        panels,
    })
}

/// Heine integral by the trapezoid rule on the even, strip-analytic integrand.
///
/// The integrand is analytic for `|Im t| < π`, so the error of step `h` is
/// `O(e^{−2π²/h})` and halving the step squares it.
fn heine_trapezoid(nu: f64, zm1: f64) -> f64 {
    let heine = Heine::new(nu, zm1);
    let mut h = 1.0;
    let mut sum = 0.5 * heine.eval(0.0);
    let mut k = 1.0;
    while k * h <= heine.t_max {
        sum += heine.eval(k * h);
        k += 1.0;
    }
    let mut estimate = h * sum;
    for _ in 0..6 {
        // add the midpoints of the current step
        let mut t = 0.5 * h;
        while t <= heine.t_max {
            sum += heine.eval(t);
            t += h;
        }
        h *= 0.5;
        let refined = h * sum;
        let delta = (refined - estimate).abs();
        estimate = refined;
        if delta <= 1e-8 * refined {
            break;
        }
    }
    estimate
}

/// `Q_ν(z)`: hypergeometric series for `z ≥ 1.1`, Heine integral below.
pub fn legendre_q(arg: LegendreQArg) -> Result<f64> {
    check_nu(arg.nu)?;
    if !(arg.z > 1.0) || !arg.z.is_finite() {
        return Err(domain("Legendre Q argument", arg.z, "z > 1"));
    }
    legendre_q_zm1(arg.nu, arg.z - 1.0)
}

/// `Q_ν(1 + zm1)` with the offset from the branch point passed explicitly, so
/// that near-diagonal kernel arguments keep their relative precision.
pub fn legendre_q_zm1(nu: f64, zm1: f64) -> Result<f64> {
    check_nu(nu)?;
    if !(zm1 > 0.0) || !zm1.is_finite() {
        return Err(domain("Legendre Q argument offset z-1", zm1, "z - 1 > 0"));
    }
    if 1.0 + zm1 >= Q_HYPERGEOMETRIC_THRESHOLD {
        Ok(q_hypergeometric(nu, 1.0 + zm1))
    } else {
        Ok(heine_trapezoid(nu, zm1))
    }
}

/// Surface area of the unit sphere `𝕊^d ⊂ ℝ^{d+1}`, `2π^{(d+1)/2} / Γ((d+1)/2)`.
pub fn sphere_surface(dim: u32) -> Result<f64> {
    if dim < 1 {
        return Err(domain("sphere dimension", dim as f64, "d >= 1"));
    }
    let half = 0.5 * (dim as f64 + 1.0);
    Ok(2.0 * (half * PI.ln() - ln_gamma_pos(half)).exp())
}
