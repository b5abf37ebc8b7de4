//! Fourier transform of the power-law potential `V(r) = A / r^ν` in `ℝ^N`,
//! in closed form and through its one-dimensional Gaussian representation.

use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::quadrature::{integrate_adaptive, QuadratureScheme};
use crate::specfun::{ln_gamma_pos, LN_SQRT_PI};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawPotential {
    pub strength: f64,
    pub nu: f64,
    pub dim: u32,
}

impl PowerLawPotential {
    pub fn new(strength: f64, nu: f64, dim: u32) -> Result<Self> {
        if dim < 2 {
            return Err(Error::QuantumNumbers(format!("dimension N = {dim} < 2")));
        }
        if !strength.is_finite() {
            return Err(domain("strength A", strength, "finite"));
        }
        if !(nu > 0.0 && nu < dim as f64) {
            return Err(domain("exponent nu", nu, "0 < nu < N"));
        }
        Ok(Self { strength, nu, dim })
    }

    /// Exponent of `p` in the transform, `−(N − ν)`.
    pub fn momentum_exponent(&self) -> f64 {
        self.nu - self.dim as f64
    }
}

fn check_p(p: f64) -> Result<()> {
    if !(p > 0.0) || !p.is_finite() {
        return Err(domain("momentum p", p, "p > 0"));
    }
    Ok(())
}

/// `U(p) = A 2^{N/2−ν} Γ((N−ν)/2) / Γ(ν/2) · p^{−(N−ν)}`.
pub fn potential_ft_closed(pot: &PowerLawPotential, p: f64) -> Result<f64> {
    check_p(p)?;
    let n = pot.dim as f64;
    let ln = (0.5 * n - pot.nu) * LN_2 + ln_gamma_pos(0.5 * (n - pot.nu)) - ln_gamma_pos(0.5 * pot.nu)
        + pot.momentum_exponent() * p.ln();
    Ok(pot.strength * ln.exp())
}

/// `∫₀^∞ x^{s−1} e^{−c x} dx` by quadrature, split at `x = 1/c`.
///
/// On `[0, 1/c]` the substitution `c x = u^{1/s}` removes the power
/// singularity; the tail is mapped to `[0, 1)` by `c x = 1 + t/(1−t)`.
pub fn power_exponential_integral(s: f64, c: f64, scheme: &QuadratureScheme) -> Result<f64> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(domain("power s", s, "s > 0"));
    }
    if !(c > 0.0) || !c.is_finite() {
        return Err(domain("rate c", c, "c > 0"));
    }
    let head = integrate_adaptive(|u| (-u.powf(1.0 / s)).exp() / s, &[0.0, 0.5, 1.0], scheme)?;
    let tail = integrate_adaptive(
        |t| {
            if t >= 1.0 {
                return 0.0;
            }
            let x = 1.0 + t / (1.0 - t);
            let ln = (s - 1.0) * x.ln() - x;
            ln.exp() / ((1.0 - t) * (1.0 - t))
        },
        &[0.0, 0.5, 0.9, 0.99, 1.0],
        scheme,
    )?;
    Ok((head.value + tail.value) * c.powf(-s))
}

/// `U(p) = A / (2^{N/2} Γ(ν/2)) ∫₀^∞ ξ^{(ν−N)/2−1} e^{−p²/(4ξ)} dξ`, integrated
/// after the substitution `η = p²/(4ξ)`.
pub fn potential_ft_integral(pot: &PowerLawPotential, p: f64, scheme: &QuadratureScheme) -> Result<f64> {
    check_p(p)?;
    let n = pot.dim as f64;
    let s = 0.5 * (n - pot.nu);
    // dξ ξ^{−s−1} = (p²/4)^{−s} η^{s−1} dη
    let integral = power_exponential_integral(s, 1.0, scheme)? * (0.5 * p).powf(-2.0 * s);
    let ln_pref = -0.5 * n * LN_2 - ln_gamma_pos(0.5 * pot.nu);
    Ok(pot.strength * ln_pref.exp() * integral)
}

/// `∫₀^∞ ξ^{ν/2−1} e^{−ξ r²} dξ`, analytically `Γ(ν/2) r^{−ν}`.
pub fn gamma_representation(nu: f64, r: f64, scheme: &QuadratureScheme) -> Result<f64> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(domain("radius r", r, "r > 0"));
    }
    power_exponential_integral(0.5 * nu, r * r, scheme)
}

/// Coulomb potential `−Z/r` transformed:
/// `U(p) = −Z 2^{N/2−1} Γ((N−1)/2) π^{−1/2} p^{−(N−1)}`.
pub fn coulomb_ft(dim: u32, z: f64, p: f64) -> Result<f64> {
    if dim < 2 {
        return Err(Error::QuantumNumbers(format!("dimension N = {dim} < 2")));
    }
    check_p(p)?;
    let n = dim as f64;
    let ln = (0.5 * n - 1.0) * LN_2 + ln_gamma_pos(0.5 * (n - 1.0)) - LN_SQRT_PI - (n - 1.0) * p.ln();
    Ok(-z * ln.exp())
}
