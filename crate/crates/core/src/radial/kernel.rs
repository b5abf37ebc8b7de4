//! The symmetric Legendre-Q kernel `M_l(p, p′)` and the integral operator of
//! the radial momentum-space Schrödinger equation.

use std::f64::consts::PI;

use crate::error::{domain, Error, Result};
use crate::quadrature::{integrate_radial, Estimate, QuadratureScheme, RadialMap};
use crate::specfun::legendre_q_zm1;
use crate::spectrum::CoulombContext;

/// Kernel of angular momentum `l` in `dim` dimensions at context `ctx`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelSpec {
    pub ctx: CoulombContext,
    pub l: u32,
    pub dim: u32,
}

impl KernelSpec {
    pub fn new(ctx: CoulombContext, l: u32, dim: u32) -> Result<Self> {
        if dim < 2 {
            return Err(Error::QuantumNumbers(format!("dimension N = {dim} < 2")));
        }
        Ok(Self { ctx, l, dim })
    }

    /// `ν = l + (N−3)/2`, always `≥ −½`.
    pub fn degree(&self) -> f64 {
        self.l as f64 + 0.5 * (self.dim as f64 - 3.0)
    }

    /// Gegenbauer superscript `α = ν + 1` of the eigenfunctions.
    pub fn alpha(&self) -> f64 {
        self.degree() + 1.0
    }
}

/// `z − 1 = (p − p′)² / (2pp′)` with the arguments ordered first.
#[inline]
fn kernel_zm1(p: f64, p2: f64) -> (f64, f64, f64) {
    let (a, b) = if p <= p2 { (p, p2) } else { (p2, p) };
    let d = b - a;
    (a, b, d * d / (2.0 * a * b))
}

/// `M_l(p,p′) = (2Z/π) Q_ν((p²+p′²)/(2pp′)) / (√(p²+q²) √(p′²+q²))`.
///
/// Symmetric bit for bit; `p = p′` is reported as [`Error::Singular`].
pub fn kernel(spec: &KernelSpec, p: f64, p_prime: f64) -> Result<f64> {
    for x in [p, p_prime] {
        if !(x > 0.0) || !x.is_finite() {
            return Err(domain("kernel momentum", x, "p > 0"));
        }
    }
    if p == p_prime {
        return Err(Error::Singular { p });
    }
    let (a, b, zm1) = kernel_zm1(p, p_prime);
    let q2 = spec.ctx.q * spec.ctx.q;
    let qv = legendre_q_zm1(spec.degree(), zm1)?;
    Ok(2.0 * spec.ctx.z / PI * qv / ((a * a + q2).sqrt() * (b * b + q2).sqrt()))
}

/// `(2Z/π) p^{−(N−1)/2} ∫₀^∞ p′^{(N−1)/2} Q_ν(z(p,p′)) φ(p′) dp′`.
///
/// The radial quadrature is graded toward the logarithmic singularity at
/// `p′ = p`.
pub fn apply_operator<F: FnMut(f64) -> f64>(
    spec: &KernelSpec,
    mut phi: F,
    p: f64,
    scheme: &QuadratureScheme,
) -> Result<Estimate> {
    if !(p > 0.0) || !p.is_finite() {
        return Err(domain("momentum p", p, "p > 0"));
    }
    let nu = spec.degree();
    let half = 0.5 * (spec.dim as f64 - 1.0);
    let map = RadialMap::new(spec.ctx.q)?;
    let mut failure = None;
    let integrand = |pp: f64| {
        if pp == p || pp == 0.0 {
            return 0.0;
        }
        let v = phi(pp);
        if v == 0.0 {
            return 0.0;
        }
        let (_, _, zm1) = kernel_zm1(p, pp);
        match legendre_q_zm1(nu, zm1) {
            Ok(qv) => qv * (pp / p).powf(half) * v,
            Err(e) => {
                failure.get_or_insert(e);
                f64::NAN
            }
        }
    };
    let est = integrate_radial(integrand, map, Some(p), scheme);
    if let Some(e) = failure {
        return Err(e);
    }
    let est = est?;
    let factor = 2.0 * spec.ctx.z / PI;
    Ok(Estimate {
        value: factor * est.value,
        err_estimate: factor * est.err_estimate,
    })
}
