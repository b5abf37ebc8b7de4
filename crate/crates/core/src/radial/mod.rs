//! Radial momentum-space functions of the N-dimensional Coulomb problem.
//!
//! With `α = l + (N−1)/2`, `ξ = (q²−p²)/(q²+p²)` and `C = C_{n_r}^{(α)}(ξ)`:
//!
//! * Sturmian `F = 2^{N−1} Γ(α) √(n_r!(n_r+α)/(π(n_r+2l+N−2)!)) q^{N/2}
//!   (4qp)^l (q²+p²)^{−(l+(N+1)/2)} C`
//! * orthonormal eigenfunction `f = √(p²+q²) p^{(N−1)/2} F`
//! * spectral factor `g = f/√λ`, the factors of the bilinear kernel series
//! * bound state `𝓕 = √2 q_n F` at `q = q_n`
//!
//! All prefactors are accumulated in log space.

use std::f64::consts::{LN_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::specfun::{gegenbauer_sequence, gegenbauer_unchecked, ln_gamma_pos};
use crate::spectrum::{bound_momentum_scale, sturmian_eigenvalue, CoulombContext, QuantumNumbers};

pub mod checks;
mod kernel;
mod nystrom;

pub use checks::{
    bound_norm, closure_check, cohl_check, default_grid, gegenbauer_orthogonality_check,
    gram_deviation, gram_matrix, legendre_q_cross_check, log_grid, ossicini_check, ossicini_series,
    residual_check, spectral_expansion_check, spectral_norm_sq, spectral_overlap,
    sturmian_coefficients,
};
pub use kernel::{apply_operator, kernel, KernelSpec};
pub use nystrom::{nystrom_grid, nystrom_spectrum, NystromGrid, MAX_NYSTROM_GRID};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RadialKind {
    /// `F_{n_r l}(E, p)`
    Sturmian,
    /// `f_{n_r l}(E, p)`, orthonormal in `L²(0, ∞)`
    Orthonormal,
    /// `g_{n_r l}(p)` with `‖g‖² = Z/((n_r+α) q)`
    Spectral,
    /// `𝓕_{nl}(p)`, requires `q = q_n`
    Bound,
}

/// A radial function with its log prefactor precomputed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialFunction {
    kind: RadialKind,
    ctx: CoulombContext,
    qn: QuantumNumbers,
    ln_prefactor: f64,
    /// power of `4qp`
    p_power: f64,
    /// power of `(q²+p²)^{-1}`
    denominator_power: f64,
}

impl RadialFunction {
    pub fn new(kind: RadialKind, ctx: CoulombContext, qn: QuantumNumbers) -> Result<Self> {
        if kind == RadialKind::Bound {
            let qn_scale = bound_momentum_scale(qn.dim, ctx.z, qn.n)?;
            if (ctx.q - qn_scale).abs() > 1e-12 * qn_scale {
                return Err(Error::Invalid(format!(
                    "bound-state function needs q = q_n = {qn_scale}, got {}",
                    ctx.q
                )));
            }
        }
        let alpha = qn.alpha();
        let (n_r, l, dim) = (qn.n_r as f64, qn.l as f64, qn.dim as f64);
        // ln[n_r! / (π (n_r+2l+N−2)!)]
        let ln_ratio = ln_gamma_pos(n_r + 1.0) - PI.ln() - ln_gamma_pos(n_r + 2.0 * l + dim - 1.0);
        let ln_gamma_alpha = ln_gamma_pos(alpha);
        let (ln_prefactor, p_power, denominator_power) = match kind {
            RadialKind::Sturmian | RadialKind::Bound => {
                let mut ln = (dim - 1.0) * LN_2
                    + ln_gamma_alpha
                    + 0.5 * (ln_ratio + (n_r + alpha).ln())
                    + 0.5 * dim * ctx.q.ln();
                if kind == RadialKind::Bound {
                    ln += 0.5 * LN_2 + ctx.q.ln();
                }
                (ln, l, l + 0.5 * (dim + 1.0))
            }
            RadialKind::Orthonormal => (
                ln_gamma_alpha + 0.5 * (ctx.q.ln() + ln_ratio + (n_r + alpha).ln()),
                alpha,
                alpha + 0.5,
            ),
            RadialKind::Spectral => (
                ln_gamma_alpha + 0.5 * (ctx.z.ln() + ln_ratio),
                alpha,
                alpha + 0.5,
            ),
        };
        Ok(Self {
            kind,
            ctx,
            qn,
            ln_prefactor,
            p_power,
            denominator_power,
        })
    }

    /// `𝓕_{nl}` of the bound level `n` at strength `z`.
    pub fn bound(z: f64, qn: QuantumNumbers) -> Result<Self> {
        Self::new(RadialKind::Bound, CoulombContext::bound(qn.dim, z, qn.n)?, qn)
    }

    pub fn kind(&self) -> RadialKind {
        self.kind
    }

    pub fn ctx(&self) -> &CoulombContext {
        &self.ctx
    }

    pub fn quantum_numbers(&self) -> &QuantumNumbers {
        &self.qn
    }

    /// Sturmian eigenvalue `λ_{n_r l}` belonging to this function.
    pub fn eigenvalue(&self) -> f64 {
        sturmian_eigenvalue(&self.ctx, &self.qn)
    }

    pub fn eval(&self, p: f64) -> Result<f64> {
        if !(p >= 0.0) || !p.is_finite() {
            return Err(domain("momentum p", p, "p >= 0"));
        }
        Ok(self.eval_unchecked(p))
    }

    pub(crate) fn eval_unchecked(&self, p: f64) -> f64 {
        let q = self.ctx.q;
        let s = q * q + p * p;
        let xi = (q * q - p * p) / s;
        let c = gegenbauer_unchecked(self.qn.n_r as usize, self.qn.alpha(), xi);
        let mut ln = self.ln_prefactor - self.denominator_power * s.ln();
        if self.p_power != 0.0 {
            if p == 0.0 {
                return 0.0;
            }
            ln += self.p_power * (4.0 * q * p).ln();
        }
        ln.exp() * c
    }
}

fn function_value(kind: RadialKind, ctx: &CoulombContext, qn: &QuantumNumbers, p: f64) -> Result<f64> {
    RadialFunction::new(kind, *ctx, *qn)?.eval(p)
}

/// `F_{n_r l}(E, p)`; positive as `p → 0⁺`.
pub fn sturmian_radial(ctx: &CoulombContext, qn: &QuantumNumbers, p: f64) -> Result<f64> {
    function_value(RadialKind::Sturmian, ctx, qn, p)
}

/// `𝓕_{nl}(p) = √2 q_n F_{n−l−1, l}(E_n, p)`.
pub fn bound_radial(z: f64, qn: &QuantumNumbers, p: f64) -> Result<f64> {
    RadialFunction::bound(z, *qn)?.eval(p)
}

/// `g_{n_r l}(p)`, the factors of `M_l(p, p′) = Σ g(p) g(p′)`.
pub fn spectral_factor(ctx: &CoulombContext, qn: &QuantumNumbers, p: f64) -> Result<f64> {
    function_value(RadialKind::Spectral, ctx, qn, p)
}

/// `f_{n_r l}(E, p)`, orthonormal with respect to `dp`.
pub fn orthonormal_eigenfunction(ctx: &CoulombContext, qn: &QuantumNumbers, p: f64) -> Result<f64> {
    function_value(RadialKind::Orthonormal, ctx, qn, p)
}

/// `F_{0 l}(p), …, F_{n_r_max l}(p)` sharing one Gegenbauer recurrence.
pub fn sturmian_family(
    ctx: &CoulombContext,
    dim: u32,
    l: u32,
    n_r_max: u32,
    p: f64,
) -> Result<Vec<f64>> {
    if !(p >= 0.0) || !p.is_finite() {
        return Err(domain("momentum p", p, "p >= 0"));
    }
    let lowest = QuantumNumbers::from_radial(dim, 0, l)?;
    let alpha = lowest.alpha();
    let q = ctx.q;
    let s = q * q + p * p;
    let xi = (q * q - p * p) / s;
    let poly = gegenbauer_sequence(alpha, n_r_max as usize, xi);
    let (lf, df) = (l as f64, dim as f64);
    let mut common = (df - 1.0) * LN_2 + ln_gamma_pos(alpha) - 0.5 * PI.ln() + 0.5 * df * q.ln()
        - (lf + 0.5 * (df + 1.0)) * s.ln();
    if l > 0 {
        if p == 0.0 {
            return Ok(vec![0.0; n_r_max as usize + 1]);
        }
        common += lf * (4.0 * q * p).ln();
    }
    Ok(poly
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let kf = k as f64;
            let ln_norm = 0.5
                * (ln_gamma_pos(kf + 1.0) + (kf + alpha).ln()
                    - ln_gamma_pos(kf + 2.0 * lf + df - 1.0));
            (common + ln_norm).exp() * c
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{integrate_radial, QuadratureScheme, RadialMap};
    use proptest::prelude::*;

    const SQRT_PI: f64 = 1.772_453_850_905_516;

    fn qn(dim: u32, n_r: u32, l: u32) -> QuantumNumbers {
        QuantumNumbers::from_radial(dim, n_r, l).unwrap()
    }

    fn ctx(z: f64, q: f64) -> CoulombContext {
        CoulombContext::from_momentum(z, q).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn sturmian_examples() {
        let c = ctx(1.0, 1.0);
        assert!(rel(sturmian_radial(&c, &qn(3, 0, 0), 1.0).unwrap(), 1.0 / SQRT_PI) < 1e-14);
        assert!(rel(sturmian_radial(&c, &qn(3, 0, 0), 0.0).unwrap(), 4.0 / SQRT_PI) < 1e-14);
        assert!(sturmian_radial(&c, &qn(3, 0, 0), -1.0).is_err());
        assert_eq!(sturmian_radial(&c, &qn(3, 0, 2), 0.0).unwrap(), 0.0);
    }

    /// `F = f / (√(p²+q²) p^{(N−1)/2})` with `f` built from Gamma values
    /// evaluated directly.
    fn sturmian_via_orthonormal(dim: u32, q: f64, n_r: u32, l: u32, p: f64) -> f64 {
        let alpha = l as f64 + 0.5 * (dim as f64 - 1.0);
        let gamma = |x: f64| ln_gamma_pos(x).exp();
        let nr = n_r as f64;
        let pref = gamma(alpha)
            * (q * gamma(nr + 1.0) * (nr + alpha) / (PI * gamma(nr + 2.0 * alpha))).sqrt();
        let xi = (q * q - p * p) / (q * q + p * p);
        let f = pref * (4.0 * q * p).powf(alpha) / (q * q + p * p).powf(alpha + 0.5)
            * gegenbauer_unchecked(n_r as usize, alpha, xi);
        f / ((p * p + q * q).sqrt() * p.powf(0.5 * (dim as f64 - 1.0)))
    }

    #[test]
    fn sturmian_matches_independent_chain() {
        let want = sturmian_via_orthonormal(4, 0.5, 2, 1, 0.7);
        let got = sturmian_radial(&ctx(1.0, 0.5), &qn(4, 2, 1), 0.7).unwrap();
        assert!(rel(got, want) < 1e-13, "{got} vs {want}");
        // high-precision reference
        assert!(rel(got, -0.444_024_613_202_662_698) < 1e-13);
    }

    #[test]
    fn bound_examples() {
        let f10 = |p| bound_radial(1.0, &QuantumNumbers::new(3, 1, 0).unwrap(), p).unwrap();
        assert!(rel(f10(0.0), 2f64.powf(2.5) / SQRT_PI) < 1e-14);
        assert!(rel(f10(1.0), 2f64.sqrt() / SQRT_PI) < 1e-14);
        let two_d = bound_radial(1.0, &QuantumNumbers::new(2, 1, 0).unwrap(), 1.0).unwrap();
        // q_1 = 2, α = ½: √2·q_1 · 2·Γ(½)·√(½/π) · q_1 · (q_1²+1)^{−3/2}
        let direct = 2f64.sqrt() * 2.0 * 2.0 * SQRT_PI * (0.5 / PI).sqrt() * 2.0 / 5f64.powf(1.5);
        assert!(rel(two_d, direct) < 1e-14);
        assert!(rel(two_d, 0.715_541_752_799_932_703) < 1e-14);
    }

    #[test]
    fn bound_requires_bound_scale() {
        let q = QuantumNumbers::new(3, 2, 0).unwrap();
        assert!(RadialFunction::new(RadialKind::Bound, ctx(1.0, 1.0), q).is_err());
        assert!(RadialFunction::new(RadialKind::Bound, ctx(1.0, 0.5), q).is_ok());
    }

    #[test]
    fn podolsky_pauling_ground_state() {
        for z in [1.0, 2.0, 3.7] {
            let q1 = z;
            let rf = RadialFunction::bound(z, QuantumNumbers::new(3, 1, 0).unwrap()).unwrap();
            for p in [0.0, 0.1, 0.5, 1.0, 3.0, 20.0] {
                let want = 2f64.powf(2.5) / SQRT_PI * q1.powf(2.5) / (q1 * q1 + p * p).powi(2);
                assert!(rel(rf.eval(p).unwrap(), want) < 1e-12);
            }
        }
    }

    #[test]
    fn spectral_norms() {
        let scheme = QuadratureScheme::default();
        for (dim, z, q, n_r, l, want) in [(3, 1.0, 1.0, 0, 0, 1.0), (3, 1.0, 1.0, 1, 0, 0.5)] {
            let c = ctx(z, q);
            let g = RadialFunction::new(RadialKind::Spectral, c, qn(dim, n_r, l)).unwrap();
            let est = integrate_radial(|p| g.eval_unchecked(p).powi(2), RadialMap::new(q).unwrap(), None, &scheme)
                .unwrap();
            assert!(rel(est.value, want) < 1e-12);
        }
        let c = ctx(1.0, 0.7);
        let f = RadialFunction::new(RadialKind::Orthonormal, c, qn(4, 1, 1)).unwrap();
        let est = integrate_radial(|p| f.eval_unchecked(p).powi(2), RadialMap::new(0.7).unwrap(), None, &scheme)
            .unwrap();
        assert!(rel(est.value, 1.0) < 1e-12);
    }

    #[test]
    fn family_matches_single_evaluations() {
        let c = ctx(1.3, 0.8);
        for dim in [2, 3, 5] {
            for l in 0..3 {
                for p in [0.0, 0.05, 0.8, 4.0] {
                    let fam = sturmian_family(&c, dim, l, 6, p).unwrap();
                    for (k, v) in fam.iter().enumerate() {
                        let single = sturmian_radial(&c, &qn(dim, k as u32, l), p).unwrap();
                        assert!((v - single).abs() <= 1e-13 * single.abs().max(1e-300));
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn consistency_square(dim in 2u32..7, n_r in 0u32..6, l in 0u32..4, q in 0.1f64..5.0, z in 0.2f64..4.0, t in 0.01f64..0.99) {
            let c = ctx(z, q);
            let k = qn(dim, n_r, l);
            let p = q * (0.5 * PI * t).tan();
            let lam = sturmian_eigenvalue(&c, &k);
            let f = orthonormal_eigenfunction(&c, &k, p).unwrap();
            let g = spectral_factor(&c, &k, p).unwrap();
            let big_f = sturmian_radial(&c, &k, p).unwrap();
            let via_g = lam.sqrt() * g;
            let via_f = (p * p + q * q).sqrt() * p.powf(0.5 * (dim as f64 - 1.0)) * big_f;
            let scale = f.abs().max(1e-300);
            prop_assert!((f - via_g).abs() <= 1e-12 * scale);
            prop_assert!((f - via_f).abs() <= 1e-12 * scale);
        }

        #[test]
        fn positive_near_origin(dim in 2u32..8, n in 1u32..8, lsel in 0u32..8, z in 0.2f64..4.0) {
            let l = lsel % n;
            let k = QuantumNumbers::new(dim, n, l).unwrap();
            let rf = RadialFunction::bound(z, k).unwrap();
            // ξ close to 1 lies above the largest Gegenbauer node
            let p = rf.ctx().q * 1e-3;
            prop_assert!(rf.eval(p).unwrap() > 0.0);
        }
    }
}
