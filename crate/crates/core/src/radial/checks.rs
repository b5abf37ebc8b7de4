//! Numerical verifications of the radial theory: the integral-equation
//! residual, orthonormality, the bilinear kernel series, the Ossicini and
//! Cohl identities, and Sturmian expansion/reconstruction.

use std::f64::consts::{LN_2, PI};

use serde_json::json;

use super::kernel::{apply_operator, kernel, KernelSpec};
use super::{sturmian_family, RadialFunction, RadialKind};
use crate::error::{domain, Error, Result};
use crate::quadrature::{
    graded_breakpoints, integrate_adaptive, integrate_radial, QuadratureScheme, RadialMap,
};
use crate::report::VerificationReport;
use crate::specfun::{
    gegenbauer_at_one, gegenbauer_sequence, gegenbauer_unchecked, legendre_q, legendre_q_hyp,
    legendre_q_integral, legendre_q_zm1, ln_gamma_pos, ln_gegenbauer_norm_sq, GegenbauerOrder,
    LegendreQArg,
};
use crate::spectrum::{CoulombContext, QuantumNumbers};

/// Residual denominators never drop below this fraction of the grid peak of
/// `(p²+q²)|F|`, which keeps Gegenbauer zeros of `F` from dominating.
pub const RESIDUAL_FLOOR_FRACTION: f64 = 1e-3;

/// `n` logarithmically spaced points on `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|k| (a + (b - a) * k as f64 / (n - 1) as f64).exp())
        .collect()
}

/// 20 log-spaced momenta in `[0.01 q, 10 q]`.
pub fn default_grid(q: f64) -> Vec<f64> {
    log_grid(0.01 * q, 10.0 * q, 20)
}

/// Max relative residual of `(p²+q²) F(p) = λ (K F)(p)` over `p_grid`.
///
/// Quadrature failures do not abort the check: a non-converged integral
/// contributes its best estimate and is counted in `quadrature_failures`;
/// a hard failure makes the metric infinite.
pub fn residual_check(
    ctx: &CoulombContext,
    qn: &QuantumNumbers,
    p_grid: &[f64],
    scheme: &QuadratureScheme,
    tolerance: f64,
) -> Result<VerificationReport> {
    let mut report = VerificationReport::builder("residual")
        .param("dim", qn.dim)
        .param("n_r", qn.n_r)
        .param("l", qn.l)
        .param("z", ctx.z)
        .param("q", ctx.q)
        .param("grid_points", p_grid.len());
    if let Some(&p) = p_grid.iter().find(|&&p| !(p > 0.0) || !p.is_finite()) {
        return Err(domain("residual grid point", p, "p > 0"));
    }
    let f = RadialFunction::new(RadialKind::Sturmian, *ctx, *qn)?;
    let spec = KernelSpec::new(*ctx, qn.l, qn.dim)?;
    let lam = f.eigenvalue();
    let q2 = ctx.q * ctx.q;
    let lhs: Vec<f64> = p_grid.iter().map(|&p| (p * p + q2) * f.eval_unchecked(p)).collect();
    let peak = lhs.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let floor = RESIDUAL_FLOOR_FRACTION * peak;
    let mut metric = 0.0f64;
    let mut failures = 0usize;
    let mut worst_p = f64::NAN;
    for (&p, &left) in p_grid.iter().zip(&lhs) {
        let applied = match apply_operator(&spec, |x| f.eval_unchecked(x), p, scheme) {
            Ok(est) => est.value,
            Err(Error::Convergence { best, .. }) => {
                failures += 1;
                best
            }
            Err(_) => {
                failures += 1;
                f64::INFINITY
            }
        };
        let r = (left - lam * applied).abs() / left.abs().max(floor);
        if !(r <= metric) {
            metric = r;
            worst_p = p;
        }
    }
    report.param_mut("eigenvalue", lam);
    report.param_mut("worst_p", worst_p);
    report.param_mut("quadrature_failures", failures);
    Ok(report.finish(metric, tolerance))
}

/// `G_{ij} = ∫₀^∞ p^{N−1} (p²+q²) F_{i l} F_{j l} dp` for `i, j ≤ n_r_max`.
pub fn gram_matrix(
    ctx: &CoulombContext,
    dim: u32,
    l: u32,
    n_r_max: u32,
    scheme: &QuadratureScheme,
) -> Result<Vec<Vec<f64>>> {
    let map = RadialMap::new(ctx.q)?;
    let funcs = (0..=n_r_max)
        .map(|k| RadialFunction::new(RadialKind::Sturmian, *ctx, QuantumNumbers::from_radial(dim, k, l)?))
        .collect::<Result<Vec<_>>>()?;
    let q2 = ctx.q * ctx.q;
    let power = dim as f64 - 1.0;
    let size = funcs.len();
    let mut g = vec![vec![0.0; size]; size];
    for i in 0..size {
        for j in 0..=i {
            let est = integrate_radial(
                |p| p.powf(power) * (p * p + q2) * funcs[i].eval_unchecked(p) * funcs[j].eval_unchecked(p),
                map,
                None,
                scheme,
            )?;
            g[i][j] = est.value;
            g[j][i] = est.value;
        }
    }
    Ok(g)
}

/// `max_{ij} |G_{ij} − δ_{ij}|`.
pub fn gram_deviation(g: &[Vec<f64>]) -> f64 {
    g.iter()
        .enumerate()
        .flat_map(|(i, row)| row.iter().enumerate().map(move |(j, v)| (v - if i == j { 1.0 } else { 0.0 }).abs()))
        .fold(0.0, f64::max)
}

/// `∫₀^∞ g_{n_r l}(p)² dp`, analytically `Z / ((n_r+α) q)`.
pub fn spectral_norm_sq(ctx: &CoulombContext, qn: &QuantumNumbers, scheme: &QuadratureScheme) -> Result<f64> {
    let g = RadialFunction::new(RadialKind::Spectral, *ctx, *qn)?;
    Ok(integrate_radial(|p| g.eval_unchecked(p).powi(2), RadialMap::new(ctx.q)?, None, scheme)?.value)
}

/// `∫₀^∞ g_{i l} g_{j l} dp` for two radial quantum numbers.
pub fn spectral_overlap(
    ctx: &CoulombContext,
    dim: u32,
    l: u32,
    n_r: (u32, u32),
    scheme: &QuadratureScheme,
) -> Result<f64> {
    let a = RadialFunction::new(RadialKind::Spectral, *ctx, QuantumNumbers::from_radial(dim, n_r.0, l)?)?;
    let b = RadialFunction::new(RadialKind::Spectral, *ctx, QuantumNumbers::from_radial(dim, n_r.1, l)?)?;
    Ok(integrate_radial(
        |p| a.eval_unchecked(p) * b.eval_unchecked(p),
        RadialMap::new(ctx.q)?,
        None,
        scheme,
    )?
    .value)
}

/// `∫₀^∞ p^{N−1} 𝓕_{nl}(p)² dp`, analytically 1.
pub fn bound_norm(z: f64, qn: &QuantumNumbers, scheme: &QuadratureScheme) -> Result<f64> {
    let f = RadialFunction::bound(z, *qn)?;
    let power = qn.dim as f64 - 1.0;
    Ok(integrate_radial(
        |p| p.powf(power) * f.eval_unchecked(p).powi(2),
        RadialMap::new(f.ctx().q)?,
        None,
        scheme,
    )?
    .value)
}

/// `g_{0 l}(p), …, g_{K l}(p)`.
fn spectral_family(spec: &KernelSpec, k_max: usize, p: f64) -> Vec<f64> {
    let alpha = spec.alpha();
    let q = spec.ctx.q;
    let s = q * q + p * p;
    let poly = gegenbauer_sequence(alpha, k_max, (q * q - p * p) / s);
    let common = ln_gamma_pos(alpha) + 0.5 * (spec.ctx.z.ln() - PI.ln()) + alpha * (4.0 * q * p).ln()
        - (alpha + 0.5) * s.ln();
    poly.iter()
        .enumerate()
        .map(|(k, c)| {
            let kf = k as f64;
            let ln = common + 0.5 * (ln_gamma_pos(kf + 1.0) - ln_gamma_pos(kf + 2.0 * alpha));
            ln.exp() * c
        })
        .collect()
}

/// Relative deviation of `Σ_{n_r ≤ K} g(p) g(p′)` from `M_l(p, p′)`.
///
/// The series converges only conditionally and slowly; the report carries
/// the deviation at `K/2` next to the one at `K`.
pub fn spectral_expansion_check(
    spec: &KernelSpec,
    k: usize,
    p: f64,
    p_prime: f64,
    tolerance: f64,
) -> Result<VerificationReport> {
    let mut report = VerificationReport::builder("spectral_expansion")
        .param("dim", spec.dim)
        .param("l", spec.l)
        .param("q", spec.ctx.q)
        .param("p", p)
        .param("p_prime", p_prime)
        .param("k", k);
    let m = kernel(spec, p, p_prime)?;
    let a = spectral_family(spec, k, p);
    let b = spectral_family(spec, k, p_prime);
    let mut partial = 0.0;
    let mut deviations = Vec::with_capacity(k + 1);
    for (x, y) in a.iter().zip(&b) {
        partial += x * y;
        deviations.push((partial - m).abs() / m.abs());
    }
    let at_k = deviations[k];
    let at_half = deviations[k / 2];
    report.param_mut("kernel", m);
    report.param_mut("deviation_half", at_half);
    report.param_mut("decreasing", at_k < at_half);
    Ok(report.finish(at_k, tolerance))
}

/// Truncated right side of the Ossicini expansion of
/// `Q_ν((1−2hξξ′+h²)/(2h√((1−ξ²)(1−ξ′²))))`: partial sums over
/// `n_r = 0..=K`, together with the left side.
pub fn ossicini_series(nu: f64, h: f64, xi: f64, xi_prime: f64, k: usize) -> Result<(f64, Vec<f64>)> {
    if !(nu > -1.0) || !nu.is_finite() {
        return Err(domain("degree nu", nu, "nu > -1"));
    }
    if !(h > 0.0 && h <= 1.0) {
        return Err(domain("h", h, "0 < h <= 1"));
    }
    for x in [xi, xi_prime] {
        if !(x.abs() < 1.0) {
            return Err(domain("xi", x, "-1 < xi < 1"));
        }
    }
    if h == 1.0 && xi == xi_prime {
        return Err(Error::Invalid("h = 1 needs xi != xi'".into()));
    }
    let s = ((1.0 - xi * xi) * (1.0 - xi_prime * xi_prime)).sqrt();
    // 1 − ξξ′ − s = (ξ−ξ′)² / (1 − ξξ′ + s)
    let gap = (xi - xi_prime).powi(2) / (1.0 - xi * xi_prime + s);
    let zm1 = ((1.0 - h).powi(2) + 2.0 * h * gap) / (2.0 * h * s);
    let lhs = legendre_q_zm1(nu, zm1)?;

    let alpha = nu + 1.0;
    let ca = gegenbauer_sequence(alpha, k, xi);
    let cb = gegenbauer_sequence(alpha, k, xi_prime);
    let ln_common = (2.0 * nu + 1.0) * LN_2 + 2.0 * ln_gamma_pos(nu + 1.0) + alpha * s.ln();
    let ln_h = h.ln();
    let mut partial = 0.0;
    let mut sums = Vec::with_capacity(k + 1);
    for n in 0..=k {
        let nf = n as f64;
        let ln = ln_common + ln_gamma_pos(nf + 1.0) - ln_gamma_pos(nf + 2.0 * nu + 2.0) + (nf + alpha) * ln_h;
        partial += ln.exp() * ca[n] * cb[n];
        sums.push(partial);
    }
    Ok((lhs, sums))
}

/// Ossicini identity at truncation `K`.
///
/// At `h = 1` the deviation oscillates with `K`, so besides the deviation at
/// `K` the report carries its envelopes over `(K/4, K/2]` and `(K/2, K]` and
/// the observed algebraic order between them.
pub fn ossicini_check(
    nu: f64,
    h: f64,
    xi: f64,
    xi_prime: f64,
    k: usize,
    tolerance: f64,
) -> Result<VerificationReport> {
    let report = VerificationReport::builder("ossicini")
        .param("nu", nu)
        .param("h", h)
        .param("xi", xi)
        .param("xi_prime", xi_prime)
        .param("k", k);
    let (lhs, sums) = ossicini_series(nu, h, xi, xi_prime, k)?;
    let dev = |i: usize| (sums[i] - lhs).abs() / lhs.abs();
    let envelope = |lo: usize, hi: usize| (lo + 1..=hi).map(dev).fold(dev(hi), f64::max);
    let (env_half, env) = (envelope(k / 4, k / 2), envelope(k / 2, k));
    let order = (env_half / env).log2();
    Ok(report
        .param("lhs", lhs)
        .param("envelope_half", env_half)
        .param("envelope", env)
        .param("observed_order", if order.is_finite() { json!(order) } else { json!(null) })
        .finish(dev(k), tolerance))
}

/// `∫₋₁¹ (1−ξ²)^{α−½} C_n^{(α)}(ξ) (z−ξ)^{−α−½} dξ = 2^{α+½} C_n^{(α)}(1) Q_{n+α−½}(z)`,
/// with the left side integrated in `θ = arccos ξ`.
pub fn cohl_check(
    alpha: f64,
    n: usize,
    z: f64,
    scheme: &QuadratureScheme,
    tolerance: f64,
) -> Result<VerificationReport> {
    let report = VerificationReport::builder("cohl")
        .param("alpha", alpha)
        .param("n", n)
        .param("z", z);
    if !(alpha > -0.5) || alpha == 0.0 {
        return Err(domain("alpha", alpha, "alpha > -1/2, alpha != 0"));
    }
    if !(z > 1.0) || !z.is_finite() {
        return Err(domain("z", z, "z > 1"));
    }
    let order = GegenbauerOrder::new(n, alpha)?;
    let rhs = (alpha + 0.5).exp2() * gegenbauer_at_one(order) * legendre_q(LegendreQArg::new(n as f64 + alpha - 0.5, z)?)?;
    // peak width near θ = 0 is ~√(z−1)
    let breakpoints = graded_breakpoints(0.0, PI, 0.0, scheme.grading_ratio, scheme.grading_levels.min(6));
    let lhs = integrate_adaptive(
        |t| {
            let (s, c) = t.sin_cos();
            s.powf(2.0 * alpha) * gegenbauer_unchecked(n, alpha, c) * (z - c).powf(-alpha - 0.5)
        },
        &breakpoints,
        scheme,
    )?
    .value;
    Ok(report
        .param("lhs", lhs)
        .param("rhs", rhs)
        .finish((lhs - rhs).abs() / rhs.abs(), tolerance))
}

/// Sturmian coefficients `c_k = ∫ p^{N−1}(p²+q²) F_{k l}(p) t(p) dp`, `k ≤ K`.
pub fn sturmian_coefficients<T: Fn(f64) -> f64>(
    ctx: &CoulombContext,
    dim: u32,
    l: u32,
    k_max: u32,
    t: T,
    scheme: &QuadratureScheme,
) -> Result<Vec<f64>> {
    let map = RadialMap::new(ctx.q)?;
    let q2 = ctx.q * ctx.q;
    let power = dim as f64 - 1.0;
    (0..=k_max)
        .map(|k| {
            let f = RadialFunction::new(RadialKind::Sturmian, *ctx, QuantumNumbers::from_radial(dim, k, l)?)?;
            Ok(integrate_radial(
                |p| {
                    let tv = t(p);
                    if tv == 0.0 {
                        0.0
                    } else {
                        p.powf(power) * (p * p + q2) * f.eval_unchecked(p) * tv
                    }
                },
                map,
                None,
                scheme,
            )?
            .value)
        })
        .collect()
}

/// Expansion of `t` in `F_{0 l}, …, F_{K l}` and its reconstruction error
/// `‖t − t_K‖_w / ‖t‖_w` with weight `w = p^{N−1}(p²+q²)`.
///
/// The report also gives the largest pointwise deviation over `p_grid`.
#[allow(clippy::too_many_arguments)]
pub fn closure_check<T: Fn(f64) -> f64>(
    ctx: &CoulombContext,
    dim: u32,
    l: u32,
    k_max: u32,
    t: T,
    p_grid: &[f64],
    scheme: &QuadratureScheme,
    tolerance: f64,
) -> Result<VerificationReport> {
    let report = VerificationReport::builder("closure")
        .param("dim", dim)
        .param("l", l)
        .param("q", ctx.q)
        .param("k", k_max);
    let coeffs = sturmian_coefficients(ctx, dim, l, k_max, &t, scheme)?;
    let reconstruct = |p: f64| -> f64 {
        sturmian_family(ctx, dim, l, k_max, p)
            .map(|fam| fam.iter().zip(&coeffs).map(|(f, c)| f * c).sum())
            .unwrap_or(f64::NAN)
    };
    let q2 = ctx.q * ctx.q;
    let power = dim as f64 - 1.0;
    let map = RadialMap::new(ctx.q)?;
    let weight = |p: f64| p.powf(power) * (p * p + q2);
    let norm = integrate_radial(|p| weight(p) * t(p).powi(2), map, None, scheme)?.value;
    let err = integrate_radial(|p| weight(p) * (t(p) - reconstruct(p)).powi(2), map, None, scheme)?.value;
    let grid_dev = p_grid
        .iter()
        .map(|&p| (t(p) - reconstruct(p)).abs())
        .fold(0.0, f64::max);
    let metric = (err.max(0.0) / norm).sqrt();
    Ok(report
        .param("grid_max_abs_error", grid_dev)
        .param("coefficients", coeffs)
        .finish(metric, tolerance))
}

/// Largest relative disagreement between the hypergeometric and Heine
/// evaluators of `Q_ν(z)` over the given degrees and arguments.
pub fn legendre_q_cross_check(nus: &[f64], zs: &[f64], tolerance: f64) -> Result<VerificationReport> {
    let report = VerificationReport::builder("legendre_q_cross")
        .param("nus", nus.to_vec())
        .param("z_min", zs.iter().cloned().fold(f64::INFINITY, f64::min))
        .param("z_max", zs.iter().cloned().fold(f64::NEG_INFINITY, f64::max))
        .param("z_points", zs.len());
    let mut metric = 0.0f64;
    for &nu in nus {
        for &z in zs {
            let arg = LegendreQArg::new(nu, z)?;
            let a = legendre_q_hyp(arg)?;
            let b = legendre_q_integral(arg)?;
            metric = metric.max((a - b).abs() / a.abs());
        }
    }
    Ok(report.finish(metric, tolerance))
}

/// `∫₋₁¹ (1−ξ²)^{α−½} C_n^{(α)} C_m^{(α)} dξ` for `n, m ≤ n_max` against the
/// closed-form norms; metric is the largest deviation relative to
/// `√(h_n h_m)`.
pub fn gegenbauer_orthogonality_check(
    alpha: f64,
    n_max: usize,
    scheme: &QuadratureScheme,
    tolerance: f64,
) -> Result<VerificationReport> {
    let report = VerificationReport::builder("gegenbauer_orthogonality")
        .param("alpha", alpha)
        .param("n_max", n_max);
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(domain("alpha", alpha, "alpha > 0"));
    }
    let ln_norms: Vec<f64> = (0..=n_max).map(|n| ln_gegenbauer_norm_sq(n, alpha)).collect();
    let mut metric = 0.0f64;
    for n in 0..=n_max {
        for m in 0..=n {
            // in θ = arccos ξ the weight becomes sin^{2α} θ
            let v = integrate_adaptive(
                |t| {
                    let (s, c) = t.sin_cos();
                    s.powf(2.0 * alpha) * gegenbauer_unchecked(n, alpha, c) * gegenbauer_unchecked(m, alpha, c)
                },
                &[0.0, 0.5 * PI, PI],
                scheme,
            )?
            .value;
            let scale = (0.5 * (ln_norms[n] + ln_norms[m])).exp();
            let want = if n == m { ln_norms[n].exp() } else { 0.0 };
            metric = metric.max((v - want).abs() / scale);
        }
    }
    Ok(report.finish(metric, tolerance))
}
