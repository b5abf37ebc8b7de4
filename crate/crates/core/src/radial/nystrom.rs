//! Nyström discretisation of the radial integral equation.
//!
//! In the angle `θ` with `p = q tan(θ/2)` the equation `f = λ M f` becomes
//! `u = λ K̂ u` with `u = f √(dp/dθ)` and
//! `K̂(θ, θ′) = (Z/(πq)) Q_ν(1 + 2 sin²((θ−θ′)/2) / (sin θ sin θ′))`.
//! The eigenfunctions behave like `sin^α θ` at both ends, so the panels are
//! graded algebraically toward `θ = 0` and `θ = π`. The logarithmic diagonal
//! singularity is handled by product integration against the Lagrange basis
//! on the node's own panel and its two neighbours.

use std::f64::consts::{FRAC_PI_2, PI};

use super::kernel::KernelSpec;
use crate::error::{domain, Error, Result};
use crate::linalg::{symmetric_eigenvalues, SymMatrix};
use crate::quadrature::{gauss_legendre_cached, graded_breakpoints, QuadratureScheme};
use crate::specfun::legendre_q_zm1;

pub const MAX_NYSTROM_GRID: usize = 512;
pub const NYSTROM_PANEL_POINTS: usize = 8;
/// Panel `k` of `m` on `[0, π/2]` ends at `(π/2)(k/m)^β`.
pub const NYSTROM_GRADING_EXPONENT: i32 = 3;

/// Composite Gauss grid on `(0, π)`.
#[derive(Debug, Clone, PartialEq)]
pub struct NystromGrid {
    pub breakpoints: Vec<f64>,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl NystromGrid {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn panels(&self) -> usize {
        self.breakpoints.len() - 1
    }
}

/// `grid_size / 8` Gauss panels, half of them on each side of `π/2`,
/// algebraically graded toward the endpoints so that every panel shrinks as
/// the grid grows.
pub fn nystrom_grid(grid_size: usize) -> Result<NystromGrid> {
    let step = 2 * NYSTROM_PANEL_POINTS;
    if grid_size < step || grid_size > MAX_NYSTROM_GRID || grid_size % step != 0 {
        return Err(domain(
            "Nyström grid size",
            grid_size as f64,
            "a multiple of 16 in [16, 512]",
        ));
    }
    let half = grid_size / step;
    let mut breakpoints = vec![0.0];
    for k in 1..=half {
        breakpoints.push(FRAC_PI_2 * (k as f64 / half as f64).powi(NYSTROM_GRADING_EXPONENT));
    }
    for k in (0..half).rev() {
        let left = breakpoints[k];
        breakpoints.push(PI - left);
    }
    let rule = gauss_legendre_cached(NYSTROM_PANEL_POINTS);
    let mut nodes = Vec::with_capacity(grid_size);
    let mut weights = Vec::with_capacity(grid_size);
    for w in breakpoints.windows(2) {
        let (c, r) = (0.5 * (w[0] + w[1]), 0.5 * (w[1] - w[0]));
        for (x, wt) in rule.nodes.iter().zip(&rule.weights) {
            nodes.push(c + r * x);
            weights.push(r * wt);
        }
    }
    Ok(NystromGrid {
        breakpoints,
        nodes,
        weights,
    })
}

/// Lagrange basis on the reference Gauss nodes.
struct Basis {
    nodes: Vec<f64>,
    bary: Vec<f64>,
}

impl Basis {
    fn new() -> Self {
        let nodes = gauss_legendre_cached(NYSTROM_PANEL_POINTS).nodes.clone();
        let bary = (0..nodes.len())
            .map(|j| {
                1.0 / (0..nodes.len())
                    .filter(|&k| k != j)
                    .map(|k| nodes[j] - nodes[k])
                    .product::<f64>()
            })
            .collect();
        Self { nodes, bary }
    }

    fn eval(&self, s: f64, out: &mut [f64]) {
        for (j, o) in out.iter_mut().enumerate() {
            let mut v = self.bary[j];
            for (k, x) in self.nodes.iter().enumerate() {
                if k != j {
                    v *= s - x;
                }
            }
            *o = v;
        }
    }
}

struct AngularKernel {
    nu: f64,
    scale: f64,
}

impl AngularKernel {
    fn eval(&self, t: f64, t2: f64) -> Result<f64> {
        let d = (0.5 * (t - t2)).sin();
        let zm1 = 2.0 * d * d / (t.sin() * t2.sin());
        if zm1 == 0.0 {
            // sub-panel node rounded onto the singular point; measure zero
            return Ok(0.0);
        }
        Ok(self.scale * legendre_q_zm1(self.nu, zm1)?)
    }
}

/// Fredholm eigenvalues `λ` of the discretised kernel, ascending.
///
/// `scheme` supplies the sub-panel rule and the grading ratio and depth used
/// for the product integrals near the diagonal.
pub fn nystrom_spectrum(spec: &KernelSpec, grid_size: usize, scheme: &QuadratureScheme) -> Result<Vec<f64>> {
    let grid = nystrom_grid(grid_size)?;
    let n = grid.len();
    let m = NYSTROM_PANEL_POINTS;
    let kern = AngularKernel {
        nu: spec.degree(),
        scale: spec.ctx.z / (PI * spec.ctx.q),
    };
    let basis = Basis::new();
    let sub_rule = scheme.rule();
    let mut a = vec![0.0; n * n];
    let mut lagrange = vec![0.0; m];
    for i in 0..n {
        let ti = grid.nodes[i];
        let own = i / m;
        for j in 0..n {
            let panel = j / m;
            if panel + 1 < own || panel > own + 1 {
                a[i * n + j] = grid.weights[j] * kern.eval(ti, grid.nodes[j])?;
            }
        }
        let lo = own.saturating_sub(1);
        let hi = (own + 1).min(grid.panels() - 1);
        for panel in lo..=hi {
            let (pa, pb) = (grid.breakpoints[panel], grid.breakpoints[panel + 1]);
            let target = if panel < own {
                pb
            } else if panel > own {
                pa
            } else {
                ti
            };
            let sub = graded_breakpoints(pa, pb, target, scheme.grading_ratio, scheme.grading_levels);
            let (c, r) = (0.5 * (pa + pb), 0.5 * (pb - pa));
            let row = &mut a[i * n + panel * m..i * n + (panel + 1) * m];
            for w in sub.windows(2) {
                let (sc, sr) = (0.5 * (w[0] + w[1]), 0.5 * (w[1] - w[0]));
                for (x, wt) in sub_rule.nodes.iter().zip(&sub_rule.weights) {
                    let t = sc + sr * x;
                    let kv = sr * wt * kern.eval(ti, t)?;
                    basis.eval((t - c) / r, &mut lagrange);
                    for (entry, lj) in row.iter_mut().zip(&lagrange) {
                        *entry += kv * lj;
                    }
                }
            }
        }
    }
    let sqrt_w: Vec<f64> = grid.weights.iter().map(|w| w.sqrt()).collect();
    let mut s = SymMatrix::zeros(n);
    for i in 0..n {
        for j in 0..=i {
            let v = 0.5 * (sqrt_w[i] * a[i * n + j] / sqrt_w[j] + sqrt_w[j] * a[j * n + i] / sqrt_w[i]);
            s.set(i, j, v);
        }
    }
    let mu = symmetric_eigenvalues(&s)?;
    let top = mu.iter().fold(0.0f64, |acc, v| acc.max(*v));
    if !(top > 0.0) {
        return Err(Error::Invalid("discretised kernel has no positive eigenvalue".into()));
    }
    let mut lambdas: Vec<f64> = mu
        .iter()
        .filter(|&&v| v > 1e-14 * top)
        .map(|v| 1.0 / v)
        .collect();
    lambdas.sort_by(f64::total_cmp);
    Ok(lambdas)
}
