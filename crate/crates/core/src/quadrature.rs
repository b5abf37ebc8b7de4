//! Quadrature engines.
//!
//! All integrals over `p ∈ (0, ∞)` go through [`RadialMap`]: the substitution
//! `ξ = (q²−p²)/(q²+p²)` followed by `ξ = cos θ`, i.e. `p = q tan(θ/2)`.
//! Sturmian integrands carry half-integer powers of `1 ± ξ`, which become
//! integer powers of `sin(θ/2)` and `cos(θ/2)`, so Gauss–Legendre in `θ`
//! converges spectrally. Logarithmic singularities (the Legendre-Q kernel on
//! its diagonal) are handled by splitting at the singular point and grading
//! panels geometrically toward it.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{domain, Error, Result};

pub const MAX_GAUSS_POINTS: usize = 4096;

/// Gauss–Legendre nodes and weights on `[−1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Nodes by Newton iteration on `P_n` from Chebyshev-type initial guesses.
    pub fn new(npoints: usize) -> Result<Self> {
        if npoints == 0 || npoints > MAX_GAUSS_POINTS {
            return Err(domain(
                "Gauss-Legendre point count",
                npoints as f64,
                "1 <= npoints <= 4096",
            ));
        }
        let n = npoints;
        let nf = n as f64;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..(n + 1) / 2 {
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, p_prev) = legendre_pair(n, x);
                dp = nf * (x * p - p_prev) / (x * x - 1.0);
                let dx = p / dp;
                x -= dx;
                if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                    let (p, p_prev) = legendre_pair(n, x);
                    dp = nf * (x * p - p_prev) / (x * x - 1.0);
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            // descending Newton roots, stored ascending
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Ok(Self { nodes, weights })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Single-panel rule on `[a, b]`.
    #[inline]
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut sum = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            sum += w * f(mid + half * x);
        }
        half * sum
    }

    /// Returns `(∫f, ∫|f|)` on `[a, b]` from the same evaluations.
    #[inline]
    fn integrate_with_abs<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> (f64, f64) {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut sum = 0.0;
        let mut abs = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            let v = f(mid + half * x);
            sum += w * v;
            abs += w * v.abs();
        }
        (half * sum, half * abs)
    }
}

/// `(P_n(x), P_{n−1}(x))`
#[inline]
fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    let mut p = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let next = ((2.0 * kf - 1.0) * x * p - (kf - 1.0) * p_prev) / kf;
        p_prev = p;
        p = next;
    }
    (p, p_prev)
}

/// Nodes and weights as plain vectors.
pub fn gauss_legendre(npoints: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let rule = GaussLegendre::new(npoints)?;
    Ok((rule.nodes, rule.weights))
}

/// Process-wide cache of immutable rules.
pub fn gauss_legendre_cached(npoints: usize) -> Arc<GaussLegendre> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GaussLegendre>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
    guard
        .entry(npoints)
        .or_insert_with(|| {
            Arc::new(GaussLegendre::new(npoints).expect("cached rule size within range"))
        })
        .clone()
}

/// Panel rule, tolerance and grading policy shared by every integral.
#[derive(Debug, Clone)]
pub struct QuadratureScheme {
    pub points_per_panel: usize,
    pub rel_tol: f64,
    pub max_panels: usize,
    pub grading_ratio: f64,
    /// Number of geometric panels laid toward a singular point on each side
    /// before adaptive bisection takes over.
    pub grading_levels: usize,
    rule: Arc<GaussLegendre>,
}

impl Default for QuadratureScheme {
    fn default() -> Self {
        Self::new(48, 1e-11, 1 << 14, 0.25).expect("default scheme is valid")
    }
}

impl QuadratureScheme {
    pub fn new(
        points_per_panel: usize,
        rel_tol: f64,
        max_panels: usize,
        grading_ratio: f64,
    ) -> Result<Self> {
        if points_per_panel < 2 || points_per_panel > MAX_GAUSS_POINTS {
            return Err(domain(
                "points per panel",
                points_per_panel as f64,
                "2 <= points <= 4096",
            ));
        }
        if !(rel_tol > 100.0 * f64::EPSILON) || !rel_tol.is_finite() {
            return Err(domain("relative tolerance", rel_tol, "rel_tol > 100 eps"));
        }
        if max_panels < 1 {
            return Err(domain("max panels", max_panels as f64, "max_panels >= 1"));
        }
        if !(grading_ratio > 0.0 && grading_ratio < 1.0) {
            return Err(domain("grading ratio", grading_ratio, "0 < ratio < 1"));
        }
        Ok(Self {
            points_per_panel,
            rel_tol,
            max_panels,
            grading_ratio,
            grading_levels: 12,
            rule: gauss_legendre_cached(points_per_panel),
        })
    }

    pub fn with_rel_tol(&self, rel_tol: f64) -> Result<Self> {
        Self::new(self.points_per_panel, rel_tol, self.max_panels, self.grading_ratio)
            .map(|s| Self { grading_levels: self.grading_levels, ..s })
    }

    pub fn with_points(&self, points_per_panel: usize) -> Result<Self> {
        Self::new(points_per_panel, self.rel_tol, self.max_panels, self.grading_ratio)
            .map(|s| Self { grading_levels: self.grading_levels, ..s })
    }

    pub fn rule(&self) -> &GaussLegendre {
        &self.rule
    }
}

/// Integral value with the size of its last refinement step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub err_estimate: f64,
}

struct Panel {
    a: f64,
    b: f64,
    left: (f64, f64),
    right: (f64, f64),
    err: f64,
}

impl Panel {
    fn build<F: FnMut(f64) -> f64>(a: f64, b: f64, coarse: f64, rule: &GaussLegendre, f: &mut F) -> Self {
        let m = 0.5 * (a + b);
        let left = rule.integrate_with_abs(a, m, &mut *f);
        let right = rule.integrate_with_abs(m, b, &mut *f);
        let err = (coarse - left.0 - right.0).abs();
        Self { a, b, left, right, err }
    }

    fn value(&self) -> f64 {
        self.left.0 + self.right.0
    }

    fn abs(&self) -> f64 {
        self.left.1 + self.right.1
    }

    fn splittable(&self) -> bool {
        let m = 0.5 * (self.a + self.b);
        let m1 = 0.5 * (self.a + m);
        m > self.a && m < self.b && m1 > self.a && m1 < m
    }
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// Globally adaptive bisection from a set of initial breakpoints.
///
/// Each panel carries `|G(a,b) − G(a,m) − G(m,b)|` as its error; the worst
/// panel is bisected until the summed error is below `rel_tol · ∫|f|`.
pub fn integrate_adaptive<F: FnMut(f64) -> f64>(
    mut f: F,
    breakpoints: &[f64],
    scheme: &QuadratureScheme,
) -> Result<Estimate> {
    if breakpoints.len() < 2 {
        return Err(Error::Invalid("need at least two breakpoints".into()));
    }
    let rule = scheme.rule();
    let mut heap = BinaryHeap::new();
    let mut frozen_value = 0.0;
    let mut frozen_err = 0.0;
    for w in breakpoints.windows(2) {
        let (a, b) = (w[0], w[1]);
        if !(b > a) {
            return Err(Error::Invalid(format!("breakpoints not increasing: {a} >= {b}")));
        }
        let coarse = rule.integrate(a, b, &mut f);
        heap.push(Panel::build(a, b, coarse, rule, &mut f));
    }
    let mut value: f64 = heap.iter().map(Panel::value).sum();
    let mut abs: f64 = heap.iter().map(Panel::abs).sum();
    let mut err: f64 = heap.iter().map(|p| p.err).sum();
    loop {
        if !value.is_finite() || !err.is_finite() {
            return Err(Error::Invalid("integrand produced a non-finite value".into()));
        }
        if err <= scheme.rel_tol * abs {
            break;
        }
        if heap.len() >= scheme.max_panels {
            return Err(Error::Convergence {
                best: value,
                err_estimate: err,
                panels: heap.len(),
            });
        }
        let worst = match heap.pop() {
            Some(p) => p,
            None => break,
        };
        value -= worst.value();
        abs -= worst.abs();
        err -= worst.err;
        if !worst.splittable() {
            frozen_value += worst.value();
            frozen_err += worst.err;
            value += worst.value();
            abs += worst.abs();
            if heap.is_empty() {
                break;
            }
            continue;
        }
        let m = 0.5 * (worst.a + worst.b);
        for child in [
            Panel::build(worst.a, m, worst.left.0, rule, &mut f),
            Panel::build(m, worst.b, worst.right.0, rule, &mut f),
        ] {
            value += child.value();
            abs += child.abs();
            err += child.err;
            heap.push(child);
        }
    }
    let value = heap.iter().map(Panel::value).sum::<f64>() + frozen_value;
    let err_estimate = heap.iter().map(|p| p.err).sum::<f64>() + frozen_err;
    Ok(Estimate { value, err_estimate })
}

/// `∫_a^b f` by adaptive bisection; integrable endpoint singularities allowed.
pub fn integrate_finite<F: FnMut(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    scheme: &QuadratureScheme,
) -> Result<Estimate> {
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::Invalid(format!("integration interval ({a}, {b}) is empty or infinite")));
    }
    integrate_adaptive(f, &[a, b], scheme)
}

/// Breakpoints on `[a, b]` graded geometrically toward `s`, including `a`,
/// `s` (when interior) and `b`. Panel `k` on each side ends at distance
/// `d · ratio^k` from `s`.
pub fn graded_breakpoints(a: f64, b: f64, s: f64, ratio: f64, levels: usize) -> Vec<f64> {
    let s = s.clamp(a, b);
    let mut points = vec![a];
    let left = s - a;
    if left > 0.0 {
        for k in 1..=levels {
            let x = s - left * ratio.powi(k as i32);
            if x > *points.last().unwrap() && x < s {
                points.push(x);
            }
        }
        points.push(s);
    }
    let right = b - s;
    if right > 0.0 {
        for k in (1..=levels).rev() {
            let x = s + right * ratio.powi(k as i32);
            if x > *points.last().unwrap() && x < b {
                points.push(x);
            }
        }
        points.push(b);
    }
    points
}

/// Fixed composite rule over consecutive breakpoints, no error control.
pub fn integrate_panels<F: FnMut(f64) -> f64>(mut f: F, breakpoints: &[f64], rule: &GaussLegendre) -> f64 {
    breakpoints
        .windows(2)
        .map(|w| rule.integrate(w[0], w[1], &mut f))
        .sum()
}

/// The radial substitution `ξ = (q²−p²)/(q²+p²)`, `p = q √((1−ξ)/(1+ξ))`,
/// and its angular form `ξ = cos θ`, `p = q tan(θ/2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialMap {
    q: f64,
}

impl RadialMap {
    pub fn new(q: f64) -> Result<Self> {
        if !(q > 0.0) || !q.is_finite() {
            return Err(domain("momentum scale q", q, "q > 0"));
        }
        Ok(Self { q })
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn xi(&self, p: f64) -> f64 {
        let (q2, p2) = (self.q * self.q, p * p);
        (q2 - p2) / (q2 + p2)
    }

    pub fn p_of_xi(&self, xi: f64) -> f64 {
        self.q * ((1.0 - xi) / (1.0 + xi)).sqrt()
    }

    /// `|dp/dξ| = q / (√(1−ξ) (1+ξ)^{3/2})`
    pub fn dp_dxi(&self, xi: f64) -> f64 {
        self.q / ((1.0 - xi).sqrt() * (1.0 + xi).powf(1.5))
    }

    pub fn theta(&self, p: f64) -> f64 {
        2.0 * (p / self.q).atan()
    }

    pub fn p_of_theta(&self, theta: f64) -> f64 {
        self.q * (0.5 * theta).tan()
    }

    /// `dp/dθ = (p² + q²) / (2q)`
    pub fn dp_dtheta(&self, theta: f64) -> f64 {
        let c = (0.5 * theta).cos();
        0.5 * self.q / (c * c)
    }
}

/// `∫₀^∞ f(p) dp` through the radial map.
///
/// With `singular_at = Some(s)` the angular interval is split at the image of
/// `s` and graded toward it with ratio `scheme.grading_ratio`; adaptive
/// bisection then refines until `scheme.rel_tol` is met.
pub fn integrate_radial<F: FnMut(f64) -> f64>(
    mut f: F,
    map: RadialMap,
    singular_at: Option<f64>,
    scheme: &QuadratureScheme,
) -> Result<Estimate> {
    let integrand = |theta: f64| {
        let p = map.p_of_theta(theta);
        let v = f(p);
        if v == 0.0 {
            0.0
        } else {
            v * map.dp_dtheta(theta)
        }
    };
    let breakpoints = match singular_at {
        Some(s) => {
            if !(s > 0.0) || !s.is_finite() {
                return Err(domain("singular point", s, "s > 0"));
            }
            graded_breakpoints(0.0, PI, map.theta(s), scheme.grading_ratio, scheme.grading_levels)
        }
        None => vec![0.0, 0.5 * PI, PI],
    };
    integrate_adaptive(integrand, &breakpoints, scheme)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn small_rules() {
        let (x, w) = gauss_legendre(1).unwrap();
        assert_eq!(x, vec![0.0]);
        assert!((w[0] - 2.0).abs() < 1e-15);
        let (x, w) = gauss_legendre(2).unwrap();
        let r = 1.0 / 3f64.sqrt();
        assert!((x[0] + r).abs() < 1e-15 && (x[1] - r).abs() < 1e-15);
        assert!((w[0] - 1.0).abs() < 1e-15 && (w[1] - 1.0).abs() < 1e-15);
        assert!(gauss_legendre(0).is_err());
        assert!(gauss_legendre(4097).is_err());
    }

    #[test]
    fn weights_sum_to_two() {
        for n in [1, 2, 3, 7, 48, 100, 513, 4096] {
            let (x, w) = gauss_legendre(n).unwrap();
            let s: f64 = w.iter().sum();
            assert!((s - 2.0).abs() < 1e-14 * (n as f64).sqrt().max(1.0), "n={n} sum={s}");
            assert!(x.windows(2).all(|p| p[0] < p[1]));
        }
    }

    #[test]
    fn polynomial_exactness() {
        for m in [2usize, 8, 48] {
            let rule = GaussLegendre::new(m).unwrap();
            for deg in 0..(2 * m) {
                let got = rule.integrate(-1.0, 1.0, |x| x.powi(deg as i32));
                let want = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
                assert!((got - want).abs() <= 1e-13 * want.abs().max(1.0), "m={m} deg={deg}");
            }
        }
        let rule = GaussLegendre::new(48).unwrap();
        assert!((rule.integrate(-1.0, 1.0, |x| x.powi(20)) - 2.0 / 21.0).abs() < 1e-15);
    }

    #[test]
    fn finite_examples() {
        let s = QuadratureScheme::default();
        let one = integrate_finite(|_| 1.0, 0.0, 1.0, &s).unwrap();
        assert!((one.value - 1.0).abs() < 1e-15);
        let log = integrate_finite(|x: f64| -x.ln(), 0.0, 1.0, &s).unwrap();
        assert!((log.value - 1.0).abs() < 1e-10, "{:?}", log);
        // B(1/2, 3/4) from ln Γ
        use crate::specfun::ln_gamma;
        let beta = (ln_gamma(0.5).unwrap() + ln_gamma(0.75).unwrap() - ln_gamma(1.25).unwrap()).exp();
        assert!(rel(beta, 2.396_280_469_471_184_4) < 1e-14);
        let est = integrate_finite(|x: f64| (1.0 - x * x).powf(-0.25), -1.0, 1.0, &s).unwrap();
        assert!(rel(est.value, beta) < 1e-10, "{:?}", est);
        assert!(est.err_estimate >= 0.0);
    }

    #[test]
    fn finite_rejects_bad_interval_and_reports_failure() {
        let s = QuadratureScheme::default();
        assert!(integrate_finite(|x| x, 1.0, 1.0, &s).is_err());
        let tight = QuadratureScheme::new(4, 1e-13, 4, 0.25).unwrap();
        match integrate_finite(|x: f64| x.powf(-0.9), 0.0, 1.0, &tight) {
            Err(Error::Convergence { best, err_estimate, .. }) => {
                assert!(best.is_finite() && err_estimate > 0.0)
            }
            other => panic!("expected convergence failure, got {other:?}"),
        }
    }

    #[test]
    fn scheme_validation() {
        assert!(QuadratureScheme::new(1, 1e-10, 10, 0.25).is_err());
        assert!(QuadratureScheme::new(8, 1e-15, 10, 0.25).is_err());
        assert!(QuadratureScheme::new(8, 1e-10, 10, 1.0).is_err());
        assert!(QuadratureScheme::new(8, 1e-10, 0, 0.5).is_err());
    }

    #[test]
    fn radial_map_round_trip() {
        let map = RadialMap::new(0.7).unwrap();
        // ξ → 1 costs digits in 1 − ξ
        assert!(rel(map.p_of_xi(map.xi(1e-3)), 1e-3) < 1e-9);
        for p in [1e-3, 0.2, 0.7, 3.0, 40.0] {
            if p > 0.1 {
                assert!(rel(map.p_of_xi(map.xi(p)), p) < 1e-12);
            }
            assert!(rel(map.p_of_theta(map.theta(p)), p) < 1e-13);
            assert!((map.theta(p).cos() - map.xi(p)).abs() < 1e-14);
            let xi = map.xi(p);
            let h = 1e-4 * (1.0 - xi.abs());
            let fd = (map.p_of_xi(xi - h) - map.p_of_xi(xi + h)) / (2.0 * h);
            assert!(rel(map.dp_dxi(xi), fd) < 1e-6);
        }
        assert!(RadialMap::new(0.0).is_err());
    }

    #[test]
    fn radial_examples() {
        let s = QuadratureScheme::default();
        let map = RadialMap::new(1.0).unwrap();
        let g = integrate_radial(|p| p * p * (-p * p).exp(), map, None, &s).unwrap();
        assert!(rel(g.value, PI.sqrt() / 4.0) < 1e-12);
        let r = integrate_radial(|p| p * p / (1.0 + p * p).powi(3), map, None, &s).unwrap();
        assert!(rel(r.value, PI / 16.0) < 1e-13);
    }

    #[test]
    fn radial_scale_invariance() {
        let s = QuadratureScheme::default();
        let f = |p: f64| p * p * (-p * p).exp();
        for q in [0.3, 1.0, 2.7] {
            let a = integrate_radial(f, RadialMap::new(q).unwrap(), None, &s).unwrap();
            let b = integrate_radial(f, RadialMap::new(2.0 * q).unwrap(), None, &s).unwrap();
            assert!(rel(a.value, b.value) < 1e-10);
        }
    }

    #[test]
    fn graded_breakpoints_shape() {
        let pts = graded_breakpoints(0.0, 1.0, 0.25, 0.25, 4);
        assert_eq!(pts.first(), Some(&0.0));
        assert_eq!(pts.last(), Some(&1.0));
        assert!(pts.contains(&0.25));
        assert!(pts.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(pts.len(), 1 + 4 + 1 + 4 + 1);
        // endpoint singularity: no duplicate point
        let pts = graded_breakpoints(0.0, 1.0, 0.0, 0.5, 3);
        assert_eq!(pts, vec![0.0, 0.125, 0.25, 0.5, 1.0]);
    }

    #[test]
    fn graded_panels_converge_on_log_kernel() {
        // ∫₀^π ln|θ − θ_s| dθ
        let s: f64 = 1.1;
        let exact = s * s.ln() - s + (PI - s) * (PI - s).ln() - (PI - s);
        let rule = GaussLegendre::new(16).unwrap();
        let mut last = f64::INFINITY;
        for levels in [1, 2, 4, 8, 12, 16] {
            let pts = graded_breakpoints(0.0, PI, s, 0.25, levels);
            let v = integrate_panels(|t: f64| (t - s).abs().ln(), &pts, &rule);
            let err = (v - exact).abs();
            assert!(err < last, "levels {levels}: {err} !< {last}");
            last = err;
        }
        assert!(last < 1e-10);
    }
}
