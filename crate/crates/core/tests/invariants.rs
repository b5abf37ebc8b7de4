use std::f64::consts::PI;

use coulomb_momentum::quadrature::integrate_radial;
use coulomb_momentum::radial::{apply_operator, kernel, residual_check, RadialFunction, RadialKind};
use coulomb_momentum::specfun::{gegenbauer, legendre_q, GegenbauerOrder, LegendreQArg};
use coulomb_momentum::spectrum::sturmian_eigenvalue;
use coulomb_momentum::{
    CoulombContext, KernelSpec, QuadratureScheme, QuantumNumbers, RadialMap, VerificationReport,
};
use proptest::prelude::*;

fn explicit_gegenbauer(n: usize, a: f64, x: f64) -> f64 {
    match n {
        0 => 1.0,
        1 => 2.0 * a * x,
        2 => -a + 2.0 * a * (1.0 + a) * x * x,
        3 => -2.0 * a * (1.0 + a) * x + 4.0 / 3.0 * a * (1.0 + a) * (2.0 + a) * x.powi(3),
        4 => {
            a * (1.0 + a) / 2.0 - 2.0 * a * (1.0 + a) * (2.0 + a) * x * x
                + 2.0 / 3.0 * a * (1.0 + a) * (2.0 + a) * (3.0 + a) * x.powi(4)
        }
        _ => unreachable!(),
    }
}

#[test]
fn legendre_q_integer_recurrence() {
    for z in [1.5, 2.0, 5.0] {
        let q = |n: u32| legendre_q(LegendreQArg::new(n as f64, z).unwrap()).unwrap();
        for n in 1..=10u32 {
            let lhs = (2 * n + 1) as f64 * z * q(n);
            let rhs = (n + 1) as f64 * q(n + 1) + n as f64 * q(n - 1);
            assert!((lhs - rhs).abs() <= 1e-10 * lhs.abs(), "n={n} z={z}");
        }
    }
}

#[test]
fn legendre_q_positive_and_decreasing() {
    for nu in [-0.5, 0.0, 0.5, 1.0, 2.5, 7.5] {
        let mut last = f64::INFINITY;
        for k in 0..200 {
            let z = 1.0 + 10f64.powf(-8.0 + 10.0 * k as f64 / 199.0);
            let v = legendre_q(LegendreQArg::new(nu, z).unwrap()).unwrap();
            assert!(v > 0.0 && v < last, "nu={nu} z={z}");
            last = v;
        }
    }
}

#[test]
fn eigenrelation_spot_cells() {
    let scheme = QuadratureScheme::new(16, 1e-10, 1 << 12, 0.25).unwrap();
    for (dim, n_r, l, q, z) in [(2, 3, 2, 2.7, 1.0), (5, 0, 0, 0.3, 2.0), (6, 2, 1, 1.1, 0.5)] {
        let ctx = CoulombContext::from_momentum(z, q).unwrap();
        let qn = QuantumNumbers::from_radial(dim, n_r, l).unwrap();
        let grid: Vec<f64> = (0..20).map(|k| 0.01 * q * 1000f64.powf(k as f64 / 19.0)).collect();
        let report = residual_check(&ctx, &qn, &grid, &scheme, 1e-6).unwrap();
        assert!(report.passed, "{report:?}");
    }
}

#[test]
fn report_json_round_trip() {
    let report = VerificationReport::builder("sample")
        .param("dim", 3)
        .param("q", 0.25)
        .finish(1.5e-9, 1e-6);
    let text = serde_json::to_string(&report).unwrap();
    let back: VerificationReport = serde_json::from_str(&text).unwrap();
    assert_eq!(back, report);
    assert_eq!(serde_json::to_string(&back).unwrap(), text);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gegenbauer_matches_explicit(n in 0usize..5, a in 0.1f64..6.0, x in -1.0f64..1.0) {
        let v = gegenbauer(GegenbauerOrder::new(n, a).unwrap(), x).unwrap();
        let e = explicit_gegenbauer(n, a, x);
        prop_assert!((v - e).abs() <= 1e-12 * e.abs().max(1.0));
    }

    #[test]
    fn kernel_symmetric(dim in 2u32..8, l in 0u32..5, q in 0.05f64..5.0, p in 0.001f64..50.0, r in 0.001f64..50.0) {
        prop_assume!(p != r);
        let spec = KernelSpec::new(CoulombContext::from_momentum(1.0, q).unwrap(), l, dim).unwrap();
        prop_assert_eq!(kernel(&spec, p, r).unwrap().to_bits(), kernel(&spec, r, p).unwrap().to_bits());
    }

    #[test]
    fn verdict_is_metric_below_tolerance(metric in 0.0f64..2.0, tol in 0.0f64..2.0) {
        let r = VerificationReport::builder("x").finish(metric, tol);
        prop_assert_eq!(r.passed, metric <= tol);
    }

    #[test]
    fn radial_integral_scale_invariant(q in 0.05f64..20.0) {
        let scheme = QuadratureScheme::default();
        let exact = PI.sqrt() / 4.0;
        for s in [q, 2.0 * q] {
            let v = integrate_radial(|p| p * p * (-p * p).exp(), RadialMap::new(s).unwrap(), None, &scheme).unwrap().value;
            prop_assert!((v - exact).abs() <= 1e-10 * exact);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn eigenrelation_pointwise(dim in 2u32..6, n_r in 0u32..4, l in 0u32..3, q in 0.2f64..3.0, t in 0.05f64..0.95) {
        let scheme = QuadratureScheme::new(16, 1e-10, 1 << 12, 0.25).unwrap();
        let ctx = CoulombContext::from_momentum(1.0, q).unwrap();
        let qn = QuantumNumbers::from_radial(dim, n_r, l).unwrap();
        let f = RadialFunction::new(RadialKind::Sturmian, ctx, qn).unwrap();
        let spec = KernelSpec::new(ctx, l, dim).unwrap();
        let p = q * (0.5 * PI * t).tan();
        let lam = sturmian_eigenvalue(&ctx, &qn);
        let applied = apply_operator(&spec, |x| f.eval(x).unwrap(), p, &scheme).unwrap().value;
        let lhs = (p * p + q * q) * f.eval(p).unwrap();
        let peak = (1..200).map(|k| { let x = q * (0.5 * PI * k as f64 / 200.0).tan(); ((x * x + q * q) * f.eval(x).unwrap()).abs() }).fold(0.0, f64::max);
        prop_assert!((lhs - lam * applied).abs() <= 1e-6 * lhs.abs().max(1e-3 * peak));
    }
}
