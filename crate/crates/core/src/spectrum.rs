//! Quantum numbers, Sturmian eigenvalues, bound-state energies and
//! degeneracies.
//!
//! Degeneracies are exact integers (`u128`), computed from falling factorial
//! products rather than Gamma ratios.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// `(N, n, l, n_r)` with `n = n_r + l + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuantumNumbers {
    pub dim: u32,
    pub n: u32,
    pub l: u32,
    pub n_r: u32,
}

impl QuantumNumbers {
    /// From the principal and orbital quantum numbers.
    pub fn new(dim: u32, n: u32, l: u32) -> Result<Self> {
        if dim < 2 {
            return Err(Error::QuantumNumbers(format!("dimension N = {dim} < 2")));
        }
        if n < 1 {
            return Err(Error::QuantumNumbers("principal quantum number n = 0".into()));
        }
        if l >= n {
            return Err(Error::QuantumNumbers(format!("l = {l} must be below n = {n}")));
        }
        Ok(Self {
            dim,
            n,
            l,
            n_r: n - l - 1,
        })
    }

    /// From the radial and orbital quantum numbers.
    pub fn from_radial(dim: u32, n_r: u32, l: u32) -> Result<Self> {
        Self::new(dim, n_r + l + 1, l)
    }

    /// Gegenbauer superscript `α = l + (N−1)/2` of the radial functions.
    pub fn alpha(&self) -> f64 {
        self.l as f64 + 0.5 * (self.dim as f64 - 1.0)
    }

    /// Kernel degree `ν = l + (N−3)/2 = α − 1`.
    pub fn kernel_degree(&self) -> f64 {
        self.alpha() - 1.0
    }

    /// `n + (N−3)/2`, the effective principal quantum number.
    pub fn effective_n(&self) -> f64 {
        effective_n(self.dim, self.n)
    }
}

fn effective_n(dim: u32, n: u32) -> f64 {
    n as f64 + 0.5 * (dim as f64 - 3.0)
}

/// Potential strength `Z` with the momentum scale `q = √(−2E)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoulombContext {
    pub z: f64,
    pub q: f64,
    pub energy: f64,
}

impl CoulombContext {
    pub fn from_momentum(z: f64, q: f64) -> Result<Self> {
        check_z(z)?;
        if !(q > 0.0) || !q.is_finite() {
            return Err(domain("momentum scale q", q, "q > 0"));
        }
        Ok(Self {
            z,
            q,
            energy: -0.5 * q * q,
        })
    }

    pub fn from_energy(z: f64, energy: f64) -> Result<Self> {
        if !(energy < 0.0) || !energy.is_finite() {
            return Err(domain("energy", energy, "E < 0"));
        }
        Self::from_momentum(z, (-2.0 * energy).sqrt())
    }

    /// Context of the bound level `n`: `q = q_n`, `E = E_n`.
    pub fn bound(dim: u32, z: f64, n: u32) -> Result<Self> {
        let q = bound_momentum_scale(dim, z, n)?;
        Ok(Self {
            z,
            q,
            energy: bound_energy(dim, z, n)?,
        })
    }
}

fn check_z(z: f64) -> Result<()> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(domain("potential strength Z", z, "Z > 0"));
    }
    Ok(())
}

fn check_level(dim: u32, n: u32) -> Result<()> {
    if dim < 2 {
        return Err(Error::QuantumNumbers(format!("dimension N = {dim} < 2")));
    }
    if n < 1 {
        return Err(Error::QuantumNumbers("principal quantum number n = 0".into()));
    }
    Ok(())
}

/// `Π_{k=lo}^{hi} k` (empty product is 1).
fn product(lo: u128, hi: u128) -> Result<u128> {
    (lo..=hi).try_fold(1u128, |acc, k| acc.checked_mul(k)).ok_or_else(overflow)
}

fn overflow() -> Error {
    Error::Invalid("degeneracy exceeds 128-bit integer range".into())
}

/// `d_l^{(N−1)} = (2l+N−2)(l+N−3)! / (l!(N−2)!)`, the number of linearly
/// independent hyperspherical harmonics of degree `l` on `𝕊^{N−1}`.
///
/// For `N = 2` the formula degenerates at `l = 0`; the constant circular
/// harmonic gives 1 there and every `l ≥ 1` has the pair `cos lφ`, `sin lφ`.
pub fn harmonic_dimension(dim: u32, l: u32) -> Result<u128> {
    if dim < 2 {
        return Err(Error::QuantumNumbers(format!("dimension N = {dim} < 2")));
    }
    if dim == 2 {
        return Ok(if l == 0 { 1 } else { 2 });
    }
    let (l, n) = (l as u128, dim as u128);
    // (l+N−3)!/l! = (l+1)(l+2)…(l+N−3)
    let numerator = (2 * l + n - 2).checked_mul(product(l + 1, l + n - 3)?).ok_or_else(overflow)?;
    let denominator = product(1, n - 2)?;
    debug_assert_eq!(numerator % denominator, 0);
    Ok(numerator / denominator)
}

/// `D_n^{(N)} = (2n+N−3)(n+N−3)! / ((n−1)!(N−1)!)`.
pub fn level_degeneracy(dim: u32, n: u32) -> Result<u128> {
    check_level(dim, n)?;
    let (n, d) = (n as u128, dim as u128);
    // (n+N−3)!/(n−1)! = n(n+1)…(n+N−3)
    let numerator = (2 * n + d - 3).checked_mul(product(n, n + d - 3)?).ok_or_else(overflow)?;
    let denominator = product(1, d - 1)?;
    debug_assert_eq!(numerator % denominator, 0);
    Ok(numerator / denominator)
}

/// `λ = (n_r + l + (N−1)/2) q / Z`; depends on `(n_r, l)` only through `n`.
pub fn sturmian_eigenvalue(ctx: &CoulombContext, qn: &QuantumNumbers) -> f64 {
    qn.effective_n() * ctx.q / ctx.z
}

/// `E_n = −Z² / (2 (n + (N−3)/2)²)`.
pub fn bound_energy(dim: u32, z: f64, n: u32) -> Result<f64> {
    check_level(dim, n)?;
    check_z(z)?;
    let kappa = effective_n(dim, n);
    Ok(-z * z / (2.0 * kappa * kappa))
}

/// `q_n = Z / (n + (N−3)/2)`, the momentum scale at which `λ_n = 1`.
pub fn bound_momentum_scale(dim: u32, z: f64, n: u32) -> Result<f64> {
    check_level(dim, n)?;
    check_z(z)?;
    Ok(z / effective_n(dim, n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn harmonic_dimension_examples() {
        assert_eq!(harmonic_dimension(3, 2).unwrap(), 5);
        assert_eq!(harmonic_dimension(4, 2).unwrap(), 9);
        assert_eq!(harmonic_dimension(2, 0).unwrap(), 1);
        for l in 1..10 {
            assert_eq!(harmonic_dimension(2, l).unwrap(), 2);
        }
        assert!(harmonic_dimension(1, 0).is_err());
    }

    #[test]
    fn level_degeneracy_examples() {
        assert_eq!(level_degeneracy(3, 3).unwrap(), 9);
        assert_eq!(level_degeneracy(4, 2).unwrap(), 5);
        assert_eq!(level_degeneracy(2, 4).unwrap(), 7);
        assert!(level_degeneracy(3, 0).is_err());
        assert!(level_degeneracy(40, 1000).is_err());
    }

    #[test]
    fn degeneracy_identities() {
        for dim in 2..=10u32 {
            for n in 1..=20u32 {
                let d = level_degeneracy(dim, n).unwrap();
                assert_eq!(d, harmonic_dimension(dim + 1, n - 1).unwrap(), "N={dim} n={n}");
                let sum: u128 = (0..n).map(|l| harmonic_dimension(dim, l).unwrap()).sum();
                assert_eq!(d, sum, "N={dim} n={n}");
            }
        }
    }

    #[test]
    fn eigenvalue_examples() {
        let qn = |d, nr, l| QuantumNumbers::from_radial(d, nr, l).unwrap();
        let ctx = CoulombContext::from_momentum(1.0, 0.5).unwrap();
        assert_eq!(sturmian_eigenvalue(&ctx, &qn(3, 0, 0)), 0.5);
        let ctx = CoulombContext::from_momentum(1.0, 1.0).unwrap();
        assert_eq!(sturmian_eigenvalue(&ctx, &qn(3, 1, 0)), 2.0);
        let ctx = CoulombContext::bound(5, 2.0, 2).unwrap();
        for (nr, l) in [(1, 0), (0, 1)] {
            assert!((sturmian_eigenvalue(&ctx, &qn(5, nr, l)) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn energy_examples() {
        assert_eq!(bound_energy(3, 1.0, 1).unwrap(), -0.5);
        assert_eq!(bound_energy(2, 1.0, 1).unwrap(), -2.0);
        assert!((bound_energy(5, 2.0, 2).unwrap() + 2.0 / 9.0).abs() < 1e-16);
        assert_eq!(bound_momentum_scale(3, 1.0, 1).unwrap(), 1.0);
        assert_eq!(bound_momentum_scale(3, 1.0, 2).unwrap(), 0.5);
        assert!((bound_momentum_scale(4, 1.0, 1).unwrap() - 2.0 / 3.0).abs() < 1e-16);
        assert!(bound_energy(3, -1.0, 1).is_err());
        assert!(bound_energy(1, 1.0, 1).is_err());
    }

    #[test]
    fn quantum_number_validation() {
        assert!(QuantumNumbers::new(3, 2, 2).is_err());
        assert!(QuantumNumbers::new(3, 0, 0).is_err());
        assert!(QuantumNumbers::new(1, 1, 0).is_err());
        let qn = QuantumNumbers::new(4, 5, 2).unwrap();
        assert_eq!(qn.n_r, 2);
        assert_eq!(qn.alpha(), 3.5);
        assert_eq!(qn.kernel_degree(), 2.5);
    }

    #[test]
    fn context_constructors() {
        let ctx = CoulombContext::from_energy(2.0, -0.125).unwrap();
        assert!((ctx.q - 0.5).abs() < 1e-16);
        assert!(CoulombContext::from_energy(1.0, 0.1).is_err());
        assert!(CoulombContext::from_momentum(0.0, 1.0).is_err());
    }

    proptest! {
        #[test]
        fn eigenvalue_depends_on_principal_only(dim in 2u32..10, n in 1u32..30, q in 0.01f64..10.0, z in 0.1f64..5.0) {
            let ctx = CoulombContext::from_momentum(z, q).unwrap();
            let reference = sturmian_eigenvalue(&ctx, &QuantumNumbers::new(dim, n, 0).unwrap());
            for l in 0..n {
                let lam = sturmian_eigenvalue(&ctx, &QuantumNumbers::new(dim, n, l).unwrap());
                prop_assert_eq!(lam, reference);
            }
        }

        #[test]
        fn energies_consistent(dim in 2u32..12, n in 1u32..60, z in 0.1f64..10.0) {
            let e = bound_energy(dim, z, n).unwrap();
            let q = bound_momentum_scale(dim, z, n).unwrap();
            prop_assert!((q * q + 2.0 * e).abs() <= 1e-14 * q * q);
            prop_assert!(bound_energy(dim, z, n + 1).unwrap() > e);
            prop_assert!(e < 0.0);
            // unit strength: N-dimensional levels are 3-D levels at shifted n
            let kappa = n as f64 + 0.5 * (dim as f64 - 3.0);
            prop_assert!((e + z * z / (2.0 * kappa * kappa)).abs() <= 1e-15 * e.abs());
            let ctx = CoulombContext::bound(dim, z, n).unwrap();
            let lam = sturmian_eigenvalue(&ctx, &QuantumNumbers::new(dim, n, 0).unwrap());
            prop_assert!((lam - 1.0).abs() < 1e-14);
        }
    }
}
