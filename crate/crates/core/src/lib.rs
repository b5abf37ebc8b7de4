//! Bound states of the N-dimensional Coulomb problem in momentum space.
//!
//! The crate is organised bottom-up:
//!
//! * [`specfun`] – log-Gamma, Gegenbauer polynomials, Legendre functions of the
//!   second kind `Q_ν(z)` (hypergeometric and Heine-integral evaluators) and
//!   hypersphere areas.
//! * [`quadrature`] – Gauss–Legendre rules, adaptive bisection, and the radial
//!   map `ξ = (q²−p²)/(q²+p²)` used for every integral over `p ∈ (0, ∞)`.
//! * [`spectrum`] – quantum numbers, Sturmian eigenvalues, energies and
//!   degeneracies.
//! * [`radial`] – radial Sturmians, bound-state functions, the Legendre-Q
//!   kernel and the verification checks built on them, including a Nyström
//!   discretisation of the radial integral equation.
//! * [`potential_ft`] – Fourier transform of the power-law potential.
//!
//! Units: `ħ = m = e²/(4πε₀) = 1`, so the Bohr momentum is 1 and energies are in
//! Hartree.

pub mod error;
pub mod linalg;
pub mod potential_ft;
pub mod quadrature;
pub mod radial;
pub mod report;
pub mod specfun;
pub mod spectrum;

pub use error::{Error, Result};
pub use quadrature::{Estimate, QuadratureScheme, RadialMap};
pub use radial::{KernelSpec, RadialFunction, RadialKind};
pub use report::VerificationReport;
pub use spectrum::{CoulombContext, QuantumNumbers};
