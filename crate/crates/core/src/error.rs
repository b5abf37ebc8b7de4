use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what}: argument {value} outside the domain {domain}")]
    Domain {
        what: &'static str,
        value: f64,
        domain: &'static str,
    },

    /// `Q_ν(z)` was requested from the hypergeometric series with `z` too close to 1.
    #[error("hypergeometric Q_nu(z) needs z >= {threshold}, got z = {z}; use the integral evaluator")]
    DeferToIntegral { z: f64, threshold: f64 },

    #[error("quadrature did not reach tolerance after {panels} panels (best {best}, error estimate {err_estimate})")]
    Convergence {
        best: f64,
        err_estimate: f64,
        panels: usize,
    },

    #[error("kernel evaluated on its logarithmic singularity p = p' = {p}")]
    Singular { p: f64 },

    #[error("invalid quantum numbers: {0}")]
    QuantumNumbers(String),

    #[error("Jacobi eigensolver did not converge in {sweeps} sweeps (off-diagonal norm {off_norm})")]
    EigenNoConvergence { sweeps: usize, off_norm: f64 },

    #[error("invalid argument: {0}")]
    Invalid(String),
}

pub(crate) fn domain(what: &'static str, value: f64, domain_desc: &'static str) -> Error {
    Error::Domain {
        what,
        value,
        domain: domain_desc,
    }
}
