//! Default pass/fail tolerances. Bump [`TOLERANCE_TABLE_VERSION`] whenever an
//! entry changes.

use crate::args::Check;

pub const TOLERANCE_TABLE_VERSION: &str = "1";

pub fn default_tolerance(check: Check) -> f64 {
    match check {
        Check::Residual => 1e-6,
        Check::Gram => 1e-9,
        Check::Ossicini => 1e-8,
        Check::Cohl => 1e-9,
        Check::Closure => 1e-10,
        Check::Fourier => 1e-10,
        Check::Nystrom => 1e-3,
        Check::Degeneracy => 0.0,
        Check::Specfun => 1e-10,
    }
}

/// The tolerance in force and where it came from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub value: f64,
    pub overridden: bool,
}

impl Tolerance {
    pub fn resolve(check: Check, tol: Option<f64>) -> Self {
        match tol {
            Some(value) => Tolerance {
                value,
                overridden: true,
            },
            None => Tolerance {
                value: default_tolerance(check),
                overridden: false,
            },
        }
    }

    pub fn source(&self) -> String {
        if self.overridden {
            "override".into()
        } else {
            format!("defaults-v{TOLERANCE_TABLE_VERSION}")
        }
    }
}
