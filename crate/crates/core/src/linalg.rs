//! Dense symmetric eigenvalues by cyclic Jacobi rotations.

use crate::error::{Error, Result};

pub const MAX_JACOBI_SWEEPS: usize = 60;

/// Row-major symmetric matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    /// Sets both `(i, j)` and `(j, i)`.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
        self.data[j * self.n + i] = v;
    }

    fn off_diagonal_norm(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                s += self.get(i, j).powi(2);
            }
        }
        (2.0 * s).sqrt()
    }

    fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

/// Eigenvalues of a symmetric matrix, ascending.
///
/// Cyclic sweeps with the threshold strategy of Rutishauser: during the
/// first three sweeps only elements above `0.2·off/n²` are rotated away.
pub fn symmetric_eigenvalues(matrix: &SymMatrix) -> Result<Vec<f64>> {
    let n = matrix.dim();
    let mut a = matrix.clone();
    let scale = a.frobenius_norm();
    if n == 0 {
        return Ok(Vec::new());
    }
    if scale == 0.0 {
        return Ok(vec![0.0; n]);
    }
    for sweep in 0..MAX_JACOBI_SWEEPS {
        let off = a.off_diagonal_norm();
        if off <= 1e-15 * scale {
            let mut eig: Vec<f64> = (0..n).map(|i| a.get(i, i)).collect();
            eig.sort_by(f64::total_cmp);
            return Ok(eig);
        }
        let threshold = if sweep < 3 {
            0.2 * off / (n * n) as f64
        } else {
            0.0
        };
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                if apq.abs() <= threshold {
                    continue;
                }
                let app = a.get(p, p);
                let aqq = a.get(q, q);
                if sweep >= 3 && apq.abs() <= 1e-18 * (app.abs() + aqq.abs()) {
                    a.set(p, q, 0.0);
                    continue;
                }
                let theta = 0.5 * (aqq - app) / apq;
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);
                a.data[p * n + p] = app - t * apq;
                a.data[q * n + q] = aqq + t * apq;
                a.set(p, q, 0.0);
                for r in 0..n {
                    if r == p || r == q {
                        continue;
                    }
                    let arp = a.get(r, p);
                    let arq = a.get(r, q);
                    a.set(r, p, arp - s * (arq + tau * arp));
                    a.set(r, q, arq + s * (arp - tau * arq));
                }
            }
        }
    }
    Err(Error::EigenNoConvergence {
        sweeps: MAX_JACOBI_SWEEPS,
        off_norm: a.off_diagonal_norm(),
    })
}
