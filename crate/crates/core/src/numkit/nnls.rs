//! Lawson–Hanson active-set nonnegative least squares.

use super::linalg::least_squares;
use super::matrix::DenseMatrix;
use super::vector::dot;
use crate::{Error, Result};

/// Default KKT tolerance, relative to `‖M‖_F · ‖y‖`.
pub const NNLS_TOL: f64 = 1e-7;

const RANK_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct NnlsSolution {
    pub z: Vec<f64>,
    pub residual_norm: f64,
    /// Largest KKT violation divided by `‖M‖_F · ‖y‖`.
    pub kkt_residual: f64,
    pub iterations: usize,
}

/// Minimises `‖y − M z‖` over `z ≥ 0`.
///
/// With `w = Mᵀ(y − Mz)` the returned solution satisfies `|wᵢ| ≤ tol·s` on
/// the support and `wᵢ ≤ tol·s` off it, where `s = ‖M‖_F·‖y‖`.
pub fn nnls(m: &DenseMatrix, y: &[f64], tol: f64) -> Result<NnlsSolution> {
    if y.len() != m.rows() {
        return Err(Error::DimensionMismatch {
            expected: m.rows(),
            actual: y.len(),
        });
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!("tolerance must be positive, got {tol}")));
    }
    let n = m.cols();
    let scale = m.frobenius_norm() * dot(y, y).sqrt();
    if scale == 0.0 {
        return Ok(NnlsSolution {
            z: vec![0.0; n],
            residual_norm: dot(y, y).sqrt(),
            kkt_residual: 0.0,
            iterations: 0,
        });
    }
    let tol_abs = tol * scale;
    let cap = 30 * n + 100;

    let mut z = vec![0.0; n];
    let mut passive = vec![false; n];
    let mut excluded = vec![false; n];
    let mut w = m.tr_matvec(y);
    let mut iterations = 0;

    loop {
        let candidate = (0..n)
            .filter(|&j| !passive[j] && !excluded[j] && w[j] > tol_abs)
            .max_by(|&a, &b| w[a].total_cmp(&w[b]));
        let Some(j) = candidate else { break };
        iterations += 1;
        if iterations > cap {
            return Err(Error::NonConvergence {
                algorithm: "nnls",
                iterations: cap,
            });
        }
        passive[j] = true;

        let mut entered = true;
        loop {
            let idx: Vec<usize> = (0..n).filter(|&i| passive[i]).collect();
            let Some(s_p) = least_squares(&m.select_cols(&idx), y, RANK_TOL) else {
                // Entering column is dependent on the current support.
                if entered {
                    passive[j] = false;
                    excluded[j] = true;
                    break;
                }
                return Err(Error::NonConvergence {
                    algorithm: "nnls",
                    iterations,
                });
            };
            let first_pass = entered;
            entered = false;
            if s_p.iter().all(|&s| s > 0.0) {
                z.iter_mut().for_each(|x| *x = 0.0);
                for (&i, &s) in idx.iter().zip(&s_p) {
                    z[i] = s;
                }
                break;
            }
            let mut alpha = f64::INFINITY;
            let mut leaving = idx[0];
            for (&i, &s) in idx.iter().zip(&s_p) {
                if s <= 0.0 {
                    let a = z[i] / (z[i] - s);
                    if a < alpha {
                        alpha = a;
                        leaving = i;
                    }
                }
            }
            for (&i, &s) in idx.iter().zip(&s_p) {
                z[i] += alpha * (s - z[i]);
            }
            z[leaving] = 0.0;
            if first_pass && leaving == j && alpha == 0.0 {
                // Roundoff says the entering column cannot improve the fit.
                excluded[j] = true;
            }
            for &i in &idx {
                if z[i] <= 0.0 {
                    z[i] = 0.0;
                    passive[i] = false;
                }
            }
        }
        if passive[j] {
            excluded.iter_mut().for_each(|e| *e = false);
        }
        let r = residual(m, y, &z);
        w = m.tr_matvec(&r);
    }

    let r = residual(m, y, &z);
    let w = m.tr_matvec(&r);
    let violation = (0..n)
        .map(|i| if z[i] > 0.0 { w[i].abs() } else { w[i].max(0.0) })
        .fold(0.0f64, f64::max);
    if violation > tol_abs {
        return Err(Error::NonConvergence {
            algorithm: "nnls",
            iterations,
        });
    }
    Ok(NnlsSolution {
        residual_norm: dot(&r, &r).sqrt(),
        kkt_residual: violation / scale,
        z,
        iterations,
    })
}

fn residual(m: &DenseMatrix, y: &[f64], z: &[f64]) -> Vec<f64> {
    let mz = m.matvec(z);
    y.iter().zip(&mz).map(|(a, b)| a - b).collect()
}
