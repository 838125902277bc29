use serde::Serialize;

use crate::numkit::{cholesky_solve, dot, norm, DenseMatrix};
use crate::{Error, Result};

/// Relative Cholesky pivot below which the scaled vectors count as
/// linearly dependent.
const GRAM_PIVOT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Ubar {
    pub u: Vec<f64>,
    /// Distance from the origin to the affine hull of `{Xᵢ/|bᵢ|}`.
    pub dist: f64,
    /// Rows that took part (those with `bᵢ ≠ 0`).
    pub active: Vec<usize>,
}

/// Unit vector `ū ∈ span{Xᵢ}` with `⟨ū, Xᵢ⟩ = dist·|bᵢ|` for every row.
///
/// Solves `G c = 𝟙` for the Gram matrix `Gᵢⱼ = ⟨Xᵢ/|bᵢ|, Xⱼ/|bⱼ|⟩`; then
/// `p = Σ cⱼ Xⱼ/|bⱼ|` is the point of the affine hull nearest the origin
/// up to scale, `dist = 1/√(Σ cⱼ)` and `ū = p/‖p‖`. Rows with `bᵢ = 0` are
/// dropped; they satisfy the identity trivially.
pub fn build_ubar(x: &DenseMatrix, b: &[f64], tol: f64) -> Result<Ubar> {
    let (m, d) = (x.rows(), x.cols());
    if b.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            actual: b.len(),
        });
    }
    if 2 * m > d {
        return Err(Error::CapacityExceeded {
            needed: m,
            capacity: d / 2,
        });
    }
    let active: Vec<usize> = (0..m).filter(|&i| b[i] != 0.0).collect();
    if active.is_empty() {
        return Err(Error::DegenerateInput("all coefficients are zero".into()));
    }
    let scaled: Vec<Vec<f64>> = active
        .iter()
        .map(|&i| x.row(i).iter().map(|v| v / b[i].abs()).collect())
        .collect();
    let k = active.len();
    let mut g = vec![0.0; k * k];
    for i in 0..k {
        for j in 0..=i {
            let v = dot(&scaled[i], &scaled[j]);
            g[i * k + j] = v;
            g[j * k + i] = v;
        }
    }
    let c = cholesky_solve(&g, k, &vec![1.0; k], GRAM_PIVOT_TOL.max(tol * 1e-4))
        .ok_or_else(|| Error::DegenerateInput("vectors are linearly dependent".into()))?;
    let mut p = vec![0.0; d];
    for (cj, row) in c.iter().zip(&scaled) {
        for (pk, v) in p.iter_mut().zip(row) {
            *pk += cj * v;
        }
    }
    let pn = norm(&p);
    let sum: f64 = c.iter().sum();
    if !(pn > 0.0) || !(sum > 0.0) {
        return Err(Error::DegenerateInput("Gram system has no positive solution".into()));
    }
    let u: Vec<f64> = p.iter().map(|v| v / pn).collect();
    let dist = 1.0 / sum.sqrt();
    let worst = scaled
        .iter()
        .map(|row| (dot(&u, row) - dist).abs())
        .fold(0.0, f64::max);
    if worst > tol.max(1e-9) * dist * k as f64 {
        return Err(Error::DegenerateInput(format!(
            "equal-inner-product condition violated by {worst:e}"
        )));
    }
    Ok(Ubar { u, dist, active })
}

/// `(v + αΔ)/√(1 + α²)` for orthogonal unit vectors `v`, `Δ`.
pub fn refine_direction(v: &[f64], delta: &[f64], alpha: f64) -> Result<Vec<f64>> {
    if v.len() != delta.len() {
        return Err(Error::DimensionMismatch {
            expected: v.len(),
            actual: delta.len(),
        });
    }
    let inner = dot(v, delta);
    if inner.abs() > 1e-10 {
        return Err(Error::NotOrthogonal { inner });
    }
    let s = (1.0 + alpha * alpha).sqrt();
    Ok(v.iter().zip(delta).map(|(a, b)| (a + alpha * b) / s).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BridgeSplit {
    /// Linear interpolation `w(s)` between the values at `a` and `b`.
    pub w: Vec<f64>,
    /// Per-coordinate variance `(b−s)(s−a)/(b−a)` of the residual
    /// `BM(s) − w(s)`.
    pub variance: f64,
}

pub fn bridge_split(at_a: &[f64], at_b: &[f64], a: f64, b: f64, s: f64) -> Result<BridgeSplit> {
    if !(a < b) || !(a..=b).contains(&s) {
        return Err(Error::InvalidInput(format!("need a < b and s in [a, b], got a={a}, b={b}, s={s}")));
    }
    if at_a.len() != at_b.len() {
        return Err(Error::DimensionMismatch {
            expected: at_a.len(),
            actual: at_b.len(),
        });
    }
    let (wa, wb) = ((b - s) / (b - a), (s - a) / (b - a));
    Ok(BridgeSplit {
        w: at_a.iter().zip(at_b).map(|(x, y)| wa * x + wb * y).collect(),
        variance: (b - s) * (s - a) / (b - a),
    })
}
