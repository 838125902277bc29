//! Extreme singular values by power and inverse iteration.

use super::matrix::DenseMatrix;
use super::vector::{dot, norm};
use crate::{Error, Result};

/// Default relative stopping tolerance for the iterations.
pub const CONDITION_TOL: f64 = 1e-12;

const MAX_ITERATIONS: usize = 50_000;

pub(crate) fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Fixed start vector with entries in `[0.5, 1.5)`, seeded by the shape.
fn start_vector(rows: usize, cols: usize) -> Vec<f64> {
    let mut state = (rows as u64) << 32 ^ cols as u64;
    (0..cols)
        .map(|_| 0.5 + (splitmix64(&mut state) >> 11) as f64 / (1u64 << 53) as f64)
        .collect()
}

/// Largest eigenvalue of the symmetric positive semidefinite operator `op`.
fn power_iteration(
    start: Vec<f64>,
    tol: f64,
    mut op: impl FnMut(&[f64]) -> Result<Vec<f64>>,
) -> Result<f64> {
    let mut x = start;
    let n0 = norm(&x);
    x.iter_mut().for_each(|v| *v /= n0);
    let mut lambda = 0.0;
    for _ in 0..MAX_ITERATIONS {
        let y = op(&x)?;
        let next = dot(&x, &y);
        let ny = norm(&y);
        if ny == 0.0 {
            return Ok(0.0);
        }
        x = y.into_iter().map(|v| v / ny).collect();
        if (next - lambda).abs() <= tol * next.abs() {
            return Ok(next);
        }
        lambda = next;
    }
    Err(Error::NonConvergence {
        algorithm: "power iteration",
        iterations: MAX_ITERATIONS,
    })
}

/// Spectral norm `‖A‖ = s_max(A)`.
pub fn operator_norm(a: &DenseMatrix, tol: f64) -> Result<f64> {
    if a.rows() == 0 || a.cols() == 0 {
        return Ok(0.0);
    }
    let lambda = power_iteration(start_vector(a.rows(), a.cols()), tol, |x| {
        Ok(a.tr_matvec(&a.matvec(x)))
    })?;
    Ok(lambda.sqrt())
}

/// `s_max(F) / s_min(F)` for a square lower-triangular `F`.
///
/// The smallest singular value comes from power iteration on
/// `(FᵀF)⁻¹ = F⁻¹F⁻ᵀ`, applied through two triangular solves.
pub fn condition_number(f: &DenseMatrix, tol: f64) -> Result<f64> {
    if !f.is_lower_triangular() {
        return Err(Error::NotTriangular);
    }
    if f.rows() == 0 {
        return Err(Error::InvalidInput("empty matrix".into()));
    }
    if let Some(i) = (0..f.rows()).find(|&i| f.get(i, i) == 0.0) {
        return Err(Error::Singular { index: i });
    }
    let s_max = operator_norm(f, tol)?;
    let n = f.rows();
    let inv_sq = power_iteration(start_vector(n, n), tol, |x| {
        let y = f.solve_lower_transposed(x)?;
        f.solve_lower(&y)
    })?;
    Ok(s_max * inv_sq.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_has_condition_one() {
        let c = condition_number(&DenseMatrix::identity(5), CONDITION_TOL).unwrap();
        assert!((c - 1.0).abs() < 1e-12);
    }

    #[test]
    fn diagonal_ratio() {
        let c = condition_number(&DenseMatrix::diagonal(&[2.0, 1.0]), CONDITION_TOL).unwrap();
        assert!((c - 2.0).abs() < 1e-10);
    }

    #[test]
    fn two_by_two_closed_form() {
        // [[1,0],[1,1]] has singular values (√5 ± 1)/2.
        let f = DenseMatrix::new(2, 2, vec![1.0, 0.0, 1.0, 1.0]).unwrap();
        let c = condition_number(&f, CONDITION_TOL).unwrap();
        let expect = (5f64.sqrt() + 1.0) / (5f64.sqrt() - 1.0);
        assert!((c - expect).abs() < 1e-8 * expect);
    }

    #[test]
    fn zero_pivot_is_singular() {
        let f = DenseMatrix::new(2, 2, vec![1.0, 0.0, 1.0, 0.0]).unwrap();
        assert_eq!(condition_number(&f, CONDITION_TOL), Err(Error::Singular { index: 1 }));
    }

    #[test]
    fn rejects_upper_entries() {
        let f = DenseMatrix::new(2, 2, vec![1.0, 1.0, 0.0, 1.0]).unwrap();
        assert_eq!(condition_number(&f, CONDITION_TOL), Err(Error::NotTriangular));
    }

    #[test]
    fn start_vector_is_reproducible() {
        assert_eq!(start_vector(7, 3), start_vector(7, 3));
        assert_ne!(start_vector(7, 3), start_vector(3, 7));
    }
}
