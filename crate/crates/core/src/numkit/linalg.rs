//! Small dense solvers shared by the hull, NNLS and witness code.

use super::matrix::DenseMatrix;

/// Least-squares solution of `min ‖A x − b‖` by Householder QR.
///
/// Returns `None` when `A` is numerically rank deficient, i.e. some
/// diagonal entry of `R` falls below `rank_tol · max|R_jj|`.
pub fn least_squares(a: &DenseMatrix, b: &[f64], rank_tol: f64) -> Option<Vec<f64>> {
    let (m, n) = (a.rows(), a.cols());
    assert_eq!(b.len(), m);
    if n == 0 {
        return Some(Vec::new());
    }
    if n > m {
        return None;
    }
    // Column-major working copy.
    let mut q: Vec<Vec<f64>> = (0..n).map(|j| (0..m).map(|i| a.get(i, j)).collect()).collect();
    let mut rhs = b.to_vec();
    let mut diag = vec![0.0; n];

    for k in 0..n {
        let col = &q[k];
        let sigma = col[k..].iter().map(|x| x * x).sum::<f64>().sqrt();
        if sigma == 0.0 {
            return None;
        }
        let alpha = if col[k] > 0.0 { -sigma } else { sigma };
        let mut v: Vec<f64> = col[k..].to_vec();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|x| x * x).sum();
        diag[k] = alpha;
        if vnorm2 > 0.0 {
            for cj in q.iter_mut().skip(k + 1) {
                let s: f64 = v.iter().zip(&cj[k..]).map(|(a, b)| a * b).sum::<f64>() * 2.0 / vnorm2;
                for (c, vi) in cj[k..].iter_mut().zip(&v) {
                    *c -= s * vi;
                }
            }
            let s: f64 = v.iter().zip(&rhs[k..]).map(|(a, b)| a * b).sum::<f64>() * 2.0 / vnorm2;
            for (c, vi) in rhs[k..].iter_mut().zip(&v) {
                *c -= s * vi;
            }
        }
    }

    let scale = diag.iter().fold(0.0f64, |acc, d| acc.max(d.abs()));
    if diag.iter().any(|d| d.abs() <= rank_tol * scale) {
        return None;
    }

    let mut x = vec![0.0; n];
    for k in (0..n).rev() {
        let mut s = rhs[k];
        for (j, xj) in x.iter().enumerate().skip(k + 1) {
            s -= q[j][k] * xj;
        }
        x[k] = s / diag[k];
    }
    Some(x)
}

/// Solves `G x = b` for symmetric positive definite `G` (row-major, `n×n`).
///
/// Returns `None` if a Cholesky pivot drops below `pivot_tol · max G_ii`.
pub fn cholesky_solve(g: &[f64], n: usize, b: &[f64], pivot_tol: f64) -> Option<Vec<f64>> {
    assert_eq!(g.len(), n * n);
    let max_diag = (0..n).map(|i| g[i * n + i]).fold(0.0f64, f64::max);
    if max_diag <= 0.0 {
        return None;
    }
    let mut l = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = g[i * n + j];
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            if i == j {
                if s <= pivot_tol * max_diag {
                    return None;
                }
                l[i * n + i] = s.sqrt();
            } else {
                l[i * n + j] = s / l[j * n + j];
            }
        }
    }
    let mut y = vec![0.0; n];
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s -= l[i * n + k] * y[k];
        }
        y[i] = s / l[i * n + i];
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = y[i];
        for k in i + 1..n {
            s -= l[k * n + i] * x[k];
        }
        x[i] = s / l[i * n + i];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn least_squares_recovers_exact_solution() {
        let a = DenseMatrix::new(4, 2, vec![1.0, 0.0, 1.0, 1.0, 1.0, 2.0, 1.0, 3.0]).unwrap();
        let x_true = [0.5, -2.0];
        let b = a.matvec(&x_true);
        let x = least_squares(&a, &b, 1e-12).unwrap();
        assert!((x[0] - 0.5).abs() < 1e-13 && (x[1] + 2.0).abs() < 1e-13);
    }

    #[test]
    fn least_squares_flags_rank_deficiency() {
        let a = DenseMatrix::new(3, 2, vec![1.0, 2.0, 2.0, 4.0, 3.0, 6.0]).unwrap();
        assert!(least_squares(&a, &[1.0, 1.0, 1.0], 1e-10).is_none());
    }

    #[test]
    fn least_squares_residual_is_orthogonal_to_columns() {
        let a = DenseMatrix::new(3, 2, vec![1.0, 1.0, 0.0, 1.0, 1.0, 0.0]).unwrap();
        let b = [1.0, 2.0, 4.0];
        let x = least_squares(&a, &b, 1e-12).unwrap();
        let r: Vec<f64> = a.matvec(&x).iter().zip(&b).map(|(p, q)| q - p).collect();
        for g in a.tr_matvec(&r) {
            assert!(g.abs() < 1e-12);
        }
    }

    #[test]
    fn cholesky_solves_spd_system() {
        let g = [4.0, 1.0, 1.0, 3.0];
        let x = cholesky_solve(&g, 2, &[1.0, 2.0], 1e-14).unwrap();
        assert!((4.0 * x[0] + x[1] - 1.0).abs() < 1e-14);
        assert!((x[0] + 3.0 * x[1] - 2.0).abs() < 1e-14);
        assert!(cholesky_solve(&[1.0, 1.0, 1.0, 1.0], 2, &[1.0, 1.0], 1e-12).is_none());
    }
}
