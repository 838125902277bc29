use serde::Serialize;

use crate::numkit::DenseMatrix;
use crate::randwalk::{TimeGrid, WalkPath};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PrefixKind {
    BmPrefix,
    SphereIdeal,
    Custom,
}

/// Lower-triangular `N×N` matrix with a tag recording how it was built.
#[derive(Debug, Clone, PartialEq)]
pub struct PrefixMatrix {
    kind: PrefixKind,
    matrix: DenseMatrix,
}

impl PrefixMatrix {
    /// Wraps an arbitrary lower-triangular matrix.
    pub fn custom(matrix: DenseMatrix) -> Result<Self> {
        if !matrix.is_lower_triangular() {
            return Err(Error::NotTriangular);
        }
        Ok(Self {
            kind: PrefixKind::Custom,
            matrix,
        })
    }

    pub fn kind(&self) -> PrefixKind {
        self.kind
    }

    pub fn size(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> DenseMatrix {
        self.matrix
    }
}

fn deltas(times: &[f64]) -> Vec<f64> {
    let mut prev = 0.0;
    times
        .iter()
        .map(|&t| {
            let d = (t - prev).sqrt();
            prev = t;
            d
        })
        .collect()
}

fn ratio_matrix(delta: &[f64]) -> DenseMatrix {
    let n = delta.len();
    DenseMatrix::from_fn(n, n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Less => 0.0,
        std::cmp::Ordering::Equal => 1.0,
        std::cmp::Ordering::Greater => delta[j] / delta[i],
    })
}

/// `f_ii = 1`, `f_ij = δⱼ/δᵢ` for `i > j`, where `δ₁ = √t₁` and
/// `δᵢ = √(tᵢ − tᵢ₋₁)`.
pub fn build_prefix_matrix_bm(grid: &TimeGrid) -> Result<PrefixMatrix> {
    if grid.is_empty() {
        return Err(Error::InvalidInput("grid is empty".into()));
    }
    Ok(PrefixMatrix {
        kind: PrefixKind::BmPrefix,
        matrix: ratio_matrix(&deltas(grid.times())),
    })
}

/// Prefix matrix of the lattice walk read at the step counts `checkpoints`:
/// `f_ij = √((tⱼ − tⱼ₋₁)/(tᵢ − tᵢ₋₁))` for `i ≥ j`.
pub fn build_prefix_matrix_zn(checkpoints: &[usize]) -> Result<PrefixMatrix> {
    let times: Vec<f64> = checkpoints.iter().map(|&c| c as f64).collect();
    let grid = TimeGrid::new(times)?;
    build_prefix_matrix_bm(&grid)
}

/// `f̃_i1 = cos^{i−1}θ/√n` and `f̃_ij = sin θ · cos^{i−j}θ/√n` for `2 ≤ j ≤ i`.
pub fn build_ftilde_sphere(theta: f64, size: usize, n: usize) -> Result<PrefixMatrix> {
    if !(theta > 0.0 && theta < std::f64::consts::FRAC_PI_2) {
        return Err(Error::InvalidInput(format!("angle must lie in (0, π/2), got {theta}")));
    }
    if size == 0 || n == 0 {
        return Err(Error::InvalidInput("size and dimension must be positive".into()));
    }
    let (s, c) = theta.sin_cos();
    let root_n = (n as f64).sqrt();
    let powers: Vec<f64> = (0..size).map(|k| c.powi(k as i32)).collect();
    let matrix = DenseMatrix::from_fn(size, size, |i, j| {
        if j > i {
            0.0
        } else if j == 0 {
            powers[i] / root_n
        } else {
            s * powers[i - j] / root_n
        }
    });
    Ok(PrefixMatrix {
        kind: PrefixKind::SphereIdeal,
        matrix,
    })
}

/// Rows `(xᵢ − xᵢ₋₁)/δᵢ` of a path (with `x₀ = 0`), the matrix `A` in
/// `positions/δ = F·A`.
pub fn scaled_increments(path: &WalkPath) -> DenseMatrix {
    let delta = deltas(&path.times);
    let n = path.dim();
    DenseMatrix::from_fn(path.len(), n, |i, k| {
        let prev = if i == 0 { 0.0 } else { path.point(i - 1)[k] };
        (path.point(i)[k] - prev) / delta[i]
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::randwalk::{grid_geometric, simulate_bm, RngStream};

    #[test]
    fn three_point_grid() {
        let g = TimeGrid::new(vec![1.0, 2.0, 4.0]).unwrap();
        let f = build_prefix_matrix_bm(&g).unwrap();
        let m = f.matrix();
        assert_eq!(m.get(1, 0), 1.0);
        assert!((m.get(2, 0) - 0.5f64.sqrt()).abs() < 1e-15);
        assert!((m.get(2, 1) - 0.5f64.sqrt()).abs() < 1e-15);
        assert!(m.is_lower_triangular());
    }

    #[test]
    fn single_time() {
        let f = build_prefix_matrix_bm(&TimeGrid::new(vec![0.7]).unwrap()).unwrap();
        assert_eq!(f.matrix().data(), &[1.0]);
    }

    #[test]
    fn prefix_reproduces_scaled_positions() {
        let g = grid_geometric(0.5, 4.0, 12).unwrap();
        let p = simulate_bm(&g, 3, &mut RngStream::new(4, 0)).unwrap();
        let f = build_prefix_matrix_bm(&g).unwrap();
        let fa = f.matrix().matmul(&scaled_increments(&p)).unwrap();
        let d = deltas(g.times());
        for i in 0..g.len() {
            for k in 0..3 {
                let expect = p.point(i)[k] / d[i];
                assert!((fa.get(i, k) - expect).abs() <= 1e-12 * expect.abs().max(1.0));
            }
        }
    }

    #[test]
    fn ftilde_first_column() {
        let theta = std::f64::consts::FRAC_PI_3;
        let f = build_ftilde_sphere(theta, 8, 10).unwrap();
        for i in 0..8 {
            assert_eq!(f.matrix().get(i, 0), theta.cos().powi(i as i32) / 10f64.sqrt());
        }
    }

    #[test]
    fn custom_requires_triangular() {
        let m = DenseMatrix::new(2, 2, vec![1.0, 2.0, 0.0, 1.0]).unwrap();
        assert_eq!(PrefixMatrix::custom(m), Err(Error::NotTriangular));
    }
}
