//! Brownian motion on a grid and the nearest-neighbour walk on ℤⁿ.

use serde::Serialize;

use super::grid::TimeGrid;
use super::rng::RngStream;
use crate::numkit::DenseMatrix;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WalkModel {
    Bm,
    Zn,
    Sphere,
}

/// One realised walk: row `i` of `points` is the position at `times[i]`.
///
/// For the lattice and sphere walks `times` holds step indices.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkPath {
    pub model: WalkModel,
    pub times: Vec<f64>,
    pub points: DenseMatrix,
    pub seed: u64,
    pub stream: u64,
}

impl WalkPath {
    pub fn len(&self) -> usize {
        self.points.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.points.rows() == 0
    }

    pub fn dim(&self) -> usize {
        self.points.cols()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        self.points.row(i)
    }

    /// Position at an exact grid time. Time 0 maps to the origin only when
    /// asked through [`WalkPath::position_or_origin`].
    pub fn position_at(&self, t: f64) -> Option<&[f64]> {
        self.times
            .binary_search_by(|x| x.total_cmp(&t))
            .ok()
            .map(|i| self.points.row(i))
    }

    pub fn position_or_origin(&self, t: f64) -> Result<Vec<f64>> {
        if t == 0.0 {
            return Ok(vec![0.0; self.dim()]);
        }
        self.position_at(t)
            .map(<[f64]>::to_vec)
            .ok_or(Error::MissingGridPoint { time: t })
    }

    /// Checks the per-model row invariants.
    pub fn validate(&self) -> Result<()> {
        match self.model {
            WalkModel::Sphere => {
                for (i, r) in self.points.row_iter().enumerate() {
                    if (crate::numkit::norm(r) - 1.0).abs() > 1e-12 {
                        return Err(Error::InvalidInput(format!("sphere row {i} is not unit")));
                    }
                }
            }
            WalkModel::Zn => {
                if self.points.data().iter().any(|x| x.fract() != 0.0) {
                    return Err(Error::InvalidInput("lattice path has non-integer entries".into()));
                }
            }
            WalkModel::Bm => {}
        }
        if self.times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidInput("path times are not increasing".into()));
        }
        Ok(())
    }
}

/// Standard Brownian motion in ℝⁿ sampled on `grid`, started at the origin
/// at time 0 (the origin is not stored).
///
/// Row `i` is row `i−1` plus `√(tᵢ − tᵢ₋₁)` times a fresh Gaussian vector;
/// coordinates are drawn in order within each row.
pub fn simulate_bm(grid: &TimeGrid, n: usize, rng: &mut RngStream) -> Result<WalkPath> {
    if n == 0 {
        return Err(Error::InvalidInput("dimension must be at least 1".into()));
    }
    let mut data = Vec::with_capacity(grid.len() * n);
    let mut pos = vec![0.0; n];
    for dt in grid.spacings() {
        let s = dt.sqrt();
        for p in pos.iter_mut() {
            *p += s * rng.gaussian();
        }
        data.extend_from_slice(&pos);
    }
    Ok(WalkPath {
        model: WalkModel::Bm,
        times: grid.times().to_vec(),
        points: DenseMatrix::from_vec_unchecked(grid.len(), n, data),
        seed: rng.root_seed(),
        stream: rng.stream_id(),
    })
}

/// Walk on ℤⁿ moving to a uniformly chosen neighbour `±eⱼ` each step,
/// recorded at the given step indices.
pub fn simulate_zn(
    steps: usize,
    checkpoints: &[usize],
    n: usize,
    rng: &mut RngStream,
) -> Result<WalkPath> {
    if n == 0 || steps == 0 {
        return Err(Error::InvalidInput("need n ≥ 1 and at least one step".into()));
    }
    if checkpoints.windows(2).any(|w| w[1] <= w[0])
        || checkpoints.first().is_some_and(|&c| c == 0)
        || checkpoints.last().is_some_and(|&c| c > steps)
    {
        return Err(Error::InvalidInput(
            "checkpoints must be strictly increasing within 1..=steps".into(),
        ));
    }
    let mut pos = vec![0i64; n];
    let mut data = Vec::with_capacity(checkpoints.len() * n);
    let mut next = 0;
    for step in 1..=steps {
        let j = rng.below(2 * n as u64);
        let (coord, sign) = ((j / 2) as usize, if j.is_multiple_of(2) { 1 } else { -1 });
        pos[coord] += sign;
        if next < checkpoints.len() && checkpoints[next] == step {
            data.extend(pos.iter().map(|&x| x as f64));
            next += 1;
            if next == checkpoints.len() {
                break;
            }
        }
    }
    Ok(WalkPath {
        model: WalkModel::Zn,
        times: checkpoints.iter().map(|&c| c as f64).collect(),
        points: DenseMatrix::from_vec_unchecked(checkpoints.len(), n, data),
        seed: rng.root_seed(),
        stream: rng.stream_id(),
    })
}
