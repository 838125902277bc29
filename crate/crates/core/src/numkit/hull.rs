//! Origin-in-hull decisions via Wolfe's minimum-norm-point algorithm.
//!
//! For a finite point set `X`, the point `p ∈ conv X` of least norm is
//! characterised by `⟨x, p⟩ ≥ ‖p‖²` for every `x ∈ X`. If `p = 0` the origin
//! is a convex combination of the points; otherwise `p/‖p‖` strictly
//! separates the whole set from the origin. Either way the answer carries a
//! certificate that is re-checked before it is returned.

use super::linalg::least_squares;
use super::matrix::DenseMatrix;
use super::vector::{dot, RealVector};
use crate::{Error, Result};

/// Default absolute tolerance for hull certificates.
pub const CERTIFICATE_TOL: f64 = 1e-9;

/// Weights below this are treated as zero inside the minor cycle.
const WEIGHT_EPS: f64 = 1e-12;
/// Relative rank tolerance for the affine-hull least-squares solve.
const AFFINE_RANK_TOL: f64 = 1e-11;

#[derive(Debug, Clone, PartialEq)]
pub struct MinNormPoint {
    pub point: RealVector,
    /// Active points as `(row index, weight)`; weights are positive and sum
    /// to one.
    pub support: Vec<(usize, f64)>,
    pub major_cycles: usize,
}

impl MinNormPoint {
    pub fn norm(&self) -> f64 {
        self.point.norm()
    }

    /// Full-length coefficient vector over all `count` input points.
    pub fn coefficients(&self, count: usize) -> Vec<f64> {
        let mut c = vec![0.0; count];
        for &(i, w) in &self.support {
            c[i] = w;
        }
        c
    }
}

/// Outcome of an origin-membership test.
#[derive(Debug, Clone, PartialEq)]
pub enum HullVerdict {
    /// `0 = Σ λᵢ xᵢ` with the listed sparse convex coefficients.
    Inside {
        coefficients: Vec<(usize, f64)>,
        min_norm: f64,
    },
    /// Every point satisfies `⟨xᵢ, direction⟩ ≥ margin > 0`.
    Outside {
        direction: RealVector,
        margin: f64,
        min_norm: f64,
    },
    /// Too close to the boundary to certify either way.
    Degenerate { min_norm: f64 },
}

impl HullVerdict {
    pub fn is_inside(&self) -> bool {
        matches!(self, HullVerdict::Inside { .. })
    }

    pub fn is_outside(&self) -> bool {
        matches!(self, HullVerdict::Outside { .. })
    }

    pub fn min_norm(&self) -> f64 {
        match self {
            HullVerdict::Inside { min_norm, .. }
            | HullVerdict::Outside { min_norm, .. }
            | HullVerdict::Degenerate { min_norm } => *min_norm,
        }
    }

    pub fn direction(&self) -> Option<&RealVector> {
        match self {
            HullVerdict::Outside { direction, .. } => Some(direction),
            _ => None,
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            HullVerdict::Inside { .. } => "inside",
            HullVerdict::Outside { .. } => "outside",
            HullVerdict::Degenerate { .. } => "degenerate",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HullOptions {
    pub tol: f64,
    /// Report `‖p‖ ∈ (tol, 10·tol]` as [`HullVerdict::Degenerate`] instead of
    /// `Outside`.
    pub strict: bool,
}

impl Default for HullOptions {
    fn default() -> Self {
        Self {
            tol: CERTIFICATE_TOL,
            strict: false,
        }
    }
}

/// Minimum-norm point of `conv{rows of points}`.
pub fn min_norm_point(points: &DenseMatrix, tol: f64) -> Result<MinNormPoint> {
    check_points(points, tol)?;
    let start = (0..points.rows())
        .map(|i| (i, dot(points.row(i), points.row(i))))
        .fold((0, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best })
        .0;
    wolfe(points, tol, vec![start], vec![1.0])
}

/// Like [`min_norm_point`], restarting from a previous support (for example
/// the result on a prefix of the same point list).
pub fn min_norm_point_from(
    points: &DenseMatrix,
    tol: f64,
    start: &[(usize, f64)],
) -> Result<MinNormPoint> {
    check_points(points, tol)?;
    if start.is_empty() {
        return min_norm_point(points, tol);
    }
    if start.iter().any(|&(i, w)| i >= points.rows() || !(w > 0.0)) {
        return Err(Error::InvalidInput("warm start support is invalid".into()));
    }
    let total: f64 = start.iter().map(|s| s.1).sum();
    let (support, weights) = start.iter().map(|&(i, w)| (i, w / total)).unzip();
    wolfe(points, tol, support, weights)
}

fn check_points(points: &DenseMatrix, tol: f64) -> Result<()> {
    if points.rows() == 0 {
        return Err(Error::InvalidInput("point set is empty".into()));
    }
    if points.cols() == 0 {
        return Err(Error::InvalidInput("points have dimension zero".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!("tolerance must be positive, got {tol}")));
    }
    Ok(())
}

fn combine(points: &DenseMatrix, support: &[usize], weights: &[f64]) -> Vec<f64> {
    let mut x = vec![0.0; points.cols()];
    for (&i, &w) in support.iter().zip(weights) {
        for (xk, &pk) in x.iter_mut().zip(points.row(i)) {
            *xk += w * pk;
        }
    }
    x
}

/// Affine weights (summing to one) of the least-norm point of `aff(S)`.
fn affine_minimizer(points: &DenseMatrix, support: &[usize]) -> Option<Vec<f64>> {
    let k = support.len();
    if k == 1 {
        return Some(vec![1.0]);
    }
    let base = points.row(support[0]);
    let d = DenseMatrix::from_fn(points.cols(), k - 1, |r, c| {
        points.get(support[c + 1], r) - base[r]
    });
    let rhs: Vec<f64> = base.iter().map(|x| -x).collect();
    let c = least_squares(&d, &rhs, AFFINE_RANK_TOL)?;
    let mut mu = Vec::with_capacity(k);
    mu.push(1.0 - c.iter().sum::<f64>());
    mu.extend(c);
    Some(mu)
}

fn wolfe(
    points: &DenseMatrix,
    tol: f64,
    mut support: Vec<usize>,
    mut weights: Vec<f64>,
) -> Result<MinNormPoint> {
    let cap = 10 * points.rows().max(points.cols() + 1);
    let mut x = combine(points, &support, &weights);

    for major in 0..cap {
        let xx = dot(&x, &x);
        let (j, val) = points
            .row_iter()
            .enumerate()
            .map(|(i, r)| (i, dot(r, &x)))
            .fold((usize::MAX, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best });
        if val >= xx - tol || support.contains(&j) {
            return Ok(finish(x, support, weights, major));
        }
        support.push(j);
        weights.push(0.0);

        loop {
            let Some(mu) = affine_minimizer(points, &support) else {
                // New point is numerically inside aff(S): nothing left to gain.
                if let Some(pos) = support.iter().position(|&s| s == j) {
                    if weights[pos] == 0.0 {
                        support.remove(pos);
                        weights.remove(pos);
                    }
                }
                return Ok(finish(combine(points, &support, &weights), support, weights, major));
            };
            if mu.iter().all(|&m| m > WEIGHT_EPS) {
                weights = mu;
                break;
            }
            let mut theta = f64::INFINITY;
            let mut leaving = 0;
            for (idx, (&l, &m)) in weights.iter().zip(&mu).enumerate() {
                if m <= WEIGHT_EPS {
                    let t = if l - m > 0.0 { l / (l - m) } else { 0.0 };
                    if t < theta {
                        theta = t;
                        leaving = idx;
                    }
                }
            }
            let theta = theta.clamp(0.0, 1.0);
            for (l, &m) in weights.iter_mut().zip(&mu) {
                *l += theta * (m - *l);
            }
            weights[leaving] = 0.0;
            if support[leaving] == j && theta == 0.0 && support.len() > 1 {
                // The entering point cannot move the iterate: converged to
                // working precision.
                support.remove(leaving);
                weights.remove(leaving);
                return Ok(finish(combine(points, &support, &weights), support, weights, major));
            }
            let mut idx = 0;
            while idx < support.len() {
                if weights[idx] <= WEIGHT_EPS {
                    support.remove(idx);
                    weights.remove(idx);
                } else {
                    idx += 1;
                }
            }
            let total: f64 = weights.iter().sum();
            weights.iter_mut().for_each(|w| *w /= total);
        }
        x = combine(points, &support, &weights);
    }
    Err(Error::NonConvergence {
        algorithm: "min-norm point",
        iterations: cap,
    })
}

fn finish(x: Vec<f64>, support: Vec<usize>, weights: Vec<f64>, cycles: usize) -> MinNormPoint {
    MinNormPoint {
        point: RealVector::from_vec_unchecked(x),
        support: support.into_iter().zip(weights).collect(),
        major_cycles: cycles,
    }
}

/// Decides whether the origin lies in `conv{rows of points}` with default
/// options.
pub fn contains_origin(points: &DenseMatrix, tol: f64) -> Result<HullVerdict> {
    contains_origin_with(points, HullOptions { tol, strict: false })
}

/// Decides whether the origin lies in `conv{rows of points}`.
///
/// Points are rescaled so the largest has unit norm before running Wolfe, so
/// `tol` is relative to the size of the point cloud. An empty point set is
/// reported `Outside` (with an infinite margin).
pub fn contains_origin_with(points: &DenseMatrix, opts: HullOptions) -> Result<HullVerdict> {
    if points.cols() == 0 {
        return Err(Error::InvalidInput("points have dimension zero".into()));
    }
    if points.rows() == 0 {
        return Ok(HullVerdict::Outside {
            direction: RealVector::basis(points.cols(), 0),
            margin: f64::INFINITY,
            min_norm: f64::INFINITY,
        });
    }
    let scale = points
        .row_iter()
        .map(|r| dot(r, r).sqrt())
        .fold(0.0f64, f64::max);
    if scale == 0.0 {
        return Ok(HullVerdict::Inside {
            coefficients: vec![(0, 1.0)],
            min_norm: 0.0,
        });
    }
    let scaled = points.scaled(1.0 / scale);
    let mnp = min_norm_point(&scaled, opts.tol)?;
    let p_norm = mnp.norm();

    if p_norm <= opts.tol {
        let residual = {
            let (idx, w): (Vec<usize>, Vec<f64>) = mnp.support.iter().copied().unzip();
            let r = combine(&scaled, &idx, &w);
            dot(&r, &r).sqrt()
        };
        let weight_sum: f64 = mnp.support.iter().map(|s| s.1).sum();
        if residual <= opts.tol && (weight_sum - 1.0).abs() <= 1e-9 {
            return Ok(HullVerdict::Inside {
                coefficients: mnp.support,
                min_norm: p_norm * scale,
            });
        }
        return Ok(HullVerdict::Degenerate {
            min_norm: p_norm * scale,
        });
    }

    if opts.strict && p_norm <= 10.0 * opts.tol {
        return Ok(HullVerdict::Degenerate {
            min_norm: p_norm * scale,
        });
    }
    let direction = mnp.point.scaled(1.0 / p_norm);
    let margin = points
        .row_iter()
        .map(|r| dot(r, direction.as_slice()))
        .fold(f64::INFINITY, f64::min);
    if margin > 0.0 {
        Ok(HullVerdict::Outside {
            direction,
            margin,
            min_norm: p_norm * scale,
        })
    } else {
        Ok(HullVerdict::Degenerate {
            min_norm: p_norm * scale,
        })
    }
}

/// Like [`contains_origin`], but each point is first scaled to unit norm.
///
/// `0 ∈ conv S` depends only on the rays through the points, so this gives
/// the same answer while keeping points of very different sizes (a walk on
/// a geometric time grid) at the same scale. Inside coefficients and the
/// Outside margin refer to the original points; `min_norm` is that of the
/// normalized cloud.
pub fn contains_origin_normalized(points: &DenseMatrix, tol: f64) -> Result<HullVerdict> {
    let norms: Vec<f64> = points.row_iter().map(|r| dot(r, r).sqrt()).collect();
    if let Some(i) = norms.iter().position(|&x| x == 0.0) {
        return Ok(HullVerdict::Inside {
            coefficients: vec![(i, 1.0)],
            min_norm: 0.0,
        });
    }
    let unit = DenseMatrix::from_fn(points.rows(), points.cols(), |i, j| points.get(i, j) / norms[i]);
    Ok(match contains_origin(&unit, tol)? {
        HullVerdict::Inside { coefficients, min_norm } => {
            let total: f64 = coefficients.iter().map(|&(i, w)| w / norms[i]).sum();
            HullVerdict::Inside {
                coefficients: coefficients.iter().map(|&(i, w)| (i, w / norms[i] / total)).collect(),
                min_norm,
            }
        }
        HullVerdict::Outside { direction, min_norm, .. } => {
            let margin = points
                .row_iter()
                .map(|r| dot(r, direction.as_slice()))
                .fold(f64::INFINITY, f64::min);
            HullVerdict::Outside {
                direction,
                margin,
                min_norm,
            }
        }
        d @ HullVerdict::Degenerate { .. } => d,
    })
}

/// Origin-membership for a growing point list, warm-starting Wolfe from the
/// previous support.
///
/// No rescaling is applied, so `tol` is absolute; intended for point clouds
/// of unit scale (such as walks on the sphere).
#[derive(Debug, Clone)]
pub struct IncrementalHull {
    points: DenseMatrix,
    tol: f64,
    state: Option<MinNormPoint>,
}

impl IncrementalHull {
    pub fn new(dim: usize, tol: f64) -> Self {
        Self {
            points: DenseMatrix::zeros(0, dim),
            tol,
            state: None,
        }
    }

    pub fn len(&self) -> usize {
        self.points.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.points.rows() == 0
    }

    pub fn points(&self) -> &DenseMatrix {
        &self.points
    }

    /// Adds a point and reports whether the origin is now in the hull.
    pub fn push(&mut self, point: &[f64]) -> Result<bool> {
        self.points.push_row(point)?;
        let next = match &self.state {
            None => min_norm_point(&self.points, self.tol)?,
            Some(prev) => {
                let p = prev.point.as_slice();
                if dot(point, p) >= dot(p, p) - self.tol {
                    prev.clone()
                } else {
                    min_norm_point_from(&self.points, self.tol, &prev.support)?
                }
            }
        };
        let inside = next.norm() <= self.tol;
        self.state = Some(next);
        Ok(inside)
    }

    pub fn current(&self) -> Option<&MinNormPoint> {
        self.state.as_ref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[f64]]) -> DenseMatrix {
        let cols = rows[0].len();
        DenseMatrix::new(rows.len(), cols, rows.iter().flat_map(|r| r.iter().copied()).collect())
            .unwrap()
    }

    #[test]
    fn midpoint_of_two_basis_vectors() {
        let r = min_norm_point(&mat(&[&[1.0, 0.0], &[0.0, 1.0]]), 1e-12).unwrap();
        assert!((r.point[0] - 0.5).abs() < 1e-14);
        assert!((r.point[1] - 0.5).abs() < 1e-14);
    }

    #[test]
    fn cross_polytope_contains_origin() {
        let pts = mat(&[&[1.0, 0.0], &[-1.0, 0.0], &[0.0, 1.0], &[0.0, -1.0]]);
        let r = min_norm_point(&pts, 1e-12).unwrap();
        assert!(r.norm() < 1e-14);
        assert!(contains_origin(&pts, CERTIFICATE_TOL).unwrap().is_inside());
    }

    #[test]
    fn simplex_vertices_are_separated_by_all_ones() {
        for n in 1..8 {
            let pts = DenseMatrix::identity(n);
            match contains_origin(&pts, CERTIFICATE_TOL).unwrap() {
                HullVerdict::Outside { direction, margin, .. } => {
                    let expect = 1.0 / (n as f64).sqrt();
                    for i in 0..n {
                        assert!((direction[i] - expect).abs() < 1e-12);
                    }
                    assert!((margin - expect).abs() < 1e-12);
                }
                other => panic!("expected Outside, got {other:?}"),
            }
        }
    }

    #[test]
    fn cross_polytope_in_higher_dimensions() {
        for n in 1..7 {
            let mut rows = Vec::new();
            for i in 0..n {
                rows.push(RealVector::basis(n, i));
                rows.push(RealVector::basis(n, i).scaled(-1.0));
            }
            let pts = DenseMatrix::from_rows(&rows, n).unwrap();
            match contains_origin(&pts, CERTIFICATE_TOL).unwrap() {
                HullVerdict::Inside { coefficients, .. } => {
                    let sum: f64 = coefficients.iter().map(|c| c.1).sum();
                    assert!((sum - 1.0).abs() < 1e-12);
                    assert!(coefficients.iter().all(|c| c.1 > 0.0));
                }
                other => panic!("expected Inside, got {other:?}"),
            }
        }
    }

    #[test]
    fn optimality_certificate_holds() {
        let pts = mat(&[&[2.0, 1.0, 0.5], &[1.0, 3.0, -0.5], &[1.5, -0.2, 1.0], &[3.0, 3.0, 3.0]]);
        let r = min_norm_point(&pts, 1e-12).unwrap();
        let pp = r.point.dot(&r.point);
        for row in pts.row_iter() {
            assert!(dot(row, r.point.as_slice()) >= pp - 1e-12);
        }
        let recombined = combine(
            &pts,
            &r.support.iter().map(|s| s.0).collect::<Vec<_>>(),
            &r.support.iter().map(|s| s.1).collect::<Vec<_>>(),
        );
        assert_eq!(recombined, r.point.as_slice());
    }

    #[test]
    fn empty_set_is_outside_and_zero_vector_inside() {
        let empty = DenseMatrix::zeros(0, 3);
        assert!(contains_origin(&empty, CERTIFICATE_TOL).unwrap().is_outside());
        let zero = DenseMatrix::zeros(2, 3);
        assert!(contains_origin(&zero, CERTIFICATE_TOL).unwrap().is_inside());
    }

    #[test]
    fn strict_mode_flags_near_boundary() {
        // Segment passing at distance 5e-9 from the origin.
        let pts = mat(&[&[-1.0, 5e-9], &[1.0, 5e-9]]);
        let loose = contains_origin_with(&pts, HullOptions { tol: 1e-9, strict: false }).unwrap();
        assert!(loose.is_outside());
        let strict = contains_origin_with(&pts, HullOptions { tol: 1e-9, strict: true }).unwrap();
        assert!(matches!(strict, HullVerdict::Degenerate { .. }));
    }

    #[test]
    fn rejects_bad_tolerance() {
        assert!(min_norm_point(&mat(&[&[1.0]]), 0.0).is_err());
    }

    #[test]
    fn incremental_matches_batch() {
        // Points around the unit circle, added one at a time.
        let angles = [0.1f64, 0.7, 1.4, 2.0, 2.9, 3.5, 4.4, 5.1];
        let mut inc = IncrementalHull::new(2, CERTIFICATE_TOL);
        for (k, a) in angles.iter().enumerate() {
            let inside = inc.push(&[a.cos(), a.sin()]).unwrap();
            let batch = contains_origin(inc.points(), CERTIFICATE_TOL).unwrap();
            assert_eq!(inside, batch.is_inside(), "mismatch after {} points", k + 1);
        }
    }
}
