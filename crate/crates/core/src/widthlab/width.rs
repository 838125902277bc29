use rayon::prelude::*;
use serde::Serialize;
use statrs::function::gamma::ln_gamma;

use super::cone::{project_onto_cone, project_onto_polar, ConeSpec, PROJECTION_TOL};
use crate::numkit::{contains_origin, dot, norm, DenseMatrix, CERTIFICATE_TOL};
use crate::randwalk::RngStream;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WidthEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub trials: usize,
}

impl WidthEstimate {
    fn from_samples(xs: &[f64]) -> Self {
        let t = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / t;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (t - 1.0);
        Self {
            mean,
            std_error: (var / t).sqrt(),
            trials: xs.len(),
        }
    }
}

fn projection_norms(
    spec: &ConeSpec,
    trials: usize,
    rng: &RngStream,
) -> Result<Vec<(f64, f64, f64)>> {
    (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let y = rng.child(i).gaussian_vec(spec.dim());
            let p = project_onto_cone(spec, &y, PROJECTION_TOL)?;
            let q = project_onto_polar(spec, &y, PROJECTION_TOL)?;
            Ok((norm(&p), norm(&q), dot(&y, &y)))
        })
        .collect()
}

fn check_trials(trials: usize, min: usize) -> Result<()> {
    if trials < min {
        return Err(Error::InvalidInput(format!("need at least {min} trials, got {trials}")));
    }
    Ok(())
}

/// `w(C ∩ B₂ᴺ) = E‖P_C Y‖`, with trial `i` drawing `Y` from `rng.child(i)`.
pub fn gaussian_width_cone(spec: &ConeSpec, trials: usize, rng: &RngStream) -> Result<WidthEstimate> {
    check_trials(trials, 2)?;
    let xs: Vec<f64> = projection_norms(spec, trials, rng)?.into_iter().map(|s| s.0).collect();
    Ok(WidthEstimate::from_samples(&xs))
}

/// `w(C* ∩ B₂ᴺ) = E‖P_{C*} Y‖` on the same draws as [`gaussian_width_cone`].
pub fn gaussian_width_polar(spec: &ConeSpec, trials: usize, rng: &RngStream) -> Result<WidthEstimate> {
    check_trials(trials, 2)?;
    let xs: Vec<f64> = projection_norms(spec, trials, rng)?.into_iter().map(|s| s.1).collect();
    Ok(WidthEstimate::from_samples(&xs))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BudgetCheck {
    pub w_cone: WidthEstimate,
    pub w_polar: WidthEstimate,
    pub dim: usize,
    /// `ŵ(C)² + ŵ(C*)²`.
    pub sum_of_squares: f64,
    /// First-order standard error of `sum_of_squares`, relative to `N`.
    pub relative_error: f64,
    /// Largest per-sample `|‖P_C Y‖² + ‖P_{C*} Y‖² − ‖Y‖²| / ‖Y‖²`.
    pub max_identity_residual: f64,
    pub budget_ok: bool,
}

/// Width budget `w(C∩B)² + w(C*∩B)² ≤ N`, accepted when the estimate is at
/// most `N·(1 + 3·relative_error)`.
pub fn width_budget_check(spec: &ConeSpec, trials: usize, rng: &RngStream) -> Result<BudgetCheck> {
    check_trials(trials, 100)?;
    let samples = projection_norms(spec, trials, rng)?;
    let cone: Vec<f64> = samples.iter().map(|s| s.0).collect();
    let polar: Vec<f64> = samples.iter().map(|s| s.1).collect();
    let max_identity_residual = samples
        .iter()
        .map(|&(p, q, yy)| if yy == 0.0 { 0.0 } else { (p * p + q * q - yy).abs() / yy })
        .fold(0.0, f64::max);
    let w_cone = WidthEstimate::from_samples(&cone);
    let w_polar = WidthEstimate::from_samples(&polar);
    let n = spec.dim() as f64;
    let sum_of_squares = w_cone.mean.powi(2) + w_polar.mean.powi(2);
    let relative_error =
        2.0 * (w_cone.mean * w_cone.std_error + w_polar.mean * w_polar.std_error) / n;
    Ok(BudgetCheck {
        w_cone,
        w_polar,
        dim: spec.dim(),
        sum_of_squares,
        relative_error,
        max_identity_residual,
        budget_ok: sum_of_squares <= n * (1.0 + 3.0 * relative_error),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VolumeRatio {
    /// Fraction of uniform points of `B₂ᴺ` that land in `C*`.
    pub ratio: f64,
    pub std_error: f64,
    pub trials: usize,
}

/// `Vol(C* ∩ B₂ᴺ)/Vol(B₂ᴺ)` by sampling the ball; membership in `C*` is a
/// triangular solve `Fᵀu = x` followed by `u ≤ 1e−10`.
pub fn polar_volume_ratio(spec: &ConeSpec, trials: usize, rng: &RngStream) -> Result<VolumeRatio> {
    if spec.dim() > 25 {
        return Err(Error::InvalidInput("volume sampling is limited to N ≤ 25".into()));
    }
    check_trials(trials, 1000)?;
    let hits: Vec<bool> = (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let x = rng.child(i).ball_point(spec.dim());
            spec.polar_contains(&x, 1e-10)
        })
        .collect::<Result<_>>()?;
    let count = hits.iter().filter(|&&h| h).count();
    let t = trials as f64;
    let ratio = count as f64 / t;
    Ok(VolumeRatio {
        ratio,
        std_error: (ratio * (1.0 - ratio) / t).sqrt(),
        trials,
    })
}

/// Upper bound `N − (N−1)·ratio^{2/N}` on `w(C ∩ B₂ᴺ)²` in terms of the polar
/// volume ratio.
pub fn volume_ratio_width_bound(dim: usize, ratio: f64) -> f64 {
    let n = dim as f64;
    n - (n - 1.0) * ratio.powf(2.0 / n)
}

/// Volume of the Euclidean unit ball in ℝⁿ.
pub fn ball_volume(n: usize) -> f64 {
    let h = n as f64 / 2.0;
    (h * std::f64::consts::PI.ln() - ln_gamma(h + 1.0)).exp()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UrysohnCheck {
    /// `√(N−1)·(Vol(S)/Vol(B))^{1/N}`.
    pub lhs: f64,
    /// `w(S) = E max_v ⟨Y, v⟩`.
    pub rhs: f64,
    pub lhs_error: f64,
    pub rhs_error: f64,
    pub volume_ratio: f64,
    pub holds: bool,
}

/// Urysohn's inequality `√(N−1)(Vol S / Vol B)^{1/N} ≤ w(S)` for the
/// polytope `S = conv(rows of cloud)`.
///
/// Volume: rejection sampling in the bounding box, membership via
/// `0 ∈ conv(cloud − x)`. Width: the supremum over a polytope is attained
/// at a vertex. The inequality is accepted within three combined standard
/// errors.
pub fn urysohn_check(cloud: &DenseMatrix, trials: usize, rng: &RngStream) -> Result<UrysohnCheck> {
    let n = cloud.cols();
    if n == 0 || n > 10 {
        return Err(Error::InvalidInput("Urysohn check supports 1 ≤ N ≤ 10".into()));
    }
    if cloud.rows() == 0 {
        return Err(Error::InvalidInput("point cloud is empty".into()));
    }
    check_trials(trials, 2)?;
    let lo: Vec<f64> = (0..n).map(|k| cloud.row_iter().map(|r| r[k]).fold(f64::INFINITY, f64::min)).collect();
    let hi: Vec<f64> = (0..n).map(|k| cloud.row_iter().map(|r| r[k]).fold(f64::NEG_INFINITY, f64::max)).collect();
    let box_volume: f64 = lo.iter().zip(&hi).map(|(a, b)| b - a).product();

    let draws: Vec<(bool, f64)> = (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let mut r = rng.child(i);
            let y = r.gaussian_vec(n);
            let sup = cloud.row_iter().map(|v| dot(v, &y)).fold(f64::NEG_INFINITY, f64::max);
            if box_volume == 0.0 {
                return Ok((false, sup));
            }
            let x: Vec<f64> = lo.iter().zip(&hi).map(|(a, b)| a + (b - a) * r.uniform()).collect();
            let shifted = DenseMatrix::from_fn(cloud.rows(), n, |p, k| cloud.get(p, k) - x[k]);
            Ok((contains_origin(&shifted, CERTIFICATE_TOL)?.is_inside(), sup))
        })
        .collect::<Result<_>>()?;

    let t = trials as f64;
    let frac = draws.iter().filter(|d| d.0).count() as f64 / t;
    let frac_se = (frac * (1.0 - frac) / t).sqrt();
    let scale = box_volume / ball_volume(n);
    let volume_ratio = frac * scale;
    let root = ((n - 1) as f64).sqrt();
    let nf = n as f64;
    let lhs = root * volume_ratio.powf(1.0 / nf);
    let lhs_error = if volume_ratio > 0.0 {
        root / nf * volume_ratio.powf(1.0 / nf - 1.0) * scale * frac_se
    } else {
        0.0
    };
    let sups: Vec<f64> = draws.iter().map(|d| d.1).collect();
    let w = WidthEstimate::from_samples(&sups);
    Ok(UrysohnCheck {
        lhs,
        rhs: w.mean,
        lhs_error,
        rhs_error: w.std_error,
        volume_ratio,
        holds: lhs <= w.mean + 3.0 * (lhs_error + w.std_error),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ball_volumes() {
        assert!((ball_volume(1) - 2.0).abs() < 1e-12);
        assert!((ball_volume(2) - std::f64::consts::PI).abs() < 1e-12);
        assert!((ball_volume(3) - 4.0 / 3.0 * std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn orthant_polar_fraction() {
        let r = polar_volume_ratio(&ConeSpec::orthant(3), 20_000, &RngStream::new(3, 0)).unwrap();
        assert!((r.ratio - 0.125).abs() <= 3.0 * (0.125f64 * 0.875 / 20_000.0).sqrt());
    }

    #[test]
    fn single_point_cloud() {
        let c = DenseMatrix::zeros(1, 3);
        let u = urysohn_check(&c, 100, &RngStream::new(1, 0)).unwrap();
        assert_eq!(u.lhs, 0.0);
        assert_eq!(u.rhs, 0.0);
        assert!(u.holds);
    }

    #[test]
    fn full_space_width_is_chi_mean() {
        let w = gaussian_width_cone(&ConeSpec::full_space(9), 4000, &RngStream::new(2, 0)).unwrap();
        // E‖Y‖ for N = 9 is √2·Γ(5)/Γ(4.5).
        let exact = 2f64.sqrt() * (ln_gamma(5.0) - ln_gamma(4.5)).exp();
        assert!((w.mean - exact).abs() <= 4.0 * w.std_error);
    }
}
