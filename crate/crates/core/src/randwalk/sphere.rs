//! The fixed-angle walk on the unit sphere.
//!
//! From `u`, draw a standard Gaussian `Y`, split off its tangent part
//! `P_u Y = Y − ⟨Y,u⟩u`, and step to the point at angle `θ` along it:
//!
//! `v = cos θ · u + sin θ · P_uY/‖P_uY‖`.
//!
//! Equivalently `v = (αu + Y)/β` with `α = cot θ ‖P_uY‖ − ⟨Y,u⟩` and
//! `β = ‖P_uY‖/sin θ`; both forms are computed and checked against each
//! other in debug builds.

use super::rng::RngStream;
use super::walk::{WalkModel, WalkPath};
use crate::numkit::{dot, norm, DenseMatrix};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SphereStep {
    pub v: Vec<f64>,
    pub alpha: f64,
    pub beta: f64,
}

fn check_angle(theta: f64) -> Result<()> {
    if theta > 0.0 && theta < std::f64::consts::FRAC_PI_2 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("angle must lie in (0, π/2), got {theta}")))
    }
}

/// One step of the walk from the unit vector `u`.
pub fn sphere_step(u: &[f64], theta: f64, rng: &mut RngStream) -> Result<SphereStep> {
    check_angle(theta)?;
    if u.len() < 2 {
        return Err(Error::InvalidInput("the walk needs dimension at least 2".into()));
    }
    if (norm(u) - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidInput("starting point is not a unit vector".into()));
    }
    let y = rng.gaussian_vec(u.len());
    let yu = dot(&y, u);
    let tangent: Vec<f64> = y.iter().zip(u).map(|(yi, ui)| yi - yu * ui).collect();
    let t_norm = norm(&tangent);
    if t_norm < 1e-300 {
        return Err(Error::DegenerateDraw("tangent component vanished".into()));
    }
    let (s, c) = theta.sin_cos();
    let mut v: Vec<f64> = u
        .iter()
        .zip(&tangent)
        .map(|(ui, ti)| c * ui + s * ti / t_norm)
        .collect();
    let vn = norm(&v);
    v.iter_mut().for_each(|x| *x /= vn);

    let alpha = t_norm * c / s - yu;
    let beta = t_norm / s;
    debug_assert!({
        let ab: Vec<f64> = u.iter().zip(&y).map(|(ui, yi)| (alpha * ui + yi) / beta).collect();
        ab.iter().zip(&v).all(|(a, b)| (a - b).abs() <= 1e-10)
    });
    Ok(SphereStep { v, alpha, beta })
}

/// Streaming form of the walk, used where the number of steps is not known
/// in advance.
#[derive(Debug, Clone)]
pub struct SphereWalker {
    theta: f64,
    current: Option<Vec<f64>>,
    dim: usize,
    steps: usize,
}

impl SphereWalker {
    pub fn new(theta: f64, dim: usize) -> Result<Self> {
        check_angle(theta)?;
        if dim < 2 {
            return Err(Error::InvalidInput("the walk needs dimension at least 2".into()));
        }
        Ok(Self {
            theta,
            current: None,
            dim,
            steps: 0,
        })
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    /// Next position; the first is `Y₁/‖Y₁‖`.
    pub fn advance(&mut self, rng: &mut RngStream) -> Result<&[f64]> {
        let next = match &self.current {
            None => {
                let y = rng.gaussian_vec(self.dim);
                let r = norm(&y);
                if r < 1e-300 {
                    return Err(Error::DegenerateDraw("initial draw vanished".into()));
                }
                y.into_iter().map(|x| x / r).collect()
            }
            Some(u) => sphere_step(u, self.theta, rng)?.v,
        };
        self.steps += 1;
        Ok(self.current.insert(next))
    }
}

/// `N` positions of the walk in `𝕊ⁿ⁻¹`, started uniformly.
pub fn simulate_sphere_walk(theta: f64, steps: usize, n: usize, rng: &mut RngStream) -> Result<WalkPath> {
    if steps == 0 {
        return Err(Error::InvalidInput("need at least one step".into()));
    }
    let mut walker = SphereWalker::new(theta, n)?;
    let mut data = Vec::with_capacity(steps * n);
    for _ in 0..steps {
        data.extend_from_slice(walker.advance(rng)?);
    }
    Ok(WalkPath {
        model: WalkModel::Sphere,
        times: (1..=steps).map(|i| i as f64).collect(),
        points: DenseMatrix::from_vec_unchecked(steps, n, data),
        seed: rng.root_seed(),
        stream: rng.stream_id(),
    })
}
