use serde::Serialize;

use crate::conelab::PrefixMatrix;
use crate::numkit::{dot, nnls, norm, DenseMatrix};
use crate::{Error, Result};

/// KKT tolerance passed to the NNLS solves behind the projections.
pub const PROJECTION_TOL: f64 = 1e-12;

/// The cone `C = F⁻¹(ℝ₊ᴺ)` for an invertible lower-triangular `F`, or the
/// whole space as a documented special case (`C* = {0}`).
#[derive(Debug, Clone, PartialEq)]
pub struct ConeSpec {
    dim: usize,
    maps: Option<(DenseMatrix, DenseMatrix)>,
}

impl ConeSpec {
    pub fn new(f: &PrefixMatrix) -> Result<Self> {
        Self::from_matrix(f.matrix().clone())
    }

    pub fn from_matrix(f: DenseMatrix) -> Result<Self> {
        let inv = f.lower_inverse()?;
        Ok(Self {
            dim: f.rows(),
            maps: Some((f, inv)),
        })
    }

    /// `C = ℝ₊ᴺ`.
    pub fn orthant(dim: usize) -> Self {
        Self::from_matrix(DenseMatrix::identity(dim)).expect("identity is invertible")
    }

    /// `C = ℝᴺ`.
    pub fn full_space(dim: usize) -> Self {
        Self { dim, maps: None }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_full_space(&self) -> bool {
        self.maps.is_none()
    }

    pub fn f(&self) -> Option<&DenseMatrix> {
        self.maps.as_ref().map(|m| &m.0)
    }

    pub fn f_inverse(&self) -> Option<&DenseMatrix> {
        self.maps.as_ref().map(|m| &m.1)
    }

    /// `x ∈ C ⇔ F x ≥ 0`.
    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        match &self.maps {
            None => true,
            Some((f, _)) => f.matvec(x).iter().all(|&v| v >= -tol),
        }
    }

    /// `x ∈ C* ⇔ x = Fᵀu` with `u ≤ 0`, tested by a triangular solve.
    pub fn polar_contains(&self, x: &[f64], tol: f64) -> Result<bool> {
        match &self.maps {
            None => Ok(x.iter().all(|&v| v == 0.0)),
            Some((f, _)) => Ok(f.solve_lower_transposed(x)?.iter().all(|&u| u <= tol)),
        }
    }

    fn check_dim(&self, y: &[f64]) -> Result<()> {
        if y.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: y.len(),
            });
        }
        Ok(())
    }
}

/// Metric projection onto `C`: `P_C y = F⁻¹ z` with `z = nnls(F⁻¹, y)`.
pub fn project_onto_cone(spec: &ConeSpec, y: &[f64], tol: f64) -> Result<Vec<f64>> {
    spec.check_dim(y)?;
    let Some((_, inv)) = &spec.maps else {
        return Ok(y.to_vec());
    };
    let z = nnls(inv, y, tol)?.z;
    let x = inv.matvec(&z);
    certify(&x, y)?;
    Ok(x)
}

/// Metric projection onto `C* = Fᵀ(ℝ₋ᴺ)`: `−Fᵀ u` with `u = nnls(Fᵀ, −y)`.
pub fn project_onto_polar(spec: &ConeSpec, y: &[f64], tol: f64) -> Result<Vec<f64>> {
    spec.check_dim(y)?;
    let Some((f, _)) = &spec.maps else {
        return Ok(vec![0.0; y.len()]);
    };
    let ft = f.transpose();
    let neg: Vec<f64> = y.iter().map(|v| -v).collect();
    let u = nnls(&ft, &neg, tol)?.z;
    let x: Vec<f64> = ft.matvec(&u).into_iter().map(|v| -v).collect();
    certify(&x, y)?;
    Ok(x)
}

/// Projection onto a cone is characterised by `⟨x, y − x⟩ = 0`.
fn certify(x: &[f64], y: &[f64]) -> Result<()> {
    let r: Vec<f64> = y.iter().zip(x).map(|(a, b)| a - b).collect();
    let yy = dot(y, y);
    if dot(x, &r).abs() > 1e-8 * yy.max(f64::MIN_POSITIVE) {
        return Err(Error::NonConvergence {
            algorithm: "cone projection",
            iterations: 0,
        });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Moreau {
    pub p: Vec<f64>,
    pub q: Vec<f64>,
    /// `‖y − p − q‖ / ‖y‖`.
    pub sum_residual: f64,
    /// `|⟨p, q⟩| / ‖y‖²`.
    pub orthogonality: f64,
    /// `|‖p‖² + ‖q‖² − ‖y‖²| / ‖y‖²`.
    pub pythagoras: f64,
}

/// `y = P_C y + P_{C*} y`, with both parts computed by independent solves so
/// the identities are genuine checks.
pub fn moreau_decompose(spec: &ConeSpec, y: &[f64], tol: f64) -> Result<Moreau> {
    let p = project_onto_cone(spec, y, tol)?;
    let q = project_onto_polar(spec, y, tol)?;
    let yn = norm(y);
    let (sum_residual, orthogonality, pythagoras) = if yn == 0.0 {
        (0.0, 0.0, 0.0)
    } else {
        let r: Vec<f64> = y.iter().zip(&p).zip(&q).map(|((a, b), c)| a - b - c).collect();
        (
            norm(&r) / yn,
            dot(&p, &q).abs() / (yn * yn),
            (dot(&p, &p) + dot(&q, &q) - yn * yn).abs() / (yn * yn),
        )
    };
    Ok(Moreau {
        p,
        q,
        sum_residual,
        orthogonality,
        pythagoras,
    })
}
