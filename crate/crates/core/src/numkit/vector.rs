use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A finite real vector of fixed dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RealVector(Vec<f64>);

impl RealVector {
    /// Wraps `entries`, rejecting NaN and infinities.
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if let Some(i) = entries.iter().position(|x| !x.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "entry {i} is not finite ({})",
                entries[i]
            )));
        }
        Ok(Self(entries))
    }

    /// Caller guarantees every entry is finite.
    pub(crate) fn from_vec_unchecked(entries: Vec<f64>) -> Self {
        debug_assert!(entries.iter().all(|x| x.is_finite()));
        Self(entries)
    }

    pub fn zeros(dim: usize) -> Self {
        Self(vec![0.0; dim])
    }

    /// The `i`-th canonical basis vector.
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = vec![0.0; dim];
        v[i] = 1.0;
        Self(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn dot(&self, other: &RealVector) -> f64 {
        dot(&self.0, &other.0)
    }

    pub fn norm(&self) -> f64 {
        norm(&self.0)
    }

    /// Unit vector in the same direction, or `None` for the zero vector.
    pub fn normalized(&self) -> Option<RealVector> {
        let n = self.norm();
        (n > 0.0).then(|| Self(self.0.iter().map(|x| x / n).collect()))
    }

    pub fn scaled(&self, factor: f64) -> RealVector {
        Self(self.0.iter().map(|x| x * factor).collect())
    }

    pub fn sub(&self, other: &RealVector) -> RealVector {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn add(&self, other: &RealVector) -> RealVector {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl std::ops::Index<usize> for RealVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl AsRef<[f64]> for RealVector {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

impl TryFrom<Vec<f64>> for RealVector {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// `x₊`, coordinatewise `max(0, x)`.
pub fn positive_part(x: &RealVector) -> RealVector {
    RealVector(x.0.iter().map(|&v| v.max(0.0)).collect())
}

/// `x₋`, coordinatewise `max(0, -x)`, so that `x = x₊ - x₋`.
pub fn negative_part(x: &RealVector) -> RealVector {
    RealVector(x.0.iter().map(|&v| (-v).max(0.0)).collect())
}
