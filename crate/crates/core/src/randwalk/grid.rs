//! Strictly increasing positive time grids.

use serde::Serialize;

use super::rng::RngStream;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct TimeGrid {
    times: Vec<f64>,
}

impl TimeGrid {
    /// Validates `0 < t₁ < t₂ < …` with finite entries. The empty grid is
    /// allowed (a Poisson draw may have no points).
    pub fn new(times: Vec<f64>) -> Result<Self> {
        if let Some(i) = times.iter().position(|t| !t.is_finite()) {
            return Err(Error::Overflow { index: i });
        }
        if times.first().is_some_and(|&t| t <= 0.0) {
            return Err(Error::InvalidInput("grid times must be positive".into()));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidInput("grid times must be strictly increasing".into()));
        }
        Ok(Self { times })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> Option<f64> {
        self.times.last().copied()
    }

    /// Increments `tᵢ − tᵢ₋₁` with `t₀ = 0`.
    pub fn spacings(&self) -> Vec<f64> {
        let mut prev = 0.0;
        self.times
            .iter()
            .map(|&t| {
                let d = t - prev;
                prev = t;
                d
            })
            .collect()
    }

    /// Index of an exact grid time.
    pub fn index_of(&self, t: f64) -> Option<usize> {
        self.times.binary_search_by(|x| x.total_cmp(&t)).ok()
    }

    /// Union of two grids.
    pub fn merge(&self, other: &TimeGrid) -> TimeGrid {
        let mut times: Vec<f64> = self.times.iter().chain(&other.times).copied().collect();
        times.sort_by(f64::total_cmp);
        times.dedup();
        TimeGrid { times }
    }

    /// Keeps only the times in `(lo, hi]`.
    pub fn restrict(&self, lo: f64, hi: f64) -> TimeGrid {
        TimeGrid {
            times: self.times.iter().copied().filter(|&t| t > lo && t <= hi).collect(),
        }
    }
}

/// `(1/N, 2/N, …, 1)`.
pub fn grid_uniform(n: usize) -> Result<TimeGrid> {
    if n == 0 {
        return Err(Error::InvalidInput("grid needs at least one point".into()));
    }
    let nf = n as f64;
    TimeGrid::new((1..=n).map(|i| i as f64 / nf).collect())
}

/// `tᵢ = t₁·K^{i−1}`, built by repeated multiplication.
pub fn grid_geometric(t1: f64, k: f64, n: usize) -> Result<TimeGrid> {
    if !(t1 > 0.0) || !t1.is_finite() {
        return Err(Error::InvalidInput(format!("t1 must be positive, got {t1}")));
    }
    if !(k > 1.0) || !k.is_finite() {
        return Err(Error::InvalidInput(format!("ratio must exceed 1, got {k}")));
    }
    if n == 0 {
        return Err(Error::InvalidInput("grid needs at least one point".into()));
    }
    let mut times = Vec::with_capacity(n);
    let mut t = t1;
    for i in 0..n {
        if !t.is_finite() {
            return Err(Error::Overflow { index: i });
        }
        times.push(t);
        t *= k;
    }
    TimeGrid::new(times)
}

/// Arrival times of a homogeneous Poisson process of the given intensity
/// on `(0, 1]`.
///
/// Generated from exponential spacings, which gives the same law as a
/// Poisson count of sorted uniforms. Exact repeats are dropped.
pub fn grid_poisson(intensity: f64, rng: &mut RngStream) -> Result<TimeGrid> {
    if !(intensity > 0.0) || !intensity.is_finite() {
        return Err(Error::InvalidInput(format!("intensity must be positive, got {intensity}")));
    }
    let mut times = Vec::new();
    let mut t = rng.exponential(intensity);
    while t <= 1.0 {
        if times.last() != Some(&t) {
            times.push(t);
        }
        t += rng.exponential(intensity);
    }
    TimeGrid::new(times)
}

/// `2^{j/density}` for `j = 0, …, ⌊exponent·density⌋`, covering `[1, 2^exponent]`.
pub fn grid_dyadic(exponent: f64, density: usize) -> Result<TimeGrid> {
    if density == 0 || !(exponent >= 0.0) {
        return Err(Error::InvalidInput("need density ≥ 1 and exponent ≥ 0".into()));
    }
    let steps = (exponent * density as f64).floor() as usize;
    let d = density as f64;
    TimeGrid::new((0..=steps).map(|j| (j as f64 / d).exp2()).collect())
}
