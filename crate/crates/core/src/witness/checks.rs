use rayon::prelude::*;
use serde::Serialize;

use crate::randwalk::RngStream;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesCheck {
    pub q: f64,
    pub epsilon: f64,
    pub sum: f64,
    pub bound: f64,
    pub holds: bool,
}

/// `Σ_{k=0}^{1000} ((1+ε)^{2k+1} − 1)·q^k` against `4ε/(1−q)²` with
/// `ε = (1−q)/8`.
pub fn series_bound_check(q: f64) -> Result<SeriesCheck> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::InvalidInput(format!("q must lie in (0, 1), got {q}")));
    }
    let epsilon = (1.0 - q) / 8.0;
    let sum: f64 = (0..=1000)
        .map(|k| ((1.0 + epsilon).powi(2 * k + 1) - 1.0) * q.powi(k))
        .sum();
    let bound = 4.0 * epsilon / (1.0 - q).powi(2);
    Ok(SeriesCheck {
        q,
        epsilon,
        sum,
        bound,
        holds: sum <= bound,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TruncatedNormCheck {
    pub q: usize,
    pub r: f64,
    pub threshold: f64,
    pub successes: usize,
    pub trials: usize,
    pub frequency: f64,
    pub required: f64,
    pub mean_norm: f64,
    pub holds: bool,
}

/// Frequency of `‖b‖ ≤ 4√q·e^{−r²/8}` for `bᵢ = max(0, gᵢ − r)`,
/// `g ~ N(0, I_q)`, against the level `1 − e^{−2√q}`.
pub fn truncated_norm_check(q: usize, r: f64, trials: usize, rng: &RngStream) -> Result<TruncatedNormCheck> {
    if q == 0 || trials == 0 || !(r >= 0.0) {
        return Err(Error::InvalidInput("need q ≥ 1, trials ≥ 1 and r ≥ 0".into()));
    }
    let threshold = 4.0 * (q as f64).sqrt() * (-r * r / 8.0).exp();
    let norms: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut s = rng.child(i as u64);
            (0..q)
                .map(|_| (s.gaussian() - r).max(0.0).powi(2))
                .sum::<f64>()
                .sqrt()
        })
        .collect();
    let successes = norms.iter().filter(|&&x| x <= threshold).count();
    let frequency = successes as f64 / trials as f64;
    let required = 1.0 - (-2.0 * (q as f64).sqrt()).exp();
    Ok(TruncatedNormCheck {
        q,
        r,
        threshold,
        successes,
        trials,
        frequency,
        required,
        mean_norm: norms.iter().sum::<f64>() / trials as f64,
        holds: frequency >= required,
    })
}
