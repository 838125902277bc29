use rayon::prelude::*;
use serde::Serialize;

use crate::numkit::IncrementalHull;
use crate::randwalk::{RngStream, SphereWalker};
use crate::{Error, Result};

/// Absolute tolerance for the warm-started hull on unit vectors.
const COVER_TOL: f64 = 1e-10;

/// Covering times of the spherical walk.
///
/// A finite set `S ⊂ 𝕊ⁿ⁻¹` is a π/2-covering iff every closed hemisphere
/// meets it, iff no open half-space through 0 contains `S`, iff
/// `0 ∈ conv S`. The covering time is therefore the first `N` with the
/// origin in the hull of the first `N` positions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoveringSummary {
    pub trials: usize,
    pub completed: usize,
    /// Trials still uncovered after `cap` steps.
    pub censored: usize,
    pub cap: usize,
    /// Per-trial covering time, `None` when censored.
    pub times: Vec<Option<usize>>,
    /// Mean over completed trials.
    pub mean: Option<f64>,
    /// Order statistics with censored trials ranked last; `None` when the
    /// rank falls among them.
    pub median: Option<f64>,
    pub q25: Option<f64>,
    pub q75: Option<f64>,
    pub min: Option<usize>,
}

fn first_cover(theta: f64, n: usize, cap: usize, mut rng: RngStream) -> Result<Option<usize>> {
    let mut walker = SphereWalker::new(theta, n)?;
    let mut hull = IncrementalHull::new(n, COVER_TOL);
    for step in 1..=cap {
        let x = walker.advance(&mut rng)?.to_vec();
        if hull.push(&x)? {
            return Ok(Some(step));
        }
    }
    Ok(None)
}

/// Quantile by linear interpolation of the sorted sample, censored values
/// treated as `+∞`.
fn quantile(sorted: &[Option<usize>], q: f64) -> Option<f64> {
    let pos = q * (sorted.len() - 1) as f64;
    let (i, frac) = (pos.floor() as usize, pos - pos.floor());
    let a = sorted[i]? as f64;
    if frac == 0.0 {
        return Some(a);
    }
    let b = sorted[i + 1]? as f64;
    Some(a + frac * (b - a))
}

pub fn covering_time(theta: f64, n: usize, trials: usize, cap: usize, rng: &RngStream) -> Result<CoveringSummary> {
    if trials == 0 || cap == 0 {
        return Err(Error::InvalidInput("need trials ≥ 1 and cap ≥ 1".into()));
    }
    let times: Vec<Option<usize>> = (0..trials)
        .into_par_iter()
        .map(|i| first_cover(theta, n, cap, rng.child(i as u64)))
        .collect::<Result<_>>()?;
    let done: Vec<usize> = times.iter().flatten().copied().collect();
    let mut sorted = times.clone();
    sorted.sort_by_key(|t| t.unwrap_or(usize::MAX));
    Ok(CoveringSummary {
        trials,
        completed: done.len(),
        censored: trials - done.len(),
        cap,
        mean: (!done.is_empty()).then(|| done.iter().sum::<usize>() as f64 / done.len() as f64),
        median: quantile(&sorted, 0.5),
        q25: quantile(&sorted, 0.25),
        q75: quantile(&sorted, 0.75),
        min: done.iter().min().copied(),
        times,
    })
}
