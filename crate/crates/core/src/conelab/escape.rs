use rayon::prelude::*;
use serde::Serialize;

use crate::numkit::{contains_origin, dot, DenseMatrix, HullVerdict, RealVector};
use crate::randwalk::{simulate_zn, RngStream};
use crate::{Error, Result};

/// Stream id reserved for drawing test directions, kept apart from the
/// per-trial ids `0, 1, 2, …`.
const DIRECTION_STREAM: u64 = 1 << 63;

#[derive(Debug, Clone, PartialEq)]
pub struct EscapeOutcome {
    /// Some unit `y` has `⟨Rᵢ, y⟩ ≥ 0` for every row.
    pub escapes: bool,
    pub verdict: HullVerdict,
}

/// Escape event for the rows `Rᵢ`: true exactly when the hull verdict is not
/// `Inside`. For an `Outside` verdict the separating direction is a witness
/// `y` with `⟨Rᵢ, y⟩ > 0` for all rows.
pub fn escape_event(rows: &DenseMatrix, tol: f64) -> Result<EscapeOutcome> {
    let verdict = contains_origin(rows, tol)?;
    Ok(EscapeOutcome {
        escapes: !verdict.is_inside(),
        verdict,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyPEstimate {
    pub tau: f64,
    /// Minimum over tested directions of the frequency of `⟨X,y⟩ < −τ`.
    pub delta_hat: f64,
    pub worst_direction: RealVector,
    pub trials: usize,
    /// Frequencies in direction order: `e₁, −e₁, e₂, −e₂, …`, then the
    /// random directions.
    pub frequencies: Vec<f64>,
}

fn test_directions(n: usize, random: usize, rng: &RngStream, signed_axes: bool) -> Vec<Vec<f64>> {
    let mut dirs = Vec::with_capacity(2 * n + random);
    for i in 0..n {
        let mut e = vec![0.0; n];
        e[i] = 1.0;
        dirs.push(e.clone());
        if signed_axes {
            e[i] = -1.0;
            dirs.push(e);
        }
    }
    let mut dir_rng = rng.child(DIRECTION_STREAM);
    dirs.extend((0..random).map(|_| dir_rng.unit_vector(n)));
    dirs
}

/// Empirical check of the marginal-spread property: for the `2n` signed
/// axes and `directions` random unit vectors, estimates `P{⟨X,y⟩ < −τ}`
/// from `trials` draws of `X` (shared across directions) and reports the
/// minimum.
///
/// Trial `i` draws from `rng.child(i)`.
pub fn estimate_property_p<S>(
    sampler: S,
    tau: f64,
    n: usize,
    directions: usize,
    trials: usize,
    rng: &RngStream,
) -> Result<PropertyPEstimate>
where
    S: Fn(&mut RngStream) -> Vec<f64> + Sync,
{
    if !(tau > 0.0 && tau <= 1.0) {
        return Err(Error::InvalidInput(format!("tau must lie in (0, 1], got {tau}")));
    }
    if n == 0 || directions == 0 || trials == 0 {
        return Err(Error::InvalidInput("n, directions and trials must be positive".into()));
    }
    let dirs = test_directions(n, directions, rng, true);
    let counts: Vec<Vec<u32>> = (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let x = sampler(&mut rng.child(i));
            assert_eq!(x.len(), n, "sampler returned a vector of the wrong dimension");
            dirs.iter().map(|y| u32::from(dot(&x, y) < -tau)).collect()
        })
        .collect();
    let mut totals = vec![0u64; dirs.len()];
    for c in &counts {
        for (t, &v) in totals.iter_mut().zip(c) {
            *t += u64::from(v);
        }
    }
    let frequencies: Vec<f64> = totals.iter().map(|&t| t as f64 / trials as f64).collect();
    let (worst, delta_hat) = frequencies
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best });
    Ok(PropertyPEstimate {
        tau,
        delta_hat,
        worst_direction: RealVector::new(dirs[worst].clone())?,
        trials,
        frequencies,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentEstimate {
    /// Largest empirical `E|⟨X,y⟩|³` over the tested directions.
    pub max_moment: f64,
    pub worst_direction: RealVector,
    /// Standard error of the empirical mean at the worst direction.
    pub std_error: f64,
    /// Empirical moments, axes `e₁…eₙ` first, then random directions.
    pub moments: Vec<f64>,
}

/// Third absolute moments of `X = √(n/m)·W(m)` for the lattice walk `W`,
/// over the `n` coordinate axes and `directions` random unit vectors.
pub fn zn_moment_check(
    n: usize,
    m: usize,
    trials: usize,
    directions: usize,
    rng: &RngStream,
) -> Result<MomentEstimate> {
    if n == 0 || trials < 2 {
        return Err(Error::InvalidInput("need n ≥ 1 and at least two trials".into()));
    }
    if (m as u128) < (n as u128).pow(4) {
        return Err(Error::InvalidInput(format!("need m ≥ n⁴ = {}", n.pow(4))));
    }
    let dirs = test_directions(n, directions, rng, false);
    let scale = (n as f64 / m as f64).sqrt();
    let samples: Vec<Vec<f64>> = (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let path = simulate_zn(m, &[m], n, &mut rng.child(i)).expect("valid lattice walk");
            let x: Vec<f64> = path.point(0).iter().map(|v| v * scale).collect();
            dirs.iter().map(|y| dot(&x, y).abs().powi(3)).collect()
        })
        .collect();
    let t = trials as f64;
    let mut moments = vec![0.0; dirs.len()];
    for s in &samples {
        for (acc, v) in moments.iter_mut().zip(s) {
            *acc += v;
        }
    }
    moments.iter_mut().for_each(|v| *v /= t);
    let (worst, max_moment) = moments
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, cur| if cur.1 > best.1 { cur } else { best });
    let var = samples.iter().map(|s| (s[worst] - max_moment).powi(2)).sum::<f64>() / (t - 1.0);
    Ok(MomentEstimate {
        max_moment,
        worst_direction: RealVector::new(dirs[worst].clone())?,
        std_error: (var / t).sqrt(),
        moments,
    })
}

/// Lower bound `1 − 3.5·exp(−((N−n)/√(N−n+1) − w)²/18)` on the probability
/// that a random `(N−n)`-codimensional subspace misses a set of Gaussian
/// width `w`, clamped to `[0, 1]`.
pub fn gordon_escape_bound(big_n: usize, n: usize, w: f64) -> Result<f64> {
    if big_n <= n {
        return Err(Error::InvalidInput(format!("need N > n, got N={big_n}, n={n}")));
    }
    if !(w >= 0.0) {
        return Err(Error::InvalidInput(format!("width must be nonnegative, got {w}")));
    }
    let k = (big_n - n) as f64;
    if w >= k.sqrt() {
        return Err(Error::InvalidRegime(format!("width {w} is at least √(N−n) = {}", k.sqrt())));
    }
    let gap = k / (k + 1.0).sqrt() - w;
    Ok((1.0 - 3.5 * (-gap * gap / 18.0).exp()).clamp(0.0, 1.0))
}
