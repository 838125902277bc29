use rayon::prelude::*;
use serde::Serialize;

use super::stats::{BernoulliEstimate, DEFAULT_CONFIDENCE};
use crate::numkit::{contains_origin_normalized, DenseMatrix, HullVerdict, CERTIFICATE_TOL};
use crate::randwalk::{grid_dyadic, simulate_bm, RngStream, TimeGrid, WalkPath};
use crate::witness::{run_witness_on_path, BlockGrid, Schedule};
use crate::{Error, Result};

/// Dyadic grid `2^{j/density}` on `[1, 2^{c_exp·n}]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MinimaxConfig {
    pub c_exp: f64,
    pub density: usize,
}

impl MinimaxConfig {
    fn grid(&self, n: usize) -> Result<TimeGrid> {
        let exponent = self.c_exp * n as f64;
        if !(exponent < 1000.0) {
            return Err(Error::Overflow { index: 0 });
        }
        grid_dyadic(exponent, self.density)
    }

    /// Block grid and refinement depth matching this grid, when the density
    /// is a power of two.
    fn blocks(&self, n: usize) -> Option<(BlockGrid, u32)> {
        if !self.density.is_power_of_two() {
            return None;
        }
        let blocks = (self.c_exp * n as f64).floor() as usize + 1;
        Some((BlockGrid::new(blocks).ok()?, self.density.trailing_zeros()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinimaxEstimate {
    pub config: MinimaxConfig,
    /// `P{0 ∈ conv{BM(t) : t on the grid}}`.
    pub absorbed: BernoulliEstimate,
    /// Success rate of the witness construction on the same paths.
    pub witness: Option<BernoulliEstimate>,
    pub witness_errors: usize,
    /// Paths where the witness succeeded although the hull contains the
    /// origin; always 0 for a sound construction.
    pub contradictions: usize,
}

fn sub_path(path: &WalkPath, grid: &TimeGrid) -> Result<WalkPath> {
    let mut data = Vec::with_capacity(grid.len() * path.dim());
    for &t in grid.times() {
        data.extend_from_slice(path.position_at(t).ok_or(Error::MissingGridPoint { time: t })?);
    }
    Ok(WalkPath {
        model: path.model,
        times: grid.times().to_vec(),
        points: DenseMatrix::new(grid.len(), path.dim(), data)?,
        seed: path.seed,
        stream: path.stream,
    })
}

#[derive(Clone, Copy)]
struct TrialResult {
    inside: bool,
    /// `None` without a schedule, `Some(None)` when the run errored.
    witness: Option<Option<bool>>,
}

/// Runs every configuration on the same Brownian paths: each trial simulates
/// once on the union of all grids and restricts, so nested grids give nested
/// events path by path.
pub fn minimax_negative_sweep(
    n: usize,
    configs: &[MinimaxConfig],
    trials: usize,
    witness: Option<&Schedule>,
    rng: &RngStream,
) -> Result<Vec<MinimaxEstimate>> {
    if n == 0 || trials == 0 || configs.is_empty() {
        return Err(Error::InvalidInput("need n ≥ 1, trials ≥ 1 and a configuration".into()));
    }
    let grids: Vec<TimeGrid> = configs.iter().map(|c| c.grid(n)).collect::<Result<_>>()?;
    let union = grids.iter().skip(1).fold(grids[0].clone(), |acc, g| acc.merge(g));
    let schedules: Vec<Option<(BlockGrid, Schedule)>> = configs
        .iter()
        .map(|c| {
            let sched = witness?;
            let (bg, depth) = c.blocks(n)?;
            let s = Schedule {
                outer: depth,
                ..sched.clone()
            };
            s.partition(n).ok()?;
            Some((bg, s))
        })
        .collect();

    let per_trial: Vec<Vec<TrialResult>> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut stream = rng.child(i as u64);
            let path = simulate_bm(&union, n, &mut stream)?;
            let mut out = Vec::with_capacity(configs.len());
            for (g, sched) in grids.iter().zip(&schedules) {
                let sub = sub_path(&path, g)?;
                let inside = matches!(contains_origin_normalized(&sub.points, CERTIFICATE_TOL)?, HullVerdict::Inside { .. });
                let witness = sched.as_ref().map(|(bg, s)| {
                    sub_path(&path, &bg.times(s.outer))
                        .and_then(|p| run_witness_on_path(&p, bg, s))
                        .map(|r| r.success)
                        .ok()
                });
                out.push(TrialResult { inside, witness });
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;

    configs
        .iter()
        .enumerate()
        .map(|(c, config)| {
            let inside = per_trial.iter().filter(|r| r[c].inside).count();
            let absorbed = BernoulliEstimate::new(inside, trials, DEFAULT_CONFIDENCE)?;
            let (witness, witness_errors, contradictions) = if schedules[c].is_some() {
                let ok = per_trial.iter().filter(|r| r[c].witness == Some(Some(true))).count();
                let errors = per_trial.iter().filter(|r| r[c].witness == Some(None)).count();
                let bad = per_trial
                    .iter()
                    .filter(|r| r[c].witness == Some(Some(true)) && r[c].inside)
                    .count();
                (Some(BernoulliEstimate::new(ok, trials, DEFAULT_CONFIDENCE)?), errors, bad)
            } else {
                (None, 0, 0)
            };
            Ok(MinimaxEstimate {
                config: *config,
                absorbed,
                witness,
                witness_errors,
                contradictions,
            })
        })
        .collect()
}

pub fn minimax_negative_check(
    n: usize,
    c_exp: f64,
    density: usize,
    trials: usize,
    witness: Option<&Schedule>,
    rng: &RngStream,
) -> Result<MinimaxEstimate> {
    let config = MinimaxConfig { c_exp, density };
    Ok(minimax_negative_sweep(n, &[config], trials, witness, rng)?.remove(0))
}

fn bridge_maximum(points: usize, mut rng: RngStream) -> f64 {
    let dt = 1.0 / points as f64;
    let sd = dt.sqrt();
    let w: Vec<f64> = (0..points)
        .scan(0.0, |acc, _| {
            *acc += sd * rng.gaussian();
            Some(*acc)
        })
        .collect();
    let end = w[points - 1];
    w.iter()
        .enumerate()
        .map(|(j, x)| x - (j + 1) as f64 * dt * end)
        .fold(0.0, f64::max)
}

/// `P{max_j X(j/m) ≥ τ}` for standard Brownian bridges `X` sampled at
/// `j/m`, `j = 1…m`, for every `τ` in `taus` on the same bridges.
pub fn bridge_max_sweep(taus: &[f64], points: usize, trials: usize, rng: &RngStream) -> Result<Vec<BernoulliEstimate>> {
    if points == 0 || trials == 0 || taus.iter().any(|&t| !(t > 0.0)) {
        return Err(Error::InvalidInput("need τ > 0, points ≥ 1 and trials ≥ 1".into()));
    }
    let maxima: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|i| bridge_maximum(points, rng.child(i as u64)))
        .collect();
    taus.iter()
        .map(|&tau| {
            let hits = maxima.iter().filter(|&&m| m >= tau).count();
            BernoulliEstimate::new(hits, trials, DEFAULT_CONFIDENCE)
        })
        .collect()
}

pub fn bridge_max_check(tau: f64, points: usize, trials: usize, rng: &RngStream) -> Result<BernoulliEstimate> {
    Ok(bridge_max_sweep(&[tau], points, trials, rng)?.remove(0))
}
