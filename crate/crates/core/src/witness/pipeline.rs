use serde::Serialize;

use super::grid::BlockGrid;
use super::schedule::Schedule;
use super::ubar::{build_ubar, refine_direction};
use crate::numkit::{dot, norm, DenseMatrix};
use crate::randwalk::{simulate_bm, RngStream, WalkPath};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockStatistics {
    pub values: Vec<f64>,
    pub bad_blocks: Vec<usize>,
    pub level: (u32, usize),
}

impl BlockStatistics {
    pub fn norm(&self) -> f64 {
        norm(&self.values)
    }

    pub fn is_clean(&self) -> bool {
        self.bad_blocks.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Perturbation {
    /// Unit vector in `ℝⁿ`, supported on the cell.
    pub delta: Vec<f64>,
    pub dist: f64,
    /// Number of increments `X_{i,p}` constrained.
    pub constraints: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LevelAction {
    /// No bad blocks; the direction is carried over.
    Clean,
    Perturbed { dist: f64, constraints: usize },
    /// The constructed perturbation was unavailable; a fixed unit vector of
    /// the cell was used instead.
    Fallback { reason: String },
    /// Closing evaluation at `ℓ = M′+1`; no perturbation.
    Check,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelTrace {
    pub k: u32,
    pub l: usize,
    pub values: Vec<f64>,
    pub bad_blocks: Vec<usize>,
    pub action: LevelAction,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Positivity {
    pub min_value: f64,
    pub argmin_time: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessRun {
    pub v: Vec<f64>,
    pub trace: Vec<LevelTrace>,
    pub success: bool,
    pub positivity: Positivity,
}

fn point(path: &WalkPath, t: f64) -> Result<Vec<f64>> {
    path.position_or_origin(t)
}

fn normalized_increment(path: &WalkPath, s: f64, t: f64, cell: &[usize]) -> Result<Vec<f64>> {
    let (a, b) = (point(path, s)?, point(path, t)?);
    let scale = (t - s).sqrt();
    Ok(cell.iter().map(|&j| (b[j] - a[j]) / scale).collect())
}

fn embed(n: usize, cell: &[usize], local: &[f64]) -> Vec<f64> {
    let mut v = vec![0.0; n];
    for (&j, &x) in cell.iter().zip(local) {
        v[j] = x;
    }
    v
}

/// `v̄₀`: the equal-angle direction for the normalized anchor increments
/// `(BM(aᵢ₊₁) − BM(aᵢ))/√(aᵢ₊₁ − aᵢ)` restricted to `cell`, with
/// `bᵢ = 1/√m`; embedded in `ℝⁿ`.
pub fn initial_direction(path: &WalkPath, grid: &BlockGrid, cell: &[usize], tol: f64) -> Result<Vec<f64>> {
    let m = grid.blocks();
    let rows: Vec<Vec<f64>> = (0..m)
        .map(|i| normalized_increment(path, grid.anchor(i), grid.anchor(i + 1), cell))
        .collect::<Result<_>>()?;
    let x = DenseMatrix::new(m, cell.len(), rows.concat())?;
    let b = vec![1.0 / (m as f64).sqrt(); m];
    let u = build_ubar(&x, &b, tol)?;
    Ok(embed(path.dim(), cell, &u.u))
}

/// `BStatᵢ(k,ℓ) = max(0, max_{t∈I^i_k} ⟨v, BM(aᵢ) − BM(t)⟩/√aᵢ − h(k,ℓ),
/// ⟨v, BM(aᵢ) − BM(aᵢ₊₁)⟩/√aᵢ₊₁ + f(k,ℓ))`.
///
/// Block 0 has no interior and `a₀ = 0`.
pub fn block_statistic(
    v: &[f64],
    path: &WalkPath,
    grid: &BlockGrid,
    k: u32,
    l: usize,
    sched: &Schedule,
) -> Result<BlockStatistics> {
    if v.len() != path.dim() {
        return Err(Error::DimensionMismatch {
            expected: path.dim(),
            actual: v.len(),
        });
    }
    let (f, h) = (sched.f(k, l), sched.h(k, l));
    let mut values = Vec::with_capacity(grid.blocks());
    for i in 0..grid.blocks() {
        let (ai, an) = (grid.anchor(i), grid.anchor(i + 1));
        let at_a = dot(v, &point(path, ai)?);
        let mut stat = (at_a - dot(v, &point(path, an)?)) / an.sqrt() + f;
        if i > 0 {
            for t in grid.interior(i, k) {
                stat = stat.max((at_a - dot(v, &point(path, t)?)) / ai.sqrt() - h);
            }
        }
        values.push(stat.max(0.0));
    }
    let bad_blocks = (0..values.len()).filter(|&i| values[i] > 0.0).collect();
    Ok(BlockStatistics {
        values,
        bad_blocks,
        level: (k, l),
    })
}

/// Perturbation `Δ̄_{k,ℓ}` on `cell` for the bad blocks in `stats`.
///
/// Every bad block `i ≥ 1` contributes its `2^k` consecutive increments
/// `t_{i,p} → t_{i,p+1}`, block 0 the single increment `0 → 1`; each
/// increment is projected onto `cell`, divided by the square root of its
/// length and weighted by `b̃ᵢ = 2^{−k/2}·BStatᵢ/‖BStat‖`.
pub fn build_perturbation(
    stats: &BlockStatistics,
    path: &WalkPath,
    grid: &BlockGrid,
    k: u32,
    cell: &[usize],
    tol: f64,
) -> Result<Perturbation> {
    let total = stats.norm();
    if stats.is_clean() || !(total > 0.0) {
        return Err(Error::InvalidInput("no bad blocks to repair".into()));
    }
    let scale = (-(k as f64) / 2.0).exp2();
    let mut rows = Vec::new();
    let mut b = Vec::new();
    for &i in &stats.bad_blocks {
        let bi = scale * stats.values[i] / total;
        let steps: Vec<(f64, f64)> = if i == 0 {
            vec![(0.0, 1.0)]
        } else {
            (0..1usize << k)
                .map(|p| (grid.point(i, p, k), grid.point(i, p + 1, k)))
                .collect()
        };
        for (s, t) in steps {
            rows.push(normalized_increment(path, s, t, cell)?);
            b.push(bi);
        }
    }
    let m = rows.len();
    if 2 * m > cell.len() {
        return Err(Error::CapacityExceeded {
            needed: m,
            capacity: cell.len() / 2,
        });
    }
    let x = DenseMatrix::new(m, cell.len(), rows.concat())?;
    let u = build_ubar(&x, &b, tol)?;
    Ok(Perturbation {
        delta: embed(path.dim(), cell, &u.u),
        dist: u.dist,
        constraints: m,
    })
}

/// Minimum of `⟨v, x(t)⟩/√t` over the points of `path`.
pub fn verify_positivity(v: &[f64], path: &WalkPath) -> Result<Positivity> {
    if path.is_empty() {
        return Err(Error::InvalidInput("empty path".into()));
    }
    if v.len() != path.dim() {
        return Err(Error::DimensionMismatch {
            expected: path.dim(),
            actual: v.len(),
        });
    }
    let mut best = Positivity {
        min_value: f64::INFINITY,
        argmin_time: path.times[0],
    };
    for (i, &t) in path.times.iter().enumerate() {
        let value = dot(v, path.point(i)) / t.sqrt();
        if value < best.min_value {
            best = Positivity {
                min_value: value,
                argmin_time: t,
            };
        }
    }
    Ok(best)
}

const WITNESS_TOL: f64 = 1e-9;

/// Runs the refinement on a given Brownian path, which must contain every
/// time of `grid.times(sched.outer)`.
pub fn run_witness_on_path(path: &WalkPath, grid: &BlockGrid, sched: &Schedule) -> Result<WitnessRun> {
    let n = path.dim();
    let partition = sched.partition(n)?;
    let mut v = initial_direction(path, grid, &partition.initial, WITNESS_TOL)?;
    let mut trace = Vec::new();
    let mut last_clean = true;
    for k in 1..=sched.outer {
        for l in 1..=sched.inner + 1 {
            let stats = block_statistic(&v, path, grid, k, l, sched)?;
            let action = if l == sched.inner + 1 {
                last_clean = stats.is_clean();
                LevelAction::Check
            } else if stats.is_clean() {
                LevelAction::Clean
            } else {
                let cell = partition.cell(k, l);
                let (delta, action) = match build_perturbation(&stats, path, grid, k, cell, WITNESS_TOL) {
                    Ok(p) => (
                        p.delta,
                        LevelAction::Perturbed {
                            dist: p.dist,
                            constraints: p.constraints,
                        },
                    ),
                    Err(e @ (Error::CapacityExceeded { .. } | Error::DegenerateInput(_))) => {
                        (embed(n, &cell[..1], &[1.0]), LevelAction::Fallback { reason: e.to_string() })
                    }
                    Err(e) => return Err(e),
                };
                v = refine_direction(&v, &delta, Schedule::alpha(k, l))?;
                action
            };
            trace.push(LevelTrace {
                k,
                l,
                values: stats.values,
                bad_blocks: stats.bad_blocks,
                action,
            });
        }
    }
    if sched.outer == 0 {
        last_clean = block_statistic(&v, path, grid, 1, 0, sched)?.is_clean();
    }
    let positivity = verify_positivity(&v, path)?;
    Ok(WitnessRun {
        v,
        trace,
        success: last_clean,
        positivity,
    })
}

/// Simulates `BM_n` on the level-`M` block grid and runs the refinement.
pub fn run_witness_pipeline(n: usize, blocks: usize, sched: &Schedule, rng: &RngStream) -> Result<WitnessRun> {
    let grid = BlockGrid::new(blocks)?;
    let mut stream = rng.clone();
    let path = simulate_bm(&grid.times(sched.outer), n, &mut stream)?;
    run_witness_on_path(&path, &grid, sched)
}
