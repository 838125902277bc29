use rayon::prelude::*;
use serde::Serialize;

use super::stats::{BernoulliEstimate, DEFAULT_CONFIDENCE};
use crate::numkit::{contains_origin_normalized, HullVerdict, CERTIFICATE_TOL};
use crate::randwalk::{
    grid_geometric, grid_poisson, grid_uniform, simulate_bm, simulate_sphere_walk, simulate_zn,
    RngStream, WalkPath,
};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GridKind {
    /// `i/N`, `i = 1…N`.
    Uniform,
    /// `K^{i−1}`, `i = 1…N`.
    Geometric { ratio: f64 },
    /// Poisson process on `(0, 1]` with intensity `N`; the point count is
    /// random.
    Poisson,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum Model {
    Bm { grid: GridKind },
    /// All positions `W(1)…W(N)` of the walk on ℤⁿ.
    Zn,
    Sphere { theta: f64 },
}

impl Model {
    /// Simulates a walk with `steps` points (or intensity `steps`).
    pub fn simulate(&self, n: usize, steps: usize, rng: &mut RngStream) -> Result<WalkPath> {
        match *self {
            Model::Bm { grid } => {
                let g = match grid {
                    GridKind::Uniform => grid_uniform(steps)?,
                    GridKind::Geometric { ratio } => grid_geometric(1.0, ratio, steps)?,
                    GridKind::Poisson => grid_poisson(steps as f64, rng)?,
                };
                simulate_bm(&g, n, rng)
            }
            Model::Zn => {
                let checkpoints: Vec<usize> = (1..=steps).collect();
                simulate_zn(steps, &checkpoints, n, rng)
            }
            Model::Sphere { theta } => simulate_sphere_walk(theta, steps, n, rng),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AbsorptionEstimate {
    /// Frequency of an `Inside` verdict over all trials.
    pub estimate: BernoulliEstimate,
    pub degenerate: usize,
    /// Trials where simulation or the hull test returned an error; these
    /// count as not absorbed.
    pub errors: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Outcome {
    Inside,
    Outside,
    Degenerate,
    Error,
}

fn run_trial(model: &Model, n: usize, steps: usize, mut rng: RngStream) -> Outcome {
    let path = match model.simulate(n, steps, &mut rng) {
        Ok(p) => p,
        Err(_) => return Outcome::Error,
    };
    if path.is_empty() {
        // an empty Poisson draw has an empty hull
        return Outcome::Outside;
    }
    match contains_origin_normalized(&path.points, CERTIFICATE_TOL) {
        Ok(HullVerdict::Inside { .. }) => Outcome::Inside,
        Ok(HullVerdict::Outside { .. }) => Outcome::Outside,
        Ok(HullVerdict::Degenerate { .. }) => Outcome::Degenerate,
        Err(_) => Outcome::Error,
    }
}

/// Estimates `P{0 ∈ conv(walk)}` from `trials` independent walks.
pub fn absorption_probability(
    model: &Model,
    n: usize,
    steps: usize,
    trials: usize,
    rng: &RngStream,
) -> Result<AbsorptionEstimate> {
    if trials == 0 || n == 0 || steps == 0 {
        return Err(Error::InvalidInput("need n, steps and trials ≥ 1".into()));
    }
    let outcomes: Vec<Outcome> = (0..trials)
        .into_par_iter()
        .map(|i| run_trial(model, n, steps, rng.child(i as u64)))
        .collect();
    let count = |o: Outcome| outcomes.iter().filter(|&&x| x == o).count();
    Ok(AbsorptionEstimate {
        estimate: BernoulliEstimate::new(count(Outcome::Inside), trials, DEFAULT_CONFIDENCE)?,
        degenerate: count(Outcome::Degenerate),
        errors: count(Outcome::Error),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbeClass {
    /// Confidence interval lies at or above the target.
    Above,
    /// Confidence interval lies strictly below the target.
    Below,
    Ambiguous,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Probe {
    pub steps: usize,
    pub estimate: AbsorptionEstimate,
    pub class: ProbeClass,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdResult {
    /// Smallest probed `N` classified `Above`.
    pub n_star: usize,
    /// Largest probed `N < n_star`, if any.
    pub below: Option<usize>,
    /// Whether the probe at `below` was decisively `Below`.
    pub bracket_decisive: bool,
    /// Every probe in the order it was run.
    pub ladder: Vec<Probe>,
}

fn classify(e: &BernoulliEstimate, target: f64) -> ProbeClass {
    if e.ci_low >= target {
        ProbeClass::Above
    } else if e.ci_high < target {
        ProbeClass::Below
    } else {
        ProbeClass::Ambiguous
    }
}

/// Doubling from `N = 1` until a probe is `Above`, then bisection on the
/// last bracket. Every probe uses the same root stream, so trial `i` sees
/// the same child stream at every `N`.
///
/// Fails with `Unresolved` when even `trials` successes out of `trials`
/// cannot put the interval above the target, or when doubling passes
/// `max_steps`.
pub fn absorption_threshold(
    model: &Model,
    n: usize,
    target: f64,
    trials: usize,
    max_steps: usize,
    rng: &RngStream,
) -> Result<ThresholdResult> {
    if !(target > 0.0 && target < 1.0) {
        return Err(Error::InvalidInput(format!("target must lie in (0, 1), got {target}")));
    }
    if trials == 0 || max_steps == 0 {
        return Err(Error::InvalidInput("need trials ≥ 1 and max_steps ≥ 1".into()));
    }
    let best = BernoulliEstimate::new(trials, trials, DEFAULT_CONFIDENCE)?;
    if best.ci_low < target {
        return Err(Error::Unresolved(format!(
            "{trials} trials cannot certify probability {target}; the best lower bound is {:.4}",
            best.ci_low
        )));
    }
    let mut ladder = Vec::new();
    let probe = |steps: usize, ladder: &mut Vec<Probe>| -> Result<ProbeClass> {
        let estimate = absorption_probability(model, n, steps, trials, rng)?;
        let class = classify(&estimate.estimate, target);
        ladder.push(Probe { steps, estimate, class });
        Ok(class)
    };

    let mut lo = 0usize;
    let mut hi = 1usize;
    loop {
        if probe(hi, &mut ladder)? == ProbeClass::Above {
            break;
        }
        lo = hi;
        if hi >= max_steps {
            return Err(Error::Unresolved(format!(
                "no probe up to {max_steps} steps reached probability {target}"
            )));
        }
        hi = (2 * hi).min(max_steps);
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if probe(mid, &mut ladder)? == ProbeClass::Above {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let below = (lo > 0).then_some(lo);
    let bracket_decisive = below.is_some_and(|b| {
        ladder
            .iter()
            .rev()
            .find(|p| p.steps == b)
            .is_some_and(|p| p.class == ProbeClass::Below)
    });
    Ok(ThresholdResult {
        n_star: hi,
        below,
        bracket_decisive,
        ladder,
    })
}
