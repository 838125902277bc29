use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use hullwalk::conelab::{
    build_ftilde_sphere, build_prefix_matrix_bm, escape_event, estimate_property_p, PrefixMatrix,
};
use hullwalk::harness::{
    absorption_probability, absorption_threshold, bridge_max_check, covering_time, BernoulliEstimate,
    GridKind, Model, DEFAULT_CONFIDENCE,
};
use hullwalk::numkit::{
    condition_number, contains_origin, dot, DenseMatrix, HullVerdict, CERTIFICATE_TOL, CONDITION_TOL,
};
use hullwalk::randwalk::{grid_geometric, simulate_zn, RngStream, WalkPath};
use hullwalk::widthlab::{moreau_decompose, width_budget_check, ConeSpec, PROJECTION_TOL};
use hullwalk::witness::{
    build_ubar, run_witness_pipeline, series_bound_check, truncated_norm_check, LevelAction, Schedule,
};

use crate::args::{CheckArgs, Command, ConeArg, GridArg, ModelArg, RowArg, Suite, WalkArgs};

/// What a subcommand produced: its echoed parameters and either results or
/// the error that stopped it.
pub struct Outcome {
    pub experiment: &'static str,
    pub parameters: Value,
    pub results: Result<Value, String>,
    /// Set by `simulate`, for CSV export.
    pub path: Option<WalkPath>,
    /// False when a check suite ran to completion but an invariant failed.
    pub passed: bool,
}

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("report values serialize")
}

fn model_of(w: &WalkArgs) -> Model {
    match w.model {
        ModelArg::Bm => Model::Bm {
            grid: match w.grid {
                GridArg::Uniform => GridKind::Uniform,
                GridArg::Geometric => GridKind::Geometric { ratio: w.ratio },
                GridArg::Poisson => GridKind::Poisson,
            },
        },
        ModelArg::Zn => Model::Zn,
        ModelArg::Sphere => Model::Sphere { theta: w.theta },
    }
}

type Run = hullwalk::Result<(Value, Option<WalkPath>, bool)>;

fn done(v: impl Serialize) -> Run {
    Ok((to_value(v), None, true))
}

pub fn run(command: &Command, seed: u64) -> Outcome {
    let rng = RngStream::new(seed, 0);
    let (experiment, parameters, result): (&'static str, Value, Run) = match command {
        Command::Simulate(a) => ("simulate", to_value(a), simulate(a, &rng)),
        Command::Absorb(a) => (
            "absorb",
            to_value(a),
            absorption_probability(&model_of(&a.walk), a.walk.n, a.walk.steps, a.trials, &rng).and_then(done),
        ),
        Command::Threshold(a) => (
            "threshold",
            to_value(a),
            absorption_threshold(&model_of(&a.walk), a.walk.n, a.target, a.trials, a.max_steps, &rng)
                .and_then(done),
        ),
        Command::Cover(a) => (
            "cover",
            to_value(a),
            covering_time(a.theta, a.n, a.trials, a.cap, &rng).and_then(done),
        ),
        Command::Width(a) => ("width", to_value(a), width(a, &rng)),
        Command::Escape(a) => ("escape", to_value(a), escape(a, &rng)),
        Command::Witness(a) => ("witness", to_value(a), witness(a, &rng)),
        Command::Check(a) => ("check", to_value(a), check(a, &rng)),
    };
    match result {
        Ok((results, path, passed)) => Outcome {
            experiment,
            parameters,
            results: Ok(results),
            path,
            passed,
        },
        Err(e) => Outcome {
            experiment,
            parameters,
            results: Err(e.to_string()),
            path: None,
            passed: false,
        },
    }
}

fn simulate(a: &WalkArgs, rng: &RngStream) -> Run {
    let path = model_of(a).simulate(a.n, a.steps, &mut rng.child(0))?;
    let rows: Vec<&[f64]> = path.points.row_iter().collect();
    let results = json!({ "times": path.times, "points": rows });
    Ok((results, Some(path), true))
}

fn cone_spec(cone: ConeArg, dim: usize, ratio: f64, theta: f64, n: usize) -> hullwalk::Result<ConeSpec> {
    match cone {
        ConeArg::Orthant => Ok(ConeSpec::orthant(dim)),
        ConeArg::Bm => ConeSpec::new(&build_prefix_matrix_bm(&grid_geometric(1.0, ratio, dim)?)?),
        ConeArg::Sphere => ConeSpec::new(&build_ftilde_sphere(theta, dim, n)?),
    }
}

fn width(a: &crate::args::WidthArgs, rng: &RngStream) -> Run {
    let spec = cone_spec(a.cone, a.dim, a.ratio, a.theta, a.n)?;
    done(width_budget_check(&spec, a.trials, rng)?)
}

fn escape(a: &crate::args::EscapeArgs, rng: &RngStream) -> Run {
    let n = a.n;
    let m = n.pow(4);
    let scale = (n as f64 / m as f64).sqrt();
    let row = |r: &mut RngStream| -> Vec<f64> {
        match a.rows_kind {
            RowArg::Gaussian => r.gaussian_vec(n),
            RowArg::Zn => {
                let p = simulate_zn(m, &[m], n, r).expect("valid lattice walk");
                p.point(0).iter().map(|x| x * scale).collect()
            }
        }
    };
    let matrices = rng.child(0);
    let escaped: Vec<bool> = (0..a.trials)
        .into_par_iter()
        .map(|i| {
            let mut r = matrices.child(i as u64);
            let data: Vec<f64> = (0..a.rows).flat_map(|_| row(&mut r)).collect();
            Ok(escape_event(&DenseMatrix::new(a.rows, n, data)?, CERTIFICATE_TOL)?.escapes)
        })
        .collect::<hullwalk::Result<_>>()?;
    let escapes = escaped.iter().filter(|&&e| e).count();
    let property = estimate_property_p(row, a.tau, n, a.directions, a.trials, &rng.child(1))?;
    done(json!({
        "escape": BernoulliEstimate::new(escapes, a.trials, DEFAULT_CONFIDENCE)?,
        "property_p": property,
    }))
}

#[derive(Serialize)]
struct LevelSummary {
    k: u32,
    l: usize,
    mean_bad_blocks: f64,
    perturbed: usize,
    fallback: usize,
}

fn witness(a: &crate::args::WitnessArgs, rng: &RngStream) -> Run {
    let sched = Schedule {
        c_f: a.cf,
        c_h: a.ch,
        outer: a.outer,
        inner: a.inner,
        initial_cell: a.initial_cell,
    };
    let runs = (0..a.trials)
        .into_par_iter()
        .map(|i| run_witness_pipeline(a.n, a.blocks, &sched, &rng.child(i as u64)))
        .collect::<hullwalk::Result<Vec<_>>>()?;
    let successes = runs.iter().filter(|r| r.success).count();
    let levels: Vec<LevelSummary> = runs
        .first()
        .map(|r| r.trace.iter().map(|t| (t.k, t.l)).collect::<Vec<_>>())
        .unwrap_or_default()
        .into_iter()
        .enumerate()
        .map(|(idx, (k, l))| {
            let traces = runs.iter().map(|r| &r.trace[idx]);
            LevelSummary {
                k,
                l,
                mean_bad_blocks: traces.clone().map(|t| t.bad_blocks.len() as f64).sum::<f64>() / runs.len() as f64,
                perturbed: traces
                    .clone()
                    .filter(|t| matches!(t.action, LevelAction::Perturbed { .. }))
                    .count(),
                fallback: traces.filter(|t| matches!(t.action, LevelAction::Fallback { .. })).count(),
            }
        })
        .collect();
    let min_positivity: Vec<f64> = runs.iter().map(|r| r.positivity.min_value).collect();
    done(json!({
        "success": BernoulliEstimate::new(successes, a.trials, DEFAULT_CONFIDENCE)?,
        "levels": levels,
        "min_positivity": min_positivity,
        "min_positivity_over_successes": runs
            .iter()
            .filter(|r| r.success)
            .map(|r| r.positivity.min_value)
            .fold(None, |acc: Option<f64>, v| Some(acc.map_or(v, |a| a.min(v)))),
    }))
}

#[derive(Serialize)]
struct CheckLine {
    name: String,
    value: f64,
    limit: f64,
    pass: bool,
}

fn at_most(name: impl Into<String>, value: f64, limit: f64) -> CheckLine {
    CheckLine {
        name: name.into(),
        value,
        limit,
        pass: value <= limit,
    }
}

fn random_lower(n: usize, r: &mut RngStream) -> DenseMatrix {
    let scale = 0.5 / (n as f64).sqrt();
    DenseMatrix::from_fn(n, n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Equal => 1.0 + r.uniform(),
        std::cmp::Ordering::Greater => scale * r.gaussian(),
        std::cmp::Ordering::Less => 0.0,
    })
}

fn check(a: &CheckArgs, rng: &RngStream) -> Run {
    let n = a.n;
    let mut lines = Vec::new();
    match a.suite {
        Suite::Hull => {
            let mut bad = 0usize;
            for i in 0..a.trials {
                let mut r = rng.child(i as u64);
                let m = 1 + r.below(6 * n as u64) as usize;
                let shift = r.gaussian();
                let data: Vec<f64> = (0..m * n).map(|_| r.gaussian() + shift).collect();
                let pts = DenseMatrix::new(m, n, data)?;
                let ok = match contains_origin(&pts, CERTIFICATE_TOL)? {
                    HullVerdict::Inside { coefficients, .. } => {
                        let mut p = vec![0.0; n];
                        let mut total = 0.0;
                        for (j, c) in coefficients {
                            total += c;
                            for (pk, x) in p.iter_mut().zip(pts.row(j)) {
                                *pk += c * x;
                            }
                        }
                        let scale = pts.row_iter().map(|x| dot(x, x).sqrt()).fold(0.0, f64::max);
                        (total - 1.0).abs() < 1e-9 && dot(&p, &p).sqrt() <= 10.0 * CERTIFICATE_TOL * scale
                    }
                    HullVerdict::Outside { direction, margin, .. } => {
                        margin > 0.0 && pts.row_iter().all(|x| dot(x, direction.as_slice()) >= margin * (1.0 - 1e-12))
                    }
                    HullVerdict::Degenerate { .. } => true,
                };
                bad += usize::from(!ok);
            }
            lines.push(at_most("invalid_certificates", bad as f64, 0.0));
        }
        Suite::Moreau => {
            let (mut s, mut o, mut p) = (0.0f64, 0.0f64, 0.0f64);
            for i in 0..a.trials {
                let mut r = rng.child(i as u64);
                let spec = ConeSpec::from_matrix(random_lower(n, &mut r))?;
                let y = r.gaussian_vec(n);
                let d = moreau_decompose(&spec, &y, PROJECTION_TOL)?;
                s = s.max(d.sum_residual);
                o = o.max(d.orthogonality);
                p = p.max(d.pythagoras);
            }
            lines.push(at_most("decomposition", s, 1e-8));
            lines.push(at_most("orthogonality", o, 1e-8));
            lines.push(at_most("pythagoras", p, 1e-8));
        }
        Suite::Budget => {
            for (name, cone) in [("orthant", ConeArg::Orthant), ("bm", ConeArg::Bm), ("sphere", ConeArg::Sphere)] {
                let spec = cone_spec(cone, n, 4.0, std::f64::consts::FRAC_PI_3, n)?;
                let b = width_budget_check(&spec, a.trials.max(100), rng)?;
                lines.push(CheckLine {
                    name: format!("budget_{name}"),
                    value: b.sum_of_squares,
                    limit: n as f64 * (1.0 + 3.0 * b.relative_error),
                    pass: b.budget_ok,
                });
            }
        }
        Suite::Condition => {
            let k = 4.0f64;
            let c_k = 1.0 + (k - 1.0).powf(-0.5) / (1.0 - k.powf(-0.5));
            let bm_bound = c_k * (1.0 + (k - 1.0).powf(-0.5));
            let f = build_prefix_matrix_bm(&grid_geometric(1.0, k, n)?)?;
            lines.push(at_most("bm_prefix", condition_number(f.matrix(), CONDITION_TOL)?, bm_bound));
            let theta = std::f64::consts::FRAC_PI_3;
            let sphere_bound = (1.0 + theta.cos()) / (theta.sin() * (1.0 - theta.cos()));
            let ft: PrefixMatrix = build_ftilde_sphere(theta, n, n.max(2))?;
            lines.push(at_most("sphere_prefix", condition_number(ft.matrix(), CONDITION_TOL)?, sphere_bound));
        }
        Suite::Series => {
            for q in [0.1, 0.5, 0.9] {
                let c = series_bound_check(q)?;
                lines.push(at_most(format!("series_q{q}"), c.sum, c.bound));
            }
        }
        Suite::Truncated => {
            let c = truncated_norm_check(10_000, 3.0, a.trials, rng)?;
            lines.push(CheckLine {
                name: "truncated_norm".into(),
                value: c.frequency,
                limit: c.required,
                pass: c.holds,
            });
        }
        Suite::Bridge => {
            let e = bridge_max_check(1.0, 1000, a.trials, rng)?;
            lines.push(CheckLine {
                name: "bridge_max".into(),
                value: e.p_hat,
                limit: 0.14,
                pass: (0.10..=0.14).contains(&e.p_hat),
            });
        }
        Suite::Ubar => {
            let (d, m) = (4 * n.max(1), n.max(1));
            let mut worst = 0.0f64;
            for i in 0..a.trials {
                let mut r = rng.child(i as u64);
                let x = DenseMatrix::new(m, d, r.gaussian_vec(m * d))?;
                let b = vec![1.0 / (m as f64).sqrt(); m];
                let u = build_ubar(&x, &b, 1e-10)?;
                for (j, bj) in b.iter().enumerate() {
                    worst = worst.max((dot(&u.u, x.row(j)) - u.dist * bj).abs() / u.dist);
                }
            }
            lines.push(at_most("ubar_exactness", worst, 1e-8));
        }
    }
    let pass = lines.iter().all(|l| l.pass);
    Ok((json!({ "checks": lines, "pass": pass }), None, pass))
}
