use hullwalk::numkit::{dot, least_squares, norm, DenseMatrix};
use hullwalk::randwalk::{grid_dyadic, simulate_bm, RngStream, TimeGrid};
use hullwalk::witness::*;
use proptest::prelude::*;

fn gaussian_matrix(m: usize, d: usize, r: &mut RngStream) -> DenseMatrix {
    DenseMatrix::new(m, d, r.gaussian_vec(m * d)).unwrap()
}

#[test]
fn ubar_closed_forms() {
    let x = DenseMatrix::new(1, 4, vec![3.0, 0.0, 0.0, 0.0]).unwrap();
    let u = build_ubar(&x, &[1.0], 1e-10).unwrap();
    assert_eq!(u.u, vec![1.0, 0.0, 0.0, 0.0]);
    assert!((u.dist - 3.0).abs() < 1e-15);

    let x = DenseMatrix::from_fn(2, 4, |i, j| if i == j { 1.0 } else { 0.0 });
    let h = 0.5f64.sqrt();
    let u = build_ubar(&x, &[h, h], 1e-10).unwrap();
    assert!((u.dist - 1.0).abs() < 1e-14);
    for i in 0..2 {
        assert!((u.u[i] - h).abs() < 1e-14);
        assert!((dot(&u.u, x.row(i)) - h).abs() < 1e-14);
    }
}

#[test]
fn ubar_at_moderate_dimension() {
    let (d, m) = (200, 50);
    let mut good = 0;
    for seed in 0..100 {
        let mut r = RngStream::new(seed, 0);
        let x = gaussian_matrix(m, d, &mut r);
        let b: Vec<f64> = {
            let v = r.unit_vector(m);
            v.into_iter().map(f64::abs).collect()
        };
        let u = build_ubar(&x, &b, 1e-10).unwrap();
        assert!((norm(&u.u) - 1.0).abs() < 1e-12);
        let ips: Vec<f64> = (0..m).map(|i| dot(&u.u, x.row(i))).collect();
        for (ip, bi) in ips.iter().zip(&b) {
            assert!((ip - u.dist * bi).abs() <= 1e-8 * u.dist, "seed {seed}");
        }
        if ips.iter().zip(&b).all(|(ip, bi)| *ip >= 0.1 * (d as f64).sqrt() * bi) {
            good += 1;
        }
        // ū lies in the row span of X
        let coef = least_squares(&x.transpose(), &u.u, 1e-12).unwrap();
        let back = x.transpose().matvec(&coef);
        let res: f64 = back.iter().zip(&u.u).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
        assert!(res <= 1e-10, "seed {seed}: {res}");
    }
    assert!(good >= 95, "{good}");
}

#[test]
fn ubar_drops_zero_coefficients() {
    let mut r = RngStream::new(1, 0);
    let x = gaussian_matrix(3, 10, &mut r);
    let u = build_ubar(&x, &[0.6, 0.0, 0.8], 1e-10).unwrap();
    assert_eq!(u.active, vec![0, 2]);
    assert!((dot(&u.u, x.row(0)) - 0.6 * u.dist).abs() < 1e-10);
}

#[test]
fn ubar_rejects_dependent_rows() {
    let x = DenseMatrix::new(2, 6, vec![1.0, 2.0, 0.0, 0.0, 0.0, 0.0, 2.0, 4.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
    assert!(build_ubar(&x, &[0.5, 0.5], 1e-10).is_err());
}

#[test]
fn bridge_residual_variance() {
    let (a, b, s) = (1.0, 3.0, 1.5);
    let sp = bridge_split(&[0.0], &[0.0], 0.0, 1.0, 0.5).unwrap();
    assert_eq!(sp.variance, 0.25);
    assert_eq!(bridge_split(&[1.0], &[2.0], a, b, a).unwrap().variance, 0.0);
    assert_eq!(bridge_split(&[1.0], &[2.0], a, b, b).unwrap().variance, 0.0);

    let grid = TimeGrid::new(vec![a, s, b]).unwrap();
    let trials = 100_000;
    let mut sum = 0.0;
    let mut sq = 0.0;
    let rng = RngStream::new(2, 0);
    for i in 0..trials {
        let p = simulate_bm(&grid, 1, &mut rng.child(i)).unwrap();
        let split = bridge_split(p.point(0), p.point(2), a, b, s).unwrap();
        let res = p.point(1)[0] - split.w[0];
        sum += res;
        sq += res * res;
    }
    let t = trials as f64;
    let var = sq / t - (sum / t).powi(2);
    let want = (b - s) * (s - a) / (b - a);
    // the sample variance of a Gaussian has standard deviation σ²√(2/T)
    assert!((var - want).abs() <= 3.0 * want * (2.0 / t).sqrt(), "{var} vs {want}");
}

#[test]
fn dyadic_grid_matches_block_times() {
    let grid = BlockGrid::new(6).unwrap();
    for k in 0..4u32 {
        let times = grid.times(k);
        let dy = grid_dyadic(5.0, 1 << k).unwrap();
        for t in times.times() {
            assert!(dy.index_of(*t).is_some(), "k={k}, t={t}");
        }
        assert_eq!(times.len(), 6 + 5 * ((1 << k) - 1));
    }
}

#[test]
fn single_block_returns_initial_direction() {
    let sched = Schedule {
        outer: 0,
        inner: 0,
        initial_cell: 16,
        ..Schedule::default()
    };
    let rng = RngStream::new(3, 0);
    let run = run_witness_pipeline(16, 1, &sched, &rng).unwrap();
    assert!(run.trace.is_empty());
    let path = simulate_bm(&BlockGrid::new(1).unwrap().times(0), 16, &mut rng.clone()).unwrap();
    let x = norm(path.point(0));
    for (a, b) in run.v.iter().zip(path.point(0)) {
        assert!((a - b / x).abs() < 1e-12);
    }
}

#[test]
fn successes_are_positive_on_their_grid() {
    let sched = Schedule::default();
    let mut successes = 0;
    for seed in 0..40 {
        let rng = RngStream::new(seed, 0);
        let run = run_witness_pipeline(64, 4, &sched, &rng).unwrap();
        assert!((norm(&run.v) - 1.0).abs() < 1e-12);
        if run.success {
            successes += 1;
            let grid = BlockGrid::new(4).unwrap();
            let path = simulate_bm(&grid.times(sched.outer), 64, &mut rng.clone()).unwrap();
            let pos = verify_positivity(&run.v, &path).unwrap();
            assert!(pos.min_value > 0.0, "seed {seed}");
            assert_eq!(pos, run.positivity);
        }
    }
    assert!(successes > 0);
}

#[test]
fn trace_covers_every_level() {
    let sched = Schedule::default();
    let run = run_witness_pipeline(64, 4, &sched, &RngStream::new(5, 0)).unwrap();
    assert_eq!(run.trace.len(), sched.outer as usize * (sched.inner + 1));
    for t in &run.trace {
        let bad: Vec<usize> = (0..t.values.len()).filter(|&i| t.values[i] > 0.0).collect();
        assert_eq!(bad, t.bad_blocks);
    }
    assert!(matches!(run.trace.last().unwrap().action, LevelAction::Check));
}

#[test]
fn series_and_truncated_checks() {
    for q in [0.1, 0.5, 0.9] {
        let c = series_bound_check(q).unwrap();
        assert!(c.holds && c.sum <= c.bound, "q={q}");
    }
    let t = truncated_norm_check(10_000, 3.0, 200, &RngStream::new(6, 0)).unwrap();
    assert!(t.holds);
    assert!(t.frequency >= t.required);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn refine_keeps_unit_norm(seed in any::<u64>(), alpha in 0.0f64..2.0) {
        let mut r = RngStream::new(seed, 0);
        let mut v = r.unit_vector(6);
        v.extend([0.0; 4]);
        let mut d = vec![0.0; 6];
        d.extend(r.unit_vector(4));
        let out = refine_direction(&v, &d, alpha).unwrap();
        prop_assert!((norm(&out) - 1.0).abs() <= 1e-12);
        let x = r.gaussian_vec(10);
        let want = (dot(&v, &x) + alpha * dot(&d, &x)) / (1.0 + alpha * alpha).sqrt();
        prop_assert!((dot(&out, &x) - want).abs() <= 1e-12 * (1.0 + want.abs()));
    }

    #[test]
    fn ubar_identity(seed in any::<u64>(), m in 1usize..8) {
        let mut r = RngStream::new(seed, 1);
        let x = gaussian_matrix(m, 2 * m + 3, &mut r);
        let b: Vec<f64> = r.unit_vector(m).into_iter().map(f64::abs).collect();
        let u = build_ubar(&x, &b, 1e-10).unwrap();
        for i in 0..m {
            prop_assert!((dot(&u.u, x.row(i)) - u.dist * b[i]).abs() <= 1e-9 * u.dist * m as f64);
        }
    }

    #[test]
    fn schedule_monotone(c_f in 0.01f64..1.0, c_h in 0.01f64..1.0, k in 1u32..5, l in 1usize..8) {
        let s = Schedule { c_f, c_h, ..Schedule::default() };
        prop_assert!(s.f(k, l) < s.f(k, l - 1));
        prop_assert!(s.h(k, l) > s.h(k, l - 1));
        prop_assert!(s.f(k + 1, 0) < s.f(k, l));
        prop_assert!(s.f(k, l) > c_f);
    }
}
