use hullwalk::conelab::*;
use hullwalk::numkit::{
    condition_number, contains_origin, dot, operator_norm, DenseMatrix, RealVector, CERTIFICATE_TOL,
    CONDITION_TOL,
};
use hullwalk::oracles::{normal_cdf, zn_third_moment_exact};
use hullwalk::randwalk::{grid_geometric, simulate_bm, simulate_zn, RngStream, TimeGrid};
use proptest::prelude::*;
use rayon::prelude::*;

#[test]
fn prefix_matrix_small_grid() {
    let f = build_prefix_matrix_bm(&TimeGrid::new(vec![1.0, 2.0, 4.0]).unwrap()).unwrap();
    let m = f.matrix();
    let r = 0.5f64.sqrt();
    assert!((m.get(2, 0) - r).abs() < 1e-15 && (m.get(2, 1) - r).abs() < 1e-15);
    assert_eq!(m.get(1, 0), 1.0);
    assert_eq!(m.get(0, 1), 0.0);
    let one = build_prefix_matrix_bm(&TimeGrid::new(vec![1.0]).unwrap()).unwrap();
    assert_eq!(one.matrix().data(), &[1.0]);
}

#[test]
fn prefix_identity_reproduces_positions() {
    let grid = grid_geometric(1.0, 4.0, 15).unwrap();
    let path = simulate_bm(&grid, 4, &mut RngStream::new(1, 0)).unwrap();
    let f = build_prefix_matrix_bm(&grid).unwrap();
    let a = scaled_increments(&path);
    let fa = f.matrix().matmul(&a).unwrap();
    let mut prev = 0.0;
    for (i, &t) in grid.times().iter().enumerate() {
        let delta = (t - prev).sqrt();
        prev = t;
        for k in 0..4 {
            let want = path.point(i)[k] / delta;
            assert!((fa.get(i, k) - want).abs() <= 1e-12 * want.abs().max(1.0));
        }
    }
}

#[test]
fn hull_of_path_equals_hull_of_fa_rows() {
    for seed in 0..50 {
        let grid = grid_geometric(1.0, 2.0, 12).unwrap();
        let path = simulate_bm(&grid, 3, &mut RngStream::new(seed, 0)).unwrap();
        let fa = build_prefix_matrix_bm(&grid).unwrap().matrix().matmul(&scaled_increments(&path)).unwrap();
        let a = contains_origin(&path.points, CERTIFICATE_TOL).unwrap().is_inside();
        let b = contains_origin(&fa, CERTIFICATE_TOL).unwrap().is_inside();
        assert_eq!(a, b, "seed {seed}");
    }
}

#[test]
fn zn_prefix_reproduces_scaled_positions() {
    let (n, checkpoints) = (3, vec![5usize, 20, 80, 320]);
    let path = simulate_zn(320, &checkpoints, n, &mut RngStream::new(2, 0)).unwrap();
    let f = build_prefix_matrix_zn(&checkpoints).unwrap();
    let fa = f.matrix().matmul(&scaled_increments(&path)).unwrap();
    let mut prev = 0usize;
    for (i, &t) in checkpoints.iter().enumerate() {
        let lhs: Vec<f64> = fa.row(i).iter().map(|x| x * (n as f64).sqrt()).collect();
        let scale = (n as f64 / (t - prev) as f64).sqrt();
        prev = t;
        for k in 0..n {
            assert!((lhs[k] - scale * path.point(i)[k]).abs() < 1e-12 * (1.0 + lhs[k].abs()));
        }
    }
}

#[test]
fn zn_prefix_is_close_to_identity() {
    for eta in [0.8, 0.5, 0.3, 0.2] {
        let r = (4.0 / (eta * eta) + 1.0f64).ceil() as usize;
        let mut checkpoints = vec![1usize];
        while checkpoints.len() < 12 && checkpoints.last().unwrap().checked_mul(r).is_some() {
            let next = checkpoints.last().unwrap() * r;
            checkpoints.push(next);
        }
        let f = build_prefix_matrix_zn(&checkpoints).unwrap();
        let diff = f.matrix().sub(&DenseMatrix::identity(checkpoints.len())).unwrap();
        let bound = (eta / 2.0) / (1.0 - eta / 2.0);
        assert!(operator_norm(&diff, CONDITION_TOL).unwrap() <= bound, "eta {eta}");
    }
}

#[test]
fn bm_prefix_condition_bound() {
    let k = 4.0f64;
    let c_k = 1.0 + (k - 1.0).powf(-0.5) / (1.0 - k.powf(-0.5));
    let bound = c_k * (1.0 + (k - 1.0).powf(-0.5));
    assert!(bound <= 3.399);
    for n in [1, 2, 5, 20, 50, 200] {
        let f = build_prefix_matrix_bm(&grid_geometric(1.0, k, n).unwrap()).unwrap();
        assert!(condition_number(f.matrix(), CONDITION_TOL).unwrap() <= bound);
    }
}

#[test]
fn sphere_prefix_bounds() {
    for theta in [0.3, 0.7, std::f64::consts::FRAC_PI_3, 1.3] {
        for (size, n) in [(5, 2), (20, 10), (50, 10), (80, 30)] {
            let f = build_ftilde_sphere(theta, size, n).unwrap();
            let m = f.matrix();
            let (s, c) = f64::sin_cos(theta);
            let rn = (n as f64).sqrt();
            for i in 0..size {
                assert_eq!(m.get(i, 0), c.powi(i as i32) / rn);
            }
            let norm = operator_norm(m, CONDITION_TOL).unwrap();
            assert!(norm >= s / rn * (1.0 - 1e-9) && norm <= 1.0 / ((1.0 - c) * rn) * (1.0 + 1e-9));
            let kappa = condition_number(m, CONDITION_TOL).unwrap();
            assert!(kappa <= (1.0 + c) / (s * (1.0 - c)) * (1.0 + 1e-9), "θ={theta} N={size}");
        }
    }
}

#[test]
fn escape_examples() {
    let mut rows = Vec::new();
    for i in 0..4 {
        rows.push(RealVector::basis(4, i));
        rows.push(RealVector::basis(4, i).scaled(-1.0));
    }
    assert!(!escape_event(&DenseMatrix::from_rows(&rows, 4).unwrap(), CERTIFICATE_TOL).unwrap().escapes);
    let e = escape_event(&DenseMatrix::identity(3), CERTIFICATE_TOL).unwrap();
    assert!(e.escapes);
    let d = e.verdict.direction().unwrap();
    for x in d.as_slice() {
        assert!((x - 1.0 / 3f64.sqrt()).abs() < 1e-12);
    }
}

fn random_search_escapes(rows: &DenseMatrix, tries: usize, seed: u64) -> bool {
    (0..tries).into_par_iter().any(|i| {
        let y = RngStream::new(seed, i as u64).unit_vector(rows.cols());
        rows.row_iter().all(|r| dot(r, &y) >= 0.0)
    })
}

#[test]
fn random_search_witness_implies_escape() {
    for (rows, tries) in [(40, 1_000_000), (10, 100_000)] {
        let mut found = 0;
        for seed in 0..100 {
            let mut r = RngStream::new(seed, 7);
            let m = DenseMatrix::new(rows, 5, r.gaussian_vec(rows * 5)).unwrap();
            if random_search_escapes(&m, tries, seed) {
                found += 1;
                assert!(escape_event(&m, CERTIFICATE_TOL).unwrap().escapes, "seed {seed}");
            }
        }
        if rows == 10 {
            assert!(found > 0);
        }
    }
}

#[test]
fn gaussian_rows_have_property_p() {
    let p = normal_cdf(-1.0);
    let est = estimate_property_p(|r| r.gaussian_vec(3), 1.0, 3, 10, 20_000, &RngStream::new(3, 0)).unwrap();
    assert_eq!(est.frequencies.len(), 16);
    let se = (p * (1.0 - p) / 20_000.0).sqrt();
    for f in &est.frequencies {
        assert!((f - p).abs() <= 3.0 * se, "{f} vs {p}");
    }
}

#[test]
fn lattice_increment_has_property_p() {
    let (n, m) = (6, 1296);
    let scale = (n as f64 / m as f64).sqrt();
    let sampler = |r: &mut RngStream| -> Vec<f64> {
        let p = simulate_zn(m, &[m], n, r).unwrap();
        p.point(0).iter().map(|x| x * scale).collect()
    };
    let est = estimate_property_p(sampler, 0.5, n, 20, 4000, &RngStream::new(4, 0)).unwrap();
    assert!(est.delta_hat >= 0.2, "{}", est.delta_hat);
}

#[test]
fn deterministic_row_has_no_negative_mass() {
    let est = estimate_property_p(|_| vec![1.0, 0.0, 0.0], 0.5, 3, 5, 100, &RngStream::new(0, 0)).unwrap();
    assert_eq!(est.delta_hat, 0.0);
    assert_eq!(est.worst_direction.as_slice(), &[1.0, 0.0, 0.0]);
}

#[test]
fn lattice_moment_matches_enumeration() {
    let est = zn_moment_check(2, 16, 40_000, 0, &RngStream::new(5, 0)).unwrap();
    let exact = zn_third_moment_exact(2, 16, &[1.0, 0.0]);
    let var_bound = zn_third_moment_exact(2, 16, &[1.0, 0.0]).powi(2) * 10.0;
    let se = (var_bound / 40_000.0).sqrt();
    assert!((est.moments[0] - exact).abs() <= 3.0 * se, "{} vs {exact}", est.moments[0]);
    // by exchangeability e₂ has the same law
    assert!((est.moments[1] - exact).abs() <= 3.0 * se);
}

#[test]
fn lattice_moment_bound() {
    let est = zn_moment_check(4, 256, 10_000, 50, &RngStream::new(6, 0)).unwrap();
    assert!(est.max_moment <= 100.0);
}

#[test]
fn gordon_bound_values() {
    let got = gordon_escape_bound(329, 5, 0.0).unwrap();
    let gap: f64 = 324.0 / 325f64.sqrt();
    assert!((got - (1.0 - 3.5 * (-gap * gap / 18.0).exp())).abs() < 1e-15);
    assert!(matches!(gordon_escape_bound(329, 5, 18.0), Err(hullwalk::Error::InvalidRegime(_))));
    assert_eq!(gordon_escape_bound(329, 5, 17.999).unwrap(), 0.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn gordon_is_monotone(k in 2usize..400, a in 0.0f64..1.0, b in 0.0f64..1.0) {
        let lim = (k as f64).sqrt();
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let x = gordon_escape_bound(k + 3, 3, lo * lim * 0.999).unwrap();
        let y = gordon_escape_bound(k + 3, 3, hi * lim * 0.999).unwrap();
        prop_assert!(y <= x);
    }

    #[test]
    fn escape_is_not_inside(seed in any::<u64>(), rows in 1usize..20, n in 1usize..5) {
        let mut r = RngStream::new(seed, 0);
        let m = DenseMatrix::new(rows, n, r.gaussian_vec(rows * n)).unwrap();
        let e = escape_event(&m, CERTIFICATE_TOL).unwrap();
        prop_assert_eq!(e.escapes, !contains_origin(&m, CERTIFICATE_TOL).unwrap().is_inside());
    }
}
