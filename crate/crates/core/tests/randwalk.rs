use hullwalk::numkit::dot;
use hullwalk::randwalk::*;
use proptest::prelude::*;

fn within_3sigma(samples: &[f64], target: f64) -> bool {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean - target).abs() <= 3.0 * (var / n).sqrt()
}

#[test]
fn grid_examples() {
    assert_eq!(grid_uniform(4).unwrap().times(), &[0.25, 0.5, 0.75, 1.0]);
    assert_eq!(grid_geometric(1.0, 2.0, 3).unwrap().times(), &[1.0, 2.0, 4.0]);
    assert_eq!(grid_geometric(0.5, 4.0, 2).unwrap().times(), &[0.5, 2.0]);
    let g = grid_geometric(1.0, 3.0, 20).unwrap();
    for w in g.times().windows(2) {
        assert_eq!(w[1] / w[0], 3.0);
    }
}

#[test]
fn poisson_counts() {
    let root = RngStream::new(1, 0);
    let counts: Vec<f64> = (0..10_000)
        .map(|i| grid_poisson(1000.0, &mut root.child(i)).unwrap().len() as f64)
        .collect();
    assert!(within_3sigma(&counts, 1000.0));
    let empty = (0..10_000)
        .filter(|&i| grid_poisson(0.001, &mut root.child(i)).unwrap().is_empty())
        .count() as f64
        / 10_000.0;
    let p = (-0.001f64).exp();
    assert!((empty - p).abs() <= 3.0 * (p * (1.0 - p) / 10_000.0).sqrt() + 1e-4);
}

#[test]
fn bm_covariance_is_min() {
    let grid = grid_uniform(4).unwrap();
    let root = RngStream::new(2, 0);
    let prods: Vec<(f64, f64)> = (0..100_000)
        .map(|i| {
            let p = simulate_bm(&grid, 1, &mut root.child(i)).unwrap();
            (p.point(0)[0] * p.point(2)[0], p.point(3)[0] * p.point(3)[0])
        })
        .collect();
    let a: Vec<f64> = prods.iter().map(|p| p.0).collect();
    let b: Vec<f64> = prods.iter().map(|p| p.1).collect();
    assert!(within_3sigma(&a, 0.25));
    assert!(within_3sigma(&b, 1.0));
}

#[test]
fn bm_increments_uncorrelated() {
    let grid = grid_uniform(3).unwrap();
    let root = RngStream::new(12, 0);
    let prods: Vec<f64> = (0..50_000)
        .map(|i| {
            let p = simulate_bm(&grid, 1, &mut root.child(i)).unwrap();
            p.point(0)[0] * (p.point(2)[0] - p.point(1)[0])
        })
        .collect();
    assert!(within_3sigma(&prods, 0.0));
}

#[test]
fn single_point_norm_is_chi_square() {
    let grid = TimeGrid::new(vec![1.0]).unwrap();
    let root = RngStream::new(3, 0);
    let sq: Vec<f64> = (0..20_000)
        .map(|i| {
            let p = simulate_bm(&grid, 7, &mut root.child(i)).unwrap();
            dot(p.point(0), p.point(0))
        })
        .collect();
    assert!(within_3sigma(&sq, 7.0));
}

#[test]
fn same_seed_same_path() {
    let grid = grid_geometric(1.0, 2.0, 30).unwrap();
    let a = simulate_bm(&grid, 5, &mut RngStream::new(9, 4)).unwrap();
    let b = simulate_bm(&grid, 5, &mut RngStream::new(9, 4)).unwrap();
    assert_eq!(a.points.data(), b.points.data());
    let c = simulate_sphere_walk(0.7, 50, 6, &mut RngStream::new(9, 4)).unwrap();
    let d = simulate_sphere_walk(0.7, 50, 6, &mut RngStream::new(9, 4)).unwrap();
    assert_eq!(c.points.data(), d.points.data());
}

#[test]
fn generator_output_is_pinned() {
    let mut r = RngStream::new(0, 0);
    let first: Vec<u64> = (0..3).map(|_| r.next_u64()).collect();
    let mut again = RngStream::new(0, 0);
    assert_eq!(first, (0..3).map(|_| again.next_u64()).collect::<Vec<_>>());
    let mut other = RngStream::new(0, 1);
    assert_ne!(first[0], other.next_u64());
    let g = RngStream::new(42, 0).gaussian();
    assert_eq!(g.to_bits(), GOLDEN_GAUSSIAN);
}

/// First standard normal of stream (42, 0); fixes the generator and the
/// Box–Muller transform across builds.
const GOLDEN_GAUSSIAN: u64 = 4609557986117921673;

#[test]
fn zn_single_step() {
    let root = RngStream::new(4, 0);
    let plus = (0..10_000)
        .filter(|&i| simulate_zn(1, &[1], 1, &mut root.child(i)).unwrap().point(0)[0] == 1.0)
        .count() as f64;
    assert!((plus / 10_000.0 - 0.5).abs() <= 3.0 * 0.005);
}

#[test]
fn zn_increment_is_isotropic() {
    let (n, m) = (3, 81);
    let root = RngStream::new(5, 0);
    let mut dir = root.child(1 << 40);
    let y = dir.unit_vector(n);
    let scale = (n as f64 / m as f64).sqrt();
    let sq: Vec<f64> = (0..20_000)
        .map(|i| {
            let p = simulate_zn(m, &[m], n, &mut root.child(i)).unwrap();
            (scale * dot(p.point(0), &y)).powi(2)
        })
        .collect();
    assert!(within_3sigma(&sq, 1.0));
}

#[test]
fn sphere_step_concentration() {
    let (n, theta) = (1000, std::f64::consts::FRAC_PI_4);
    let mut rng = RngStream::new(6, 0);
    let u = rng.unit_vector(n);
    let target = (n as f64).sqrt() / theta.tan();
    let ok = (0..1000)
        .filter(|_| {
            let s = sphere_step(&u, theta, &mut rng).unwrap();
            (0.9..=1.1).contains(&(s.alpha / target))
        })
        .count();
    assert!(ok >= 990);
}

#[test]
fn sphere_step_conditional_mean() {
    let (n, theta) = (5, 0.9);
    let mut rng = RngStream::new(7, 0);
    let u = rng.unit_vector(n);
    let draws: Vec<Vec<f64>> = (0..20_000).map(|_| sphere_step(&u, theta, &mut rng).unwrap().v).collect();
    for j in 0..n {
        let xs: Vec<f64> = draws.iter().map(|v| v[j]).collect();
        assert!(within_3sigma(&xs, theta.cos() * u[j]), "coordinate {j}");
    }
}

#[test]
fn sphere_walk_moments() {
    let (n, theta) = (50, 0.8);
    let root = RngStream::new(8, 0);
    let walks: Vec<WalkPath> = (0..10_000)
        .map(|i| simulate_sphere_walk(theta, 3, n, &mut root.child(i)).unwrap())
        .collect();
    let first: Vec<f64> = walks.iter().map(|w| w.point(0)[0]).collect();
    assert!(within_3sigma(&first, 0.0));
    let corr: Vec<f64> = walks.iter().map(|w| dot(w.point(0), w.point(2))).collect();
    assert!(within_3sigma(&corr, theta.cos().powi(2)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sphere_walk_keeps_angle(seed in any::<u64>(), n in 2usize..30, theta in 0.05f64..1.5) {
        let w = simulate_sphere_walk(theta, 40, n, &mut RngStream::new(seed, 0)).unwrap();
        w.validate().unwrap();
        for i in 1..w.len() {
            prop_assert!((dot(w.point(i - 1), w.point(i)) - theta.cos()).abs() <= 1e-10);
        }
    }

    #[test]
    fn zn_parity(seed in any::<u64>(), n in 1usize..6, steps in 1usize..200) {
        let w = simulate_zn(steps, &[steps], n, &mut RngStream::new(seed, 0)).unwrap();
        w.validate().unwrap();
        let l1: f64 = w.point(0).iter().map(|x| x.abs()).sum();
        prop_assert_eq!(l1 as usize % 2, steps % 2);
    }

    #[test]
    fn poisson_grid_increasing(seed in any::<u64>(), intensity in 0.1f64..500.0) {
        let g = grid_poisson(intensity, &mut RngStream::new(seed, 0)).unwrap();
        for w in g.times().windows(2) {
            prop_assert!(w[0] < w[1]);
        }
        prop_assert!(g.times().iter().all(|&t| t > 0.0 && t <= 1.0));
    }
}
