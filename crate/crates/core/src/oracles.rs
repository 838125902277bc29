//! Slow, independent reference computations for the test suites.
//!
//! Nothing here shares code with the solvers it checks.

use statrs::function::gamma::ln_gamma;

use crate::numkit::DenseMatrix;

/// Phase-one simplex (Bland's rule, dense tableau) deciding whether
/// `Σλᵢxᵢ = 0, Σλᵢ = 1, λ ≥ 0` is feasible. Points are rescaled to unit
/// max norm first.
pub fn lp_contains_origin(points: &DenseMatrix) -> bool {
    let (m, n) = (points.rows(), points.cols());
    if m == 0 {
        return false;
    }
    let scale = points
        .row_iter()
        .map(|r| r.iter().map(|x| x * x).sum::<f64>().sqrt())
        .fold(0.0, f64::max);
    if scale == 0.0 {
        return true;
    }
    let rows = n + 1;
    let cols = m + rows;
    // tableau: rows × (cols + 1), last column is the right-hand side
    let width = cols + 1;
    let mut t = vec![0.0; rows * width];
    for i in 0..n {
        for j in 0..m {
            t[i * width + j] = points.get(j, i) / scale;
        }
    }
    for j in 0..m {
        t[n * width + j] = 1.0;
    }
    t[n * width + cols] = 1.0;
    for i in 0..rows {
        t[i * width + m + i] = 1.0;
    }
    let mut basis: Vec<usize> = (m..cols).collect();
    // reduced costs of the phase-one objective Σ artificials
    let mut cost = vec![0.0; width];
    for i in 0..rows {
        for j in 0..width {
            cost[j] -= t[i * width + j];
        }
    }
    for i in 0..rows {
        cost[m + i] = 0.0;
    }
    const EPS: f64 = 1e-11;
    for _ in 0..10_000 {
        let Some(enter) = (0..cols).find(|&j| cost[j] < -EPS) else {
            break;
        };
        let mut leave: Option<(usize, f64)> = None;
        for i in 0..rows {
            let a = t[i * width + enter];
            if a > EPS {
                let ratio = t[i * width + cols] / a;
                let better = match leave {
                    None => true,
                    Some((li, lr)) => ratio < lr - 1e-14 || (ratio <= lr + 1e-14 && basis[i] < basis[li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((r, _)) = leave else {
            break;
        };
        let piv = t[r * width + enter];
        for j in 0..width {
            t[r * width + j] /= piv;
        }
        for i in 0..rows {
            if i != r {
                let f = t[i * width + enter];
                if f != 0.0 {
                    for j in 0..width {
                        t[i * width + j] -= f * t[r * width + j];
                    }
                }
            }
        }
        let f = cost[enter];
        for j in 0..width {
            cost[j] -= f * t[r * width + j];
        }
        basis[r] = enter;
    }
    -cost[cols] <= 1e-9
}

fn sq_norm_combination(points: &DenseMatrix, lambda: &[f64]) -> f64 {
    let mut p = vec![0.0; points.cols()];
    for (j, &l) in lambda.iter().enumerate() {
        for (pk, x) in p.iter_mut().zip(points.row(j)) {
            *pk += l * x;
        }
    }
    p.iter().map(|x| x * x).sum()
}

/// `min ‖Σλᵢxᵢ‖` over the simplex by a pairwise mass-transfer search on a
/// grid whose step halves down to `1e−12`.
pub fn simplex_search_min_norm(points: &DenseMatrix) -> f64 {
    let m = points.rows();
    let mut lambda = vec![1.0 / m as f64; m];
    let mut best = sq_norm_combination(points, &lambda);
    let mut step = 0.5f64;
    while step > 1e-12 {
        let mut improved = false;
        for i in 0..m {
            for j in 0..m {
                if i == j || lambda[i] <= 0.0 {
                    continue;
                }
                let d = step.min(lambda[i]);
                lambda[i] -= d;
                lambda[j] += d;
                let v = sq_norm_combination(points, &lambda);
                if v < best {
                    best = v;
                    improved = true;
                } else {
                    lambda[i] += d;
                    lambda[j] -= d;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    best.sqrt()
}

/// Gauss–Jordan solve of a small dense system; `None` when singular.
fn solve_dense(mut a: Vec<f64>, mut b: Vec<f64>, n: usize) -> Option<Vec<f64>> {
    for c in 0..n {
        let p = (c..n).max_by(|&x, &y| a[x * n + c].abs().total_cmp(&a[y * n + c].abs()))?;
        if a[p * n + c].abs() < 1e-13 {
            return None;
        }
        for j in 0..n {
            a.swap(c * n + j, p * n + j);
        }
        b.swap(c, p);
        for r in 0..n {
            if r != c {
                let f = a[r * n + c] / a[c * n + c];
                for j in 0..n {
                    a[r * n + j] -= f * a[c * n + j];
                }
                b[r] -= f * b[c];
            }
        }
    }
    Some((0..n).map(|i| b[i] / a[i * n + i]).collect())
}

/// `argmin_{z ≥ 0} ‖Mz − y‖` by enumerating every support set and solving
/// the normal equations on it. Exponential in the column count.
pub fn nnls_enumerate(m: &DenseMatrix, y: &[f64]) -> Vec<f64> {
    let k = m.cols();
    assert!(k <= 16, "enumeration is limited to 16 columns");
    let residual = |z: &[f64]| -> f64 {
        let r = m.matvec(z);
        r.iter().zip(y).map(|(a, b)| (a - b).powi(2)).sum()
    };
    let mut best = vec![0.0; k];
    let mut best_r = residual(&best);
    for mask in 1u32..(1 << k) {
        let cols: Vec<usize> = (0..k).filter(|&j| mask >> j & 1 == 1).collect();
        let s = cols.len();
        let mut g = vec![0.0; s * s];
        let mut rhs = vec![0.0; s];
        for (a, &ca) in cols.iter().enumerate() {
            for (b, &cb) in cols.iter().enumerate() {
                g[a * s + b] = (0..m.rows()).map(|i| m.get(i, ca) * m.get(i, cb)).sum();
            }
            rhs[a] = (0..m.rows()).map(|i| m.get(i, ca) * y[i]).sum();
        }
        let Some(sol) = solve_dense(g, rhs, s) else {
            continue;
        };
        if sol.iter().any(|&v| v < 0.0) {
            continue;
        }
        let mut z = vec![0.0; k];
        for (&c, v) in cols.iter().zip(sol) {
            z[c] = v;
        }
        let r = residual(&z);
        if r < best_r {
            best_r = r;
            best = z;
        }
    }
    best
}

/// `Φ(x)` by composite Simpson integration of the density over `[−12, x]`.
pub fn normal_cdf(x: f64) -> f64 {
    let lo = -12.0;
    if x <= lo {
        return 0.0;
    }
    let steps = 20_000;
    let h = (x - lo) / steps as f64;
    let phi = |t: f64| (-0.5 * t * t).exp() / (2.0 * std::f64::consts::PI).sqrt();
    let mut s = phi(lo) + phi(x);
    for i in 1..steps {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * phi(lo + i as f64 * h);
    }
    s * h / 3.0
}

/// Exact `E|⟨√(n/m)·W(m), y⟩|³` for the nearest-neighbour walk on ℤⁿ, by
/// dynamic programming over the law of `W(m)`.
pub fn zn_third_moment_exact(n: usize, m: usize, y: &[f64]) -> f64 {
    assert_eq!(y.len(), n);
    let side = 2 * m + 1;
    let states = side.pow(n as u32);
    assert!(states <= 1 << 24, "state space too large");
    let mut law = vec![0.0f64; states];
    let origin: usize = (0..n).map(|j| m * side.pow(j as u32)).sum();
    law[origin] = 1.0;
    let p = 1.0 / (2 * n) as f64;
    for _ in 0..m {
        let mut next = vec![0.0; states];
        for (s, &w) in law.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            for j in 0..n {
                let stride = side.pow(j as u32);
                next[s + stride] += w * p;
                next[s - stride] += w * p;
            }
        }
        law = next;
    }
    let scale = (n as f64 / m as f64).sqrt();
    law.iter()
        .enumerate()
        .filter(|(_, &w)| w > 0.0)
        .map(|(s, &w)| {
            let mut rest = s;
            let mut inner = 0.0;
            for yj in y {
                let c = (rest % side) as f64 - m as f64;
                rest /= side;
                inner += c * yj;
            }
            w * (scale * inner).abs().powi(3)
        })
        .sum()
}

/// Distance-minimizing point of `{Az : z ≥ 0}` to `y`: best of many random
/// rays with optimal radius, then a coordinate pattern search over `z ≥ 0`.
pub fn cone_projection_search(a: &DenseMatrix, y: &[f64], rays: usize, seed: u64) -> Vec<f64> {
    let k = a.cols();
    let dist = |z: &[f64]| -> f64 {
        let r = a.matvec(z);
        r.iter().zip(y).map(|(u, v)| (u - v).powi(2)).sum()
    };
    let mut state = seed;
    let mut next = move || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((state >> 11) as f64 + 0.5) / (1u64 << 53) as f64
    };
    let mut best = vec![0.0; k];
    let mut best_d = dist(&best);
    for r in 0..rays {
        // coordinate rays first, then random directions of the orthant
        let z: Vec<f64> = if r < k {
            (0..k).map(|j| if j == r { 1.0 } else { 0.0 }).collect()
        } else {
            (0..k).map(|_| -next().ln()).collect()
        };
        let d = a.matvec(&z);
        let dd: f64 = d.iter().map(|x| x * x).sum();
        let t = (d.iter().zip(y).map(|(u, v)| u * v).sum::<f64>() / dd).max(0.0);
        let cand: Vec<f64> = z.iter().map(|x| x * t).collect();
        let v = dist(&cand);
        if v < best_d {
            best_d = v;
            best = cand;
        }
    }
    let mut step = best.iter().fold(1.0f64, |m, &x| m.max(x));
    while step > 1e-13 {
        let mut improved = false;
        for j in 0..k {
            for sign in [1.0, -1.0] {
                let old = best[j];
                best[j] = (old + sign * step).max(0.0);
                let v = dist(&best);
                if v < best_d {
                    best_d = v;
                    improved = true;
                } else {
                    best[j] = old;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    a.matvec(&best)
}

/// `E‖g₊‖` for `g ~ N(0, I_N)`: a binomial mixture of chi means,
/// `Σ_k C(N,k)2^{−N}·√2·Γ((k+1)/2)/Γ(k/2)`. This is the Gaussian width of
/// `ℝ₊ᴺ ∩ B₂ᴺ`.
pub fn orthant_width_exact(n: usize) -> f64 {
    let ln_choose = |k: usize| ln_gamma(n as f64 + 1.0) - ln_gamma(k as f64 + 1.0) - ln_gamma((n - k) as f64 + 1.0);
    (1..=n)
        .map(|k| {
            let chi = std::f64::consts::SQRT_2 * (ln_gamma((k as f64 + 1.0) / 2.0) - ln_gamma(k as f64 / 2.0)).exp();
            (ln_choose(k) - n as f64 * std::f64::consts::LN_2).exp() * chi
        })
        .sum()
}

/// Wendel's formula: probability that `N` points with a symmetric,
/// absolutely continuous law in `ℝⁿ` have the origin in their hull,
/// `1 − 2^{1−N} Σ_{k<n} C(N−1, k)`.
pub fn wendel_probability(n: usize, big_n: usize) -> f64 {
    if big_n == 0 {
        return 0.0;
    }
    let mut c = 1.0f64;
    let mut sum = 0.0;
    for k in 0..n.min(big_n) {
        sum += c;
        c = c * (big_n - 1 - k) as f64 / (k + 1) as f64;
    }
    (1.0 - sum * (1.0 - big_n as f64).exp2()).max(0.0)
}
