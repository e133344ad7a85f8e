//! The simplex solver against brute-force vertex enumeration.

use itertools::Itertools;
use nalgebra::{DMatrix, DVector};
use rand_distr::{Distribution, StandardNormal, Uniform};

use wl1::lp::{solve, LpOptions, LpProblem, LpStatus};
use wl1::recovery::{solve_weighted_l1, DEFAULT_LP_TOL};
use wl1::sampling::stream;

fn gaussian(m: usize, n: usize, seed: u64) -> DMatrix<f64> {
    let mut rng = stream(seed, &[]);
    DMatrix::from_fn(m, n, |_, _| StandardNormal.sample(&mut rng))
}

/// Minimum of `c·x` over the basic feasible solutions of `Ax = b, x ≥ 0`.
fn vertex_minimum(a: &DMatrix<f64>, b: &DVector<f64>, c: &DVector<f64>) -> Option<f64> {
    let (m, n) = a.shape();
    (0..n)
        .combinations(m)
        .filter_map(|cols| {
            let sub = DMatrix::from_fn(m, m, |i, j| a[(i, cols[j])]);
            let xb = sub.lu().solve(b)?;
            if xb.iter().any(|&v| v < -1e-9) {
                return None;
            }
            Some(cols.iter().zip(xb.iter()).map(|(&j, &v)| c[j] * v).sum::<f64>())
        })
        .min_by(f64::total_cmp)
}

#[test]
fn random_standard_form_lps_match_vertex_enumeration() {
    for seed in 0..40u64 {
        let (m, n) = (4, 9);
        let mut rng = stream(1000 + seed, &[]);
        let u = Uniform::new(0.0, 1.0).unwrap();
        let a = gaussian(m, n, seed);
        // b = A·x_feasible keeps the problem feasible; nonnegative costs keep it bounded.
        let x_feas = DVector::from_fn(n, |_, _| u.sample(&mut rng));
        let b = &a * x_feas;
        let c = DVector::from_fn(n, |_, _| u.sample(&mut rng));
        let problem = LpProblem::new(a.clone(), b.clone(), c.clone()).unwrap();
        let sol = solve(&problem, &LpOptions::default()).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal, "seed {seed}");
        assert!(sol.is_certified(&problem, 1e-8), "seed {seed}: {:?}", sol.certificate);
        let best = vertex_minimum(&a, &b, &c).expect("feasible");
        assert!((sol.objective - best).abs() <= 1e-8 * (1.0 + best.abs()), "seed {seed}: {} vs {best}", sol.objective);
    }
}

/// `min Σ w|x|` s.t. `Ax = y` is attained on a support of size at most `m`.
fn weighted_l1_by_enumeration(a: &DMatrix<f64>, y: &DVector<f64>, w: &[f64]) -> f64 {
    let (m, n) = a.shape();
    (0..n)
        .combinations(m)
        .filter_map(|cols| {
            let sub = DMatrix::from_fn(m, m, |i, j| a[(i, cols[j])]);
            let xs = sub.lu().solve(y)?;
            Some(cols.iter().zip(xs.iter()).map(|(&j, &v)| w[j] * v.abs()).sum::<f64>())
        })
        .min_by(f64::total_cmp)
        .unwrap()
}

#[test]
fn weighted_l1_matches_enumeration_at_n14_m9() {
    let (m, n) = (9, 14);
    for seed in 0..6u64 {
        let a = gaussian(m, n, 50 + seed);
        let mut rng = stream(60 + seed, &[]);
        let y = DVector::from_fn(m, |_, _| StandardNormal.sample(&mut rng));
        let w: Vec<f64> = (0..n).map(|j| if j % 3 == 0 { 2.5 } else { 1.0 }).collect();
        let sol = solve_weighted_l1(&a, &y, &w, DEFAULT_LP_TOL).unwrap();
        let oracle = weighted_l1_by_enumeration(&a, &y, &w);
        assert!((sol.objective - oracle).abs() <= 1e-8 * oracle, "seed {seed}: {} vs {oracle}", sol.objective);
        assert!((&a * &sol.x - &y).amax() <= 1e-9 * (1.0 + y.amax()));
    }
}

#[test]
fn common_weight_scaling_leaves_the_minimizer_unchanged() {
    let (m, n) = (12, 30);
    let a = gaussian(m, n, 7);
    let mut x0 = DVector::zeros(n);
    x0[3] = 1.5;
    x0[17] = -0.7;
    x0[25] = 2.0;
    let y = &a * &x0;
    let w: Vec<f64> = (0..n).map(|j| 1.0 + (j % 4) as f64 * 0.5).collect();
    let base = solve_weighted_l1(&a, &y, &w, DEFAULT_LP_TOL).unwrap();
    for scale in [1e-3, 0.5, 7.0, 1e3] {
        let ws: Vec<f64> = w.iter().map(|v| v * scale).collect();
        let s = solve_weighted_l1(&a, &y, &ws, DEFAULT_LP_TOL).unwrap();
        assert!((&s.x - &base.x).amax() <= 1e-9, "scale {scale}");
        assert!((s.objective - scale * base.objective).abs() <= 1e-9 * scale * base.objective);
    }
}

#[test]
fn degenerate_duplicate_columns_are_handled() {
    // Duplicated and zero columns produce ties in both pricing and the ratio test.
    let a = DMatrix::from_row_slice(2, 5, &[1.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 1.0, 0.0]);
    let b = DVector::from_vec(vec![1.0, 1.0]);
    let c = DVector::from_vec(vec![1.0, 1.0, 1.0, 1.5, 0.0]);
    let p = LpProblem::new(a, b, c).unwrap();
    let s = solve(&p, &LpOptions::default()).unwrap();
    assert_eq!(s.status, LpStatus::Optimal);
    assert!((s.objective - 1.5).abs() < 1e-12);
    assert!(s.is_certified(&p, 1e-9));
}
