//! Randomized invariants.

use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

use wl1::exponents::{SparsityModel, ThresholdKind};
use wl1::recovery::{read_matrix, solve_weighted_l1, write_matrix, DEFAULT_LP_TOL};
use wl1::report::fmt_f64;
use wl1::sampling::stream;
use wl1::thresholds::{delta_c, threshold_ordering_check, SearchSettings};

fn weak(m: &SparsityModel) -> f64 {
    delta_c(m, ThresholdKind::Weak, 50, 1e-5).unwrap().delta_c
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 6, ..ProptestConfig::default() })]

    #[test]
    fn threshold_is_nondecreasing_in_each_sparsity(p1 in 0.05f64..0.3, p2 in 0.02f64..0.2, bump in 0.01f64..0.05, w in 1.0f64..4.0) {
        let base = weak(&SparsityModel::new(&[0.5, 0.5], &[p1, p2], &[1.0, w]).unwrap());
        let more1 = weak(&SparsityModel::new(&[0.5, 0.5], &[p1 + bump, p2], &[1.0, w]).unwrap());
        let more2 = weak(&SparsityModel::new(&[0.5, 0.5], &[p1, p2 + bump], &[1.0, w]).unwrap());
        prop_assert!(more1 >= base - 2e-5, "{} < {}", more1, base);
        prop_assert!(more2 >= base - 2e-5, "{} < {}", more2, base);
    }

    #[test]
    fn common_weight_scaling_leaves_thresholds_unchanged(p1 in 0.05f64..0.4, p2 in 0.02f64..0.2, w in 0.5f64..4.0, scale in 0.1f64..10.0) {
        let a = weak(&SparsityModel::new(&[0.5, 0.5], &[p1, p2], &[1.0, w]).unwrap());
        let b = weak(&SparsityModel::new(&[0.5, 0.5], &[p1, p2], &[scale, scale * w]).unwrap());
        prop_assert!((a - b).abs() <= 2e-5, "{} vs {}", a, b);
    }

    #[test]
    fn an_empty_class_does_not_change_the_threshold(p in 0.05f64..0.3, w in 0.5f64..5.0) {
        let a = weak(&SparsityModel::new(&[0.0, 1.0], &[0.3, p], &[w, 1.0]).unwrap());
        let b = weak(&SparsityModel::single(p).unwrap());
        prop_assert!((a - b).abs() <= 2e-5, "{} vs {}", a, b);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 3, ..ProptestConfig::default() })]

    #[test]
    fn threshold_kinds_are_ordered(p1 in 0.02f64..0.1, p2 in 0.01f64..0.08, w in 1.0f64..3.0) {
        let m = SparsityModel::new(&[0.5, 0.5], &[p1, p2], &[1.0, w]).unwrap();
        let r = threshold_ordering_check(&m, SearchSettings { grid: 50, tol: 1e-5, scan_points: 3 }).unwrap();
        prop_assert!(r.holds, "{:?}", r);
    }
}

proptest! {
    #[test]
    fn floats_round_trip_through_the_csv_format(x in proptest::num::f64::ANY) {
        let s = fmt_f64(x);
        let back: f64 = s.parse().unwrap();
        prop_assert!(back == x || (x.is_nan() && back.is_nan()));
    }

    #[test]
    fn matrices_round_trip_through_the_text_format(rows in 1usize..6, cols in 1usize..6, seed in any::<u64>()) {
        use rand::Rng;
        let mut rng = stream(seed, &[]);
        let a = DMatrix::from_fn(rows, cols, |_, _| rng.random::<f64>() * 1e3 - 5e2);
        let mut buf = Vec::new();
        write_matrix(&mut buf, &a).unwrap();
        prop_assert_eq!(read_matrix(&buf[..]).unwrap(), a);
    }

    #[test]
    fn sparse_signals_are_recovered_with_many_measurements(seed in any::<u64>(), w2 in 1.0f64..3.0) {
        use rand_distr::{Distribution, StandardNormal};
        let (m, n) = (16, 24);
        let mut rng = stream(seed, &[]);
        let a = DMatrix::from_fn(m, n, |_, _| StandardNormal.sample(&mut rng));
        let mut x0 = DVector::zeros(n);
        x0[2] = 1.0;
        x0[19] = -2.0;
        let y = &a * &x0;
        let w: Vec<f64> = (0..n).map(|j| if j < 12 { 1.0 } else { w2 }).collect();
        let s = solve_weighted_l1(&a, &y, &w, DEFAULT_LP_TOL).unwrap();
        // The objective can never exceed that of the true signal.
        prop_assert!(s.objective <= w[2] * 1.0 + w[19] * 2.0 + 1e-9);
        prop_assert!((&a * &s.x - &y).amax() <= 1e-8);
    }
}
