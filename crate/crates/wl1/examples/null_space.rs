//! Weighted null-space condition for a random matrix, with a violation witness.
//!
//! `cargo run --release --example null_space`

use nalgebra::DMatrix;
use rand_distr::{Distribution, StandardNormal};
use wl1::geometry::null_space_condition_check;
use wl1::sampling::stream;

fn main() {
    let (m, n) = (8, 12);
    let mut rng = stream(3, &[]);
    let a = DMatrix::from_fn(m, n, |_, _| StandardNormal.sample(&mut rng));
    for k in [vec![0], vec![0, 5], vec![0, 5, 9], vec![0, 3, 5, 9]] {
        for w_off in [1.0, 2.0] {
            let w: Vec<f64> = (0..n).map(|i| if k.contains(&i) { 1.0 } else { w_off }).collect();
            let r = null_space_condition_check(&a, &k, &w, 0, 0).unwrap();
            println!("K = {k:?}, off-support weight {w_off}: {:?} (min ratio {:.4}, {} patterns)", r.verdict, r.min_ratio, r.patterns.len());
        }
    }
}
