//! Robustness constant and the error bound on one compressible signal.
//!
//! `cargo run --release --example robustness`

use nalgebra::DVector;
use rand_distr::{Distribution, StandardNormal};
use wl1::recovery::{sample_instance, solve_weighted_l1, ClassLayout, DEFAULT_LP_TOL};
use wl1::sampling::{stream, Amplitude};
use wl1::thresholds::{robustness_check, robustness_constant};

fn main() {
    for (e1, e2, p1, p2) in [(0.0, 0.0, 0.4, 0.05), (0.5, 0.5, 0.5, 0.5), (0.1, 0.2, 0.4, 0.05)] {
        let c = robustness_constant(e1, e2, p1, p2).unwrap();
        println!("eps = ({e1}, {e2}), p = ({p1}, {p2}): mu = {:.6}, C = {:.6}", c.mu, c.value);
    }

    let layout = ClassLayout::new(vec![30, 30], vec![4, 2]).unwrap();
    let mut rng = stream(1, &[]);
    let mut inst = sample_instance(&layout, 48, Amplitude::Gaussian, &[1.0, 2.0], &mut rng);
    let noise: DVector<f64> = DVector::from_fn(60, |_, _| 0.01 * <StandardNormal as Distribution<f64>>::sample(&StandardNormal, &mut rng));
    inst.x0 += noise;
    let y = &inst.a * &inst.x0;
    let x_hat = solve_weighted_l1(&inst.a, &y, &inst.weights(), DEFAULT_LP_TOL).unwrap().x;
    let c = robustness_constant(0.5, 0.5, 4.0 / 30.0, 2.0 / 30.0).unwrap().value;
    let r = robustness_check(inst.x0.as_slice(), x_hat.as_slice(), &layout.class_of(), 2.0, [2, 1], c, 1e-9);
    println!("compressible signal: weighted error {:.4e} ≤ C·tail {:.4e}: {}", r.lhs, r.rhs, r.holds);
}
