//! Weight ratio minimizing the weak threshold, plus weak/sectional/strong ordering.
//!
//! `cargo run --release --example optimal_weight`

use wl1::exponents::{SparsityModel, ThresholdKind};
use wl1::thresholds::{optimal_weight, threshold_ordering_check, SearchSettings};

fn main() {
    let model = SparsityModel::new(&[0.5, 0.5], &[0.4, 0.05], &[1.0, 1.0]).unwrap();
    let r = optimal_weight(&model, ThresholdKind::Weak, (0.5, 10.0), 1e-3, SearchSettings::default()).unwrap();
    println!("omega* = {:.4}, delta_c(omega*) = {:.5}, unimodal scan: {}", r.omega_star, r.delta_star, r.unimodal);

    let sparse = SparsityModel::new(&[0.5, 0.5], &[0.05, 0.02], &[1.0, r.omega_star]).unwrap();
    let o = threshold_ordering_check(&sparse, SearchSettings::default()).unwrap();
    println!("p = (0.05, 0.02): weak {:?}, sectional {:?}, strong {:?}, ordered: {}", o.weak, o.sectional, o.strong, o.holds);
}
