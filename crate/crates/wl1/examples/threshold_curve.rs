//! Weak threshold δ_c of a two-class model as the class-2 weight varies.
//!
//! `cargo run --release --example threshold_curve`

use wl1::exponents::{SparsityModel, ThresholdKind};
use wl1::thresholds::delta_c;

fn main() {
    println!("omega,delta_c,witness_tau1,witness_tau2");
    for omega in [1.0, 1.5, 2.0, 2.5, 3.0, 4.0, 6.0] {
        let model = SparsityModel::new(&[0.5, 0.5], &[0.4, 0.05], &[1.0, omega]).unwrap();
        let r = delta_c(&model, ThresholdKind::Weak, 60, 1e-6).unwrap();
        println!("{omega},{:.6},{:.4},{:.4}", r.delta_c, r.witness_tau[0], r.witness_tau[1]);
    }
}
