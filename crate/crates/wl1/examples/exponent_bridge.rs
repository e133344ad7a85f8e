//! Finite-n Grassmann angles approaching their asymptotic exponents.
//!
//! `cargo run --release --example exponent_bridge`

use wl1::exponents::{psi_tot, SparsityModel, ThresholdKind};
use wl1::geometry::{internal_angle, log_external_angle, FacePair};

fn main() {
    let (gamma, p, w, tau) = ([0.5, 0.5], [0.4, 0.05], [1.0, 2.5], [0.05, 0.1]);
    let model = SparsityModel::new(&gamma, &p, &w).unwrap();
    let e = psi_tot(&model, &tau, ThresholdKind::Weak).unwrap();
    println!("psi_com {:.5}, psi_int {:.5}, psi_ext {:.5}, psi_tot {:.5}", e.psi_com, e.psi_int, e.psi_ext, e.psi_tot);
    println!("n,-log(zeta)/n,-log(beta)/n,beta_rel_err");
    for n in [100, 200, 400, 800] {
        let ni: Vec<usize> = gamma.iter().map(|g| (g * n as f64) as usize).collect();
        let k = vec![(p[0] * ni[0] as f64).round() as usize, (p[1] * ni[1] as f64).round() as usize];
        let t = vec![(tau[0] * n as f64).round() as usize, (tau[1] * n as f64).round() as usize];
        let pair = FacePair::new(k, t, ni, w.to_vec()).unwrap();
        let ext = -log_external_angle(&pair).unwrap() / n as f64;
        let b = internal_angle(&pair, 20_000, n as u64).unwrap();
        println!("{n},{ext:.5},{:.5},{:.1e}", -b.log_estimate / n as f64, b.rel_err());
    }
}
