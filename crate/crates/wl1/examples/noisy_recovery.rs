//! Output SNR of weighted ℓ1 recovery for noisy signals.
//!
//! `cargo run --release --example noisy_recovery`

use wl1::experiments::run_noisy_snr;
use wl1::exponents::SparsityModel;

fn main() {
    let model = SparsityModel::new(&[0.5, 0.5], &[0.2, 0.05], &[1.0, 1.0]).unwrap();
    let r = run_noisy_snr(&model, &[1.0, 2.0], 100, 60, &[10.0, 20.0, 30.0, f64::INFINITY], 10, 13).unwrap();
    print!("{}", r.averages_table().to_csv_body());
}
