//! Empirical recovery over (ω, δ) for a two-class model; prints the CSV table.
//!
//! `cargo run --release --example phase_grid`

use wl1::experiments::run_phase_grid;
use wl1::exponents::SparsityModel;

fn main() {
    let model = SparsityModel::new(&[0.5, 0.5], &[0.4, 0.05], &[1.0, 1.0]).unwrap();
    let grid = run_phase_grid(&model, &[1.0, 2.5], &[0.4, 0.45, 0.5, 0.55, 0.6], 100, 20, 7).unwrap();
    print!("{}", grid.to_table().to_csv_body());
}
