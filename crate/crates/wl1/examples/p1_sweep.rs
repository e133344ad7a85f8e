//! Success rate versus class-1 sparsity for several weights and the envelope over ω.
//!
//! `cargo run --release --example p1_sweep`

use wl1::experiments::run_p1_sweep;

fn main() {
    let s = run_p1_sweep(0.05, &[2.0, 3.0], 100, 50, &[0.3, 0.4, 0.5], 20, 11).unwrap();
    print!("{}", s.to_table().to_csv_body());
}
