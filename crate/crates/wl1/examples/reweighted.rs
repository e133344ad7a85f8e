//! Plain versus two-step reweighted ℓ1 at n = 100, m = 56.
//!
//! `cargo run --release --example reweighted`

use wl1::experiments::{run_reweighted, ReweightedConfig};
use wl1::sampling::Amplitude;

fn main() {
    let config = ReweightedConfig { n: 100, m: 56, ks: (14..=34).step_by(4).collect(), amplitude: Amplitude::Gaussian, omega: 10.0, trials: 20 };
    let r = run_reweighted(&config, 5).unwrap();
    print!("{}", r.to_table().to_csv_body());
    println!("50% crossover: plain {:?}, reweighted {:?}", r.plain_crossover, r.reweighted_crossover);
}
