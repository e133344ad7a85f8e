//! Union bound on the failure probability at n = 40 under both index rules.
//!
//! `cargo run --release --example failure_bound`

use wl1::geometry::{failure_bound, FiniteModel, IndexRule};

fn main() {
    println!("m,as_printed,parity,terms");
    for m in (14..=30).step_by(2) {
        let fm = FiniteModel::two_class(40, 20, 4, 1, m, 1.0, 2.0).unwrap();
        let printed = failure_bound(&fm, 20_000, 1, IndexRule::AsPrinted).unwrap();
        let parity = failure_bound(&fm, 20_000, 1, IndexRule::Parity).unwrap();
        println!("{m},{:.4e},{:.4e},{}", printed.bound, parity.bound, printed.terms.len());
    }
}
