//! Drawing programs by coin flips, and the Monte Carlo halting estimate.
//!
//!     cargo run --release -p randcert --example coin_flips

use randcert::omega::{coinflip_sample, omega_lower_bound, omega_monte_carlo, CoinFlipOutcome, MonteCarloOutcome};

fn main() {
    for seed in 0..8 {
        match coinflip_sample(seed, 12).unwrap() {
            CoinFlipOutcome::Accepted { program, flips } => {
                println!("seed {seed}: accepted after {flips} flips: {program}")
            }
            CoinFlipOutcome::Abandoned { flips } => println!("seed {seed}: abandoned after {flips} flips"),
        }
    }
    println!();
    for max_flips in [3, 6, 9, 12] {
        let exact = omega_lower_bound(max_flips, 100).unwrap().value;
        match omega_monte_carlo(1_000_000, max_flips, 100, 0).unwrap() {
            MonteCarloOutcome::Estimate(mc) => println!(
                "max_flips {max_flips:>2}: {:.6} ± {:.6}   exact {:.6} ({exact})",
                mc.estimate,
                mc.std_error,
                exact.to_f64()
            ),
            MonteCarloOutcome::NoEstimate { .. } => println!("max_flips {max_flips}: no accepted draws"),
        }
    }
}
