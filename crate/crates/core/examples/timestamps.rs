//! Bits from photon detection times.
//!
//! Simulates a Poisson source (exponential gaps), converts consecutive gap
//! pairs to bits, and Borel-tests the result.
//!
//!     cargo run --release -p randcert --example timestamps

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use randcert::bitseq::{extract_bits_from_timestamps, TimestampSeries};
use randcert::borel::borel_test;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mean_gap_ticks = 1000.0;
    let mut t = 0u64;
    let times: Vec<u64> = (0..2_000_001)
        .map(|_| {
            let u: f64 = rng.gen();
            t += (-(1.0 - u).ln() * mean_gap_ticks) as u64;
            t
        })
        .collect();
    let series = TimestampSeries::new(times).expect("monotone");
    let bits = extract_bits_from_timestamps(&series).expect("enough events");
    println!(
        "{} events -> {} bits ({} ties dropped), {} ones",
        series.len(),
        bits.len(),
        (series.len() - 1) / 2 - bits.len(),
        bits.count_ones()
    );
    println!("{}", borel_test(&bits).expect("long enough"));
}
