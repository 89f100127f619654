//! The binary Champernowne sequence: normal in the limit, yet generated by a
//! two-line loop.
//!
//! Finite prefixes are another matter. A prefix that stops partway through
//! the strings of one length has only covered strings starting with 0, so
//! zeros are in surplus at n = 1. Prefixes ending on a length boundary are
//! exactly balanced at n = 1 but odd-length strings shift the 2-bit block
//! alignment, and that deviation shrinks far more slowly than ε. Only the
//! shortest prefix in the table below passes.
//!
//!     cargo run --release -p randcert --example champernowne

use randcert::borel::borel_test;
use randcert::generators::champernowne;

fn main() {
    println!("first 34 bits: {}", champernowne(34));
    println!();
    println!("{:>10}  {:>9}  {:>9}  {:>9}  verdict", "L", "epsilon", "dev n=1", "dev n=2");
    // 2^k and the complete-length boundaries Σ_{j≤k} j·2^j.
    let boundary = |k: u32| ((k as usize - 1) << (k + 1)) + 2;
    let lengths = [1 << 12, boundary(9), 1 << 16, boundary(13), 1 << 20, 1 << 22, boundary(17)];
    for length in lengths {
        let report = borel_test(&champernowne(length)).expect("long enough");
        println!(
            "{:>10}  {:>9.5}  {:>9.5}  {:>9.5}  {}",
            length,
            report.epsilon,
            report.per_n[0].max_deviation,
            report.per_n[1].max_deviation,
            if report.verdict { "pass" } else { "fail" }
        );
    }
}
