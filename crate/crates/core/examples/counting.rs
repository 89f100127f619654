//! Why incompressible strings exist: there are fewer short descriptions
//! than strings.
//!
//!     cargo run -p randcert --example counting

use randcert::borel::{incompressible_lower_bound, shorter_strings_count};

fn main() {
    for n in [1, 2, 3, 8, 16, 32] {
        println!(
            "n = {n:>2}: 2^n = {:>10}, shorter strings = {:>10}, incompressible >= {}",
            1u64 << n,
            shorter_strings_count(n).unwrap(),
            incompressible_lower_bound(n).unwrap()
        );
    }
}
