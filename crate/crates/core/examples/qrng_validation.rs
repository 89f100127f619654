//! Borel-test measurement records from prepared qubit states.
//!
//! A biased state such as (1/10)|0⟩ + (√99/10)|1⟩ produces a record that the
//! test rejects; the balanced state (|0⟩ + e^{iθ}|1⟩)/√2 passes for every
//! phase θ, and the records for different θ are identical.
//!
//!     cargo run --release -p randcert --example qrng_validation

use randcert::borel::borel_test;
use randcert::generators::SourceSpec;

fn main() {
    let length = 1 << 20;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let states = [
        ("biased 1:99", 0.1, 99f64.sqrt() / 10.0, 0.0),
        ("balanced, theta = 0", h, h, 0.0),
        ("balanced, theta = pi/3", h, h, std::f64::consts::FRAC_PI_3),
        ("basis |0>", 1.0, 0.0, 0.0),
    ];
    let mut balanced_records = Vec::new();
    for (label, amp0, amp1, theta) in states {
        let spec = SourceSpec::from_state(amp0, amp1, theta, 42, length).expect("normalized state");
        let bits = spec.generate().expect("valid spec");
        let report = borel_test(&bits).expect("long enough");
        println!("{label}  [{spec}]");
        println!("{report}\n");
        if amp0 == h {
            balanced_records.push(bits);
        }
    }
    println!(
        "records for the two phases identical: {}",
        balanced_records.windows(2).all(|w| w[0] == w[1])
    );
}
