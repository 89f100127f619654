//! Run-length compressibility of biased and balanced records.
//!
//!     cargo run --release -p randcert --example run_length

use randcert::bitseq::BitString;
use randcert::generators::bernoulli_from_state;
use randcert::rle::{compression_ratio, decode, encode};

fn main() {
    let record = BitString::from_ascii("1111111011111111111011111111011111111111111111111111101111111010");
    let code = encode(&record);
    println!("record: {record}");
    println!("runs:   {:?} (leading_zero = {})", code.runs, code.leading_zero);
    println!("bytes:  {:02x?}", code.to_bytes());
    assert_eq!(decode(&code).unwrap(), record);

    println!();
    let length = 1 << 20;
    for p in [1.0, 0.999, 0.99, 0.9, 0.75, 0.5] {
        let bits = bernoulli_from_state(p, 7, length).unwrap();
        let runs = encode(&bits).runs.len();
        println!(
            "p(1) = {p:<5}  runs = {runs:>7}  ratio = {:.5}",
            compression_ratio(&bits).unwrap()
        );
    }
    let alternating = BitString::from_ascii(&"01".repeat(512));
    println!("0101...01     ratio = {:.5}", compression_ratio(&alternating).unwrap());
}
