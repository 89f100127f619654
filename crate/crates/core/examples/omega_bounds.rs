//! Exact lower bounds on the TinyPF halting probability.
//!
//!     cargo run --release -p randcert --example omega_bounds

use randcert::bitseq::BitString;
use randcert::omega::{enumerate_accepted, kraft_sum, omega_lower_bound, program_measure, run};

fn main() {
    // If exactly the programs 1, 00 and 010 halted on some machine:
    let halted = ["1", "00", "010"].map(BitString::from_ascii);
    let omega = kraft_sum(&halted).unwrap();
    println!("{{1, 00, 010}} -> {omega} = {}b\n", omega.binary_digits(3));

    for program in enumerate_accepted(6).unwrap() {
        let outcome = run(&program, 100);
        println!("{program}  -> {:?} in {} steps", outcome.status, outcome.steps_used);
    }
    println!();

    println!("{:>7} {:>6} {:>9} {:>9}  {:<22} {:<22}", "max_len", "budget", "accepted", "halted", "kraft", "omega lower bound");
    for max_len in [3, 6, 9, 12, 15, 18] {
        let mass = program_measure(&enumerate_accepted(max_len).unwrap()).unwrap();
        for budget in [1, 10, 1000] {
            let est = omega_lower_bound(max_len, budget).unwrap();
            println!(
                "{:>7} {:>6} {:>9} {:>9}  {:<22} {:<22}",
                max_len,
                budget,
                est.accepted_programs,
                est.halted_programs,
                mass.binary_digits(max_len as u32),
                est.value.binary_digits(max_len as u32),
            );
        }
    }
    println!("\n{}", omega_lower_bound(18, 1000).unwrap().to_json());
}
