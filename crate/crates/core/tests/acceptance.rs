//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails. Run with `cargo test -p randcert --test acceptance`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use randcert::bitseq::{parse_bits_exact, BitFormat, BitString};
use randcert::borel::{borel_test, count_blocks, incompressible_lower_bound, shorter_strings_count};
use randcert::generators::{bernoulli_from_state, champernowne, uniform_bits};
use randcert::omega::{
    enumerate_accepted, kraft_sum, omega_lower_bound, omega_monte_carlo, program_measure, Dyadic,
    MonteCarloOutcome,
};
use randcert::rle;

type Check = Result<String, String>;

fn ensure(condition: bool, message: impl Into<String>) -> Result<(), String> {
    if condition {
        Ok(())
    } else {
        Err(message.into())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, format!("took {elapsed:?}, limit {limit:?}"))
}

fn champernowne_fidelity() -> Check {
    let start = Instant::now();
    let bits = champernowne(34).to_string();
    within(start.elapsed(), Duration::from_secs(1))?;
    ensure(bits == "0100011011000001010011100101110111", format!("got {bits}"))?;
    Ok(bits)
}

fn omega_worked_example() -> Check {
    let set = ["1", "00", "010"].map(BitString::from_ascii);
    let sum = kraft_sum(&set).map_err(|e| e.to_string())?;
    ensure(sum == Dyadic::new(BigUint::from(7u32), 3), format!("sum {sum}"))?;
    let digits = sum.binary_digits(3);
    ensure(digits == "0.111", format!("digits {digits}"))?;
    Ok(format!("{sum} = {digits}b"))
}

fn paper_split() -> Check {
    let x = BitString::from_ascii("11 10 11 01 11 11 11 01 11 01");
    let c = count_blocks(&x, 2).map_err(|e| e.to_string())?;
    let got = (c.count(0b11), c.count(0b01), c.count(0b10), c.count(0b00));
    ensure(got == (6, 3, 1, 0), format!("{got:?}"))?;
    ensure(c.total_blocks() == 10, "total blocks")?;
    Ok("11:6 01:3 10:1 00:0".into())
}

fn counting_argument() -> Check {
    let shorter = shorter_strings_count(3).map_err(|e| e.to_string())?;
    let bound = incompressible_lower_bound(3).map_err(|e| e.to_string())?;
    ensure((shorter, bound) == (6, 2), format!("{shorter}, {bound}"))?;
    Ok("6 shorter strings, at least 2 incompressible".into())
}

fn borel_discrimination() -> Check {
    let start = Instant::now();
    let length = 1 << 20;
    let balanced = bernoulli_from_state(0.5, 1, length).map_err(|e| e.to_string())?;
    let r = borel_test(&balanced).map_err(|e| e.to_string())?;
    ensure(r.verdict, format!("balanced source failed: {}", r.to_json()))?;

    let biased = bernoulli_from_state(0.99, 1, length).map_err(|e| e.to_string())?;
    let r = borel_test(&biased).map_err(|e| e.to_string())?;
    let d1 = r.per_n[0].max_deviation;
    ensure(!r.verdict, "p = 0.99 source passed")?;
    ensure((d1 - 0.49).abs() <= 0.01, format!("p = 0.99 n=1 deviation {d1}"))?;

    let ones = BitString::repeat(true, length);
    let r = borel_test(&ones).map_err(|e| e.to_string())?;
    ensure(!r.verdict && r.per_n[0].max_deviation == 0.5, "all-ones deviation not exactly 0.5")?;
    within(start.elapsed(), Duration::from_secs(5))?;
    Ok(format!("balanced pass, p=0.99 fail (d1 = {d1:.5}), all-ones fail (d1 = 0.5)"))
}

fn oracle_equivalence() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for case in 0..1000 {
        let len = rng.gen_range(1..=10_000usize);
        let text: String = (0..len).map(|_| if rng.gen::<bool>() { '1' } else { '0' }).collect();
        let n = rng.gen_range(1..=4.min(len));
        let x = parse_bits_exact(text.as_bytes(), BitFormat::Ascii01, None).map_err(|e| e.to_string())?;
        let fast = count_blocks(&x, n).map_err(|e| e.to_string())?;
        let mut naive = vec![0u64; 1 << n];
        for block in text.as_bytes().chunks_exact(n) {
            let idx = block.iter().fold(0usize, |acc, &c| acc * 2 + (c - b'0') as usize);
            naive[idx] += 1;
        }
        ensure(fast.as_slice() == naive.as_slice(), format!("case {case}: L = {len}, n = {n}"))?;
    }
    Ok("1000 instances identical".into())
}

fn kraft_prefix_properties() -> Check {
    let start = Instant::now();
    let mut previous = Dyadic::zero();
    for m in 3..=12 {
        let programs = enumerate_accepted(m).map_err(|e| e.to_string())?;
        let mut codes: Vec<String> = programs.iter().map(|p| p.code().to_string()).collect();
        codes.sort();
        for pair in codes.windows(2) {
            ensure(!pair[1].starts_with(&pair[0]), format!("{} prefixes {}", pair[0], pair[1]))?;
        }
        let sum = program_measure(&programs).map_err(|e| e.to_string())?;
        ensure(sum <= Dyadic::one(), format!("kraft sum {sum} > 1 at m = {m}"))?;
        ensure(sum >= previous, format!("kraft sum decreased at m = {m}"))?;
        previous = sum;
    }
    let lens = [3, 6, 9, 12];
    let budgets = [1, 10, 100, 1000];
    let mut grid = Vec::new();
    for &m in &lens {
        let row: Result<Vec<_>, _> = budgets.iter().map(|&t| omega_lower_bound(m, t)).collect();
        grid.push(row.map_err(|e| e.to_string())?);
    }
    for (i, row) in grid.iter().enumerate() {
        for (j, estimate) in row.iter().enumerate() {
            if j > 0 {
                ensure(estimate.value >= row[j - 1].value, format!("budget step at m = {}", lens[i]))?;
            }
            if i > 0 {
                ensure(estimate.value >= grid[i - 1][j].value, format!("length step at T = {}", budgets[j]))?;
            }
        }
    }
    within(start.elapsed(), Duration::from_secs(60))?;
    Ok(format!("kraft(12) = {previous}, omega(12, 1000) = {}", grid[3][3].value))
}

fn monte_carlo_consistency() -> Check {
    let start = Instant::now();
    let exact = Dyadic::new(BigUint::from(13u32), 6);
    let enumerated = omega_lower_bound(6, 100).map_err(|e| e.to_string())?;
    ensure(enumerated.value == exact, "enumeration is not 13/64")?;
    let MonteCarloOutcome::Estimate(mc) = omega_monte_carlo(1_000_000, 6, 100, 0).map_err(|e| e.to_string())? else {
        return Err("no accepted samples".into());
    };
    let z = (mc.estimate - exact.to_f64()) / mc.std_error;
    ensure(z.abs() <= 3.0, format!("estimate {} is {z:.2} SE from 13/64", mc.estimate))?;
    within(start.elapsed(), Duration::from_secs(60))?;
    Ok(format!("estimate {:.6} ± {:.6} (z = {z:.2})", mc.estimate, mc.std_error))
}

fn round_trips() -> Check {
    for len in 0..=16usize {
        for value in 0u64..(1 << len) {
            let x = BitString::from_bits((0..len).rev().map(|i| (value >> i) & 1 == 1));
            let back = rle::decode(&rle::encode(&x)).map_err(|e| e.to_string())?;
            ensure(back == x, format!("rle exhaustive {x}"))?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..10_000 {
        let len = rng.gen_range(0..4096);
        let x = bernoulli_from_state(rng.gen(), rng.gen(), len).map_err(|e| e.to_string())?;
        let code = rle::encode(&x);
        let stored = rle::RunLengthCode::from_file_bytes(&code.to_file_bytes()).map_err(|e| e.to_string())?;
        ensure(rle::decode(&stored).map_err(|e| e.to_string())? == x, "rle random")?;
        for format in BitFormat::ALL {
            let parsed = parse_bits_exact(&x.render(format), format, Some(len)).map_err(|e| e.to_string())?;
            ensure(parsed == x, format!("{format} round trip, L = {len}"))?;
        }
    }
    Ok("rle exhaustive to 16 bits + 10^4 random; ascii01/packed_msb/hex".into())
}

fn throughput() -> Check {
    let x = uniform_bits(10, 100_000_000);
    let start = Instant::now();
    let r = borel_test(&x).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(10))?;
    Ok(format!("10^8 bits in {elapsed:.2?}, verdict {}", r.verdict))
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn() -> Check);
    let criteria: [Criterion; 10] = [
        ("1 champernowne fidelity", champernowne_fidelity),
        ("2 omega worked example", omega_worked_example),
        ("3 displayed block split", paper_split),
        ("4 counting argument", counting_argument),
        ("5 borel discrimination", borel_discrimination),
        ("6 oracle equivalence", oracle_equivalence),
        ("7 kraft/prefix/monotone", kraft_prefix_properties),
        ("8 monte carlo consistency", monte_carlo_consistency),
        ("9 round trips", round_trips),
        ("10 throughput", throughput),
    ];
    let mut failures = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(detail) => {
                failures += 1;
                println!("FAIL  {name}: {detail}");
            }
        }
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failures} criterion(s) failed");
        ExitCode::FAILURE
    }
}
