//! Halting-probability laboratory over the TinyPF machine.
//!
//! Every accepted program `p` carries measure `2^-|p|`. Because the accepted
//! set is prefix-free, these measures sum to at most 1 (Kraft), and the
//! halting probability of TinyPF is the sum over halting programs. Only
//! lower bounds are computable: enumerate programs up to a length, run each
//! for a step budget, and add up the measures of those that halted. Raising
//! either limit can only add terms.
//!
//! All Ω values here are specific to TinyPF.

mod dyadic;
pub mod machine;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::bitseq::{BitString, BitStringBuilder};

pub use dyadic::Dyadic;
pub use machine::{
    decode, run, DecodeStatus, Decoder, Instruction, MachineState, Program, Register, Rejection,
    RunOutcome, RunStatus,
};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum OmegaError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("set is not prefix-free: {shorter} is a prefix of {longer}")]
    PrefixViolation { shorter: String, longer: String },
}

fn require(condition: bool, message: &str) -> Result<(), OmegaError> {
    if condition {
        Ok(())
    } else {
        Err(OmegaError::InvalidParameter(message.to_string()))
    }
}

/// All accepted programs of at most `max_len` bits, shortest first and
/// lexicographic within a length.
pub fn enumerate_accepted(max_len: usize) -> Result<Vec<Program>, OmegaError> {
    require(max_len >= 3, "max_len must be at least 3")?;
    let mut found = Vec::new();
    let mut prefix = Vec::new();
    extend_programs(&mut prefix, 0, max_len, &mut found);
    let mut programs: Vec<Program> = found
        .into_iter()
        .map(|instructions| Program::assemble(&instructions).expect("generated program is accepted"))
        .collect();
    programs.sort_by(|a, b| {
        a.len()
            .cmp(&b.len())
            .then_with(|| a.code().to_string().cmp(&b.code().to_string()))
    });
    Ok(programs)
}

fn extend_programs(
    prefix: &mut Vec<Instruction>,
    used_bits: usize,
    max_len: usize,
    found: &mut Vec<Vec<Instruction>>,
) {
    let end_bits = Instruction::End.bit_len();
    if used_bits + end_bits > max_len {
        return;
    }
    let mut program = prefix.clone();
    program.push(Instruction::End);
    found.push(program);
    for instruction in Instruction::non_end_at(prefix.len()) {
        let bits = used_bits + instruction.bit_len();
        if bits + end_bits <= max_len {
            prefix.push(instruction);
            extend_programs(prefix, bits, max_len, found);
            prefix.pop();
        }
    }
}

/// Checks that no code is a proper prefix of another. Duplicates are ignored.
pub fn check_prefix_free<'a, I>(codes: I) -> Result<Vec<&'a BitString>, OmegaError>
where
    I: IntoIterator<Item = &'a BitString>,
{
    let mut sorted: Vec<(String, &BitString)> =
        codes.into_iter().map(|c| (c.to_string(), c)).collect();
    sorted.sort_by(|a, b| a.0.cmp(&b.0));
    sorted.dedup_by(|a, b| a.0 == b.0);
    // In lexicographic order every extension of a code directly follows it or
    // another extension of it, so checking neighbours suffices.
    for pair in sorted.windows(2) {
        if pair[1].0.starts_with(&pair[0].0) {
            return Err(OmegaError::PrefixViolation {
                shorter: pair[0].0.clone(),
                longer: pair[1].0.clone(),
            });
        }
    }
    Ok(sorted.into_iter().map(|(_, c)| c).collect())
}

/// `Σ 2^-|c|` over a prefix-free set of codes, exactly.
pub fn kraft_sum<'a, I>(codes: I) -> Result<Dyadic, OmegaError>
where
    I: IntoIterator<Item = &'a BitString>,
{
    let codes = check_prefix_free(codes)?;
    Ok(codes.into_iter().map(|c| Dyadic::pow2_neg(c.len() as u32)).sum())
}

/// Kraft sum of a set of programs.
pub fn program_measure(programs: &[Program]) -> Result<Dyadic, OmegaError> {
    kraft_sum(programs.iter().map(Program::code))
}

/// Exact lower bound on the halting probability, with the limits used.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OmegaEstimate {
    #[serde(flatten)]
    pub value: Dyadic,
    pub max_len: usize,
    #[serde(rename = "budget")]
    pub step_budget: u64,
    #[serde(rename = "accepted")]
    pub accepted_programs: u64,
    #[serde(rename = "halted")]
    pub halted_programs: u64,
}

impl OmegaEstimate {
    /// `{"numerator", "denom_exp", "max_len", "budget", "accepted", "halted"}`.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("estimate serializes")
    }
}

/// Sums `2^-|p|` over accepted programs of at most `max_len` bits that halt
/// within `budget` steps.
pub fn omega_lower_bound(max_len: usize, budget: u64) -> Result<OmegaEstimate, OmegaError> {
    require(budget >= 1, "budget must be at least 1")?;
    let programs = enumerate_accepted(max_len)?;
    let halted: Vec<&BitString> = programs
        .par_iter()
        .filter(|p| run(p, budget).halted())
        .map(Program::code)
        .collect();
    Ok(OmegaEstimate {
        value: kraft_sum(halted.iter().copied())?,
        max_len,
        step_budget: budget,
        accepted_programs: programs.len() as u64,
        halted_programs: halted.len() as u64,
    })
}

/// Result of one coin-flip program draw.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoinFlipOutcome {
    Accepted { program: Program, flips: usize },
    Abandoned { flips: usize },
}

/// Appends flips from `flips` one at a time and stops at the first accepted
/// program. Gives up after `max_flips` flips, or as soon as no extension can
/// be accepted.
pub fn coinflip_from<I: IntoIterator<Item = bool>>(flips: I, max_flips: usize) -> CoinFlipOutcome {
    let mut decoder = Decoder::new();
    let mut code = BitStringBuilder::new();
    for bit in flips.into_iter().take(max_flips) {
        code.push(bit);
        match decoder.push(bit) {
            DecodeStatus::Incomplete => {}
            DecodeStatus::Accepted => {
                let program = decode(&code.snapshot()).expect("decoder accepted this code");
                return CoinFlipOutcome::Accepted {
                    flips: code.len(),
                    program,
                };
            }
            DecodeStatus::Rejected(_) => break,
        }
    }
    CoinFlipOutcome::Abandoned { flips: max_flips }
}

/// Fair flips from ChaCha8 seeded with `seed`, 64 per draw, msb first.
pub fn coin_flips(seed: u64) -> impl Iterator<Item = bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut word = 0u64;
    (0usize..).map(move |i| {
        if i % 64 == 0 {
            word = rng.next_u64();
        }
        (word >> (63 - i % 64)) & 1 == 1
    })
}

pub fn coinflip_sample(seed: u64, max_flips: usize) -> Result<CoinFlipOutcome, OmegaError> {
    require(max_flips >= 3, "max_flips must be at least 3")?;
    Ok(coinflip_from(coin_flips(seed), max_flips))
}

/// Monte Carlo estimate of the halting mass reachable within `max_flips`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonteCarloEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub seeds: u64,
    pub max_flips: usize,
    pub budget: u64,
    pub accepted: u64,
    pub halted: u64,
    /// Fraction of draws that produced an accepted program.
    pub acceptance_mass: f64,
    /// Fraction of accepted programs that halted.
    pub halting_fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum MonteCarloOutcome {
    Estimate(MonteCarloEstimate),
    /// Every draw was abandoned.
    NoEstimate { seeds: u64, accepted: u64 },
}

/// Draws programs for seeds `first_seed .. first_seed + seeds`, runs each
/// accepted one for `budget` steps, and reports the halting fraction scaled
/// by the empirical acceptance mass, with its binomial standard error.
pub fn omega_monte_carlo(
    seeds: u64,
    max_flips: usize,
    budget: u64,
    first_seed: u64,
) -> Result<MonteCarloOutcome, OmegaError> {
    require(seeds >= 1, "seeds must be at least 1")?;
    require(max_flips >= 3, "max_flips must be at least 3")?;
    require(budget >= 1, "budget must be at least 1")?;
    let (accepted, halted) = (0..seeds)
        .into_par_iter()
        .map(|i| match coinflip_from(coin_flips(first_seed.wrapping_add(i)), max_flips) {
            CoinFlipOutcome::Accepted { program, .. } => (1u64, run(&program, budget).halted() as u64),
            CoinFlipOutcome::Abandoned { .. } => (0, 0),
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    if accepted == 0 {
        return Ok(MonteCarloOutcome::NoEstimate { seeds, accepted });
    }
    let acceptance_mass = accepted as f64 / seeds as f64;
    let halting_fraction = halted as f64 / accepted as f64;
    let estimate = halting_fraction * acceptance_mass;
    let std_error = (estimate * (1.0 - estimate) / seeds as f64).sqrt();
    Ok(MonteCarloOutcome::Estimate(MonteCarloEstimate {
        estimate,
        std_error,
        seeds,
        max_flips,
        budget,
        accepted,
        halted,
        acceptance_mass,
        halting_fraction,
    }))
}
