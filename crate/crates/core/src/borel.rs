//! Borel normality test for finite bit strings.
//!
//! For a string of length `L`, every block length `n` from 1 to
//! `max(1, ⌊log₂ log₂ L⌋)` is examined. The string is cut into `⌊L/n⌋`
//! non-overlapping blocks starting at bit 0 (the remainder is dropped), and
//! for every pattern `y` of `n` bits the relative frequency must satisfy
//!
//! ```text
//! | count(y) / ⌊L/n⌋ − 2⁻ⁿ | < ε,   ε = √(log₂ L / L)
//! ```
//!
//! All logarithms are base 2. Passing is a necessary, not a sufficient,
//! condition for algorithmic randomness: the Champernowne sequence is the
//! textbook example of a normal sequence that is highly compressible.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bitseq::BitString;

/// Largest block length with a dense `2ⁿ` count table.
pub const MAX_COUNTED_BLOCK_LEN: usize = 24;

/// Blocks per parallel work unit.
const CHUNK_BLOCKS: usize = 1 << 18;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum BorelError {
    #[error("block length must be at least 1")]
    ZeroBlockLength,
    #[error("block length {n} exceeds sequence length {len}")]
    BlockLongerThanSequence { n: usize, len: usize },
    #[error("block length {0} exceeds the supported maximum of {MAX_COUNTED_BLOCK_LEN}")]
    BlockLengthUnsupported(usize),
    #[error("sequence of {len} bits is too short (need at least {min})")]
    TooShort { len: usize, min: usize },
    #[error("length must be at least 1")]
    ZeroLength,
}

/// Occurrence counts of every `n`-bit pattern among non-overlapping blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockCounts {
    n: usize,
    total_blocks: u64,
    counts: Vec<u64>,
}

impl BlockCounts {
    pub fn block_len(&self) -> usize {
        self.n
    }

    pub fn total_blocks(&self) -> u64 {
        self.total_blocks
    }

    /// Count for the pattern whose bits, read msb-first, equal `pattern`.
    pub fn count(&self, pattern: u64) -> u64 {
        self.counts.get(pattern as usize).copied().unwrap_or(0)
    }

    /// Count for a pattern given as a bit string of length `n`.
    pub fn count_of(&self, pattern: &BitString) -> Option<u64> {
        (pattern.len() == self.n).then(|| self.count(pattern_value(pattern)))
    }

    /// Counts indexed by pattern value, all `2ⁿ` entries.
    pub fn as_slice(&self) -> &[u64] {
        &self.counts
    }

    /// `(pattern, count)` pairs in lexicographic pattern order.
    pub fn iter(&self) -> impl Iterator<Item = (BitString, u64)> + '_ {
        self.counts
            .iter()
            .enumerate()
            .map(move |(p, &c)| (pattern_bits(p as u64, self.n), c))
    }
}

fn pattern_value(pattern: &BitString) -> u64 {
    pattern.iter().fold(0, |acc, b| (acc << 1) | b as u64)
}

/// The `n`-bit pattern with value `value`, most significant bit first.
pub fn pattern_bits(value: u64, n: usize) -> BitString {
    BitString::from_bits((0..n).rev().map(|i| (value >> i) & 1 == 1))
}

/// Tallies the `⌊L/n⌋` non-overlapping `n`-bit blocks of `x`.
pub fn count_blocks(x: &BitString, n: usize) -> Result<BlockCounts, BorelError> {
    if n == 0 {
        return Err(BorelError::ZeroBlockLength);
    }
    if n > x.len() {
        return Err(BorelError::BlockLongerThanSequence { n, len: x.len() });
    }
    if n > MAX_COUNTED_BLOCK_LEN {
        return Err(BorelError::BlockLengthUnsupported(n));
    }
    let total_blocks = x.len() / n;
    let counts = if n == 1 {
        let ones = x.count_ones() as u64;
        vec![x.len() as u64 - ones, ones]
    } else {
        let chunks = total_blocks.div_ceil(CHUNK_BLOCKS);
        (0..chunks)
            .into_par_iter()
            .map(|chunk| {
                let first = chunk * CHUNK_BLOCKS;
                let last = (first + CHUNK_BLOCKS).min(total_blocks);
                let mut table = vec![0u64; 1 << n];
                for block in first..last {
                    table[x.read_bits(block * n, n) as usize] += 1;
                }
                table
            })
            .reduce(
                || vec![0u64; 1 << n],
                |mut acc, part| {
                    acc.iter_mut().zip(part).for_each(|(a, p)| *a += p);
                    acc
                },
            )
    };
    Ok(BlockCounts {
        n,
        total_blocks: total_blocks as u64,
        counts,
    })
}

/// `ε(L) = √(log₂ L / L)`.
pub fn epsilon(length: usize) -> Result<f64, BorelError> {
    if length < 2 {
        return Err(BorelError::TooShort { len: length, min: 2 });
    }
    let l = length as f64;
    Ok((l.log2() / l).sqrt())
}

/// `max(1, ⌊log₂ log₂ L⌋)`, computed exactly: the largest `m` with `2^(2^m) ≤ L`.
pub fn max_block_len(length: usize) -> Result<usize, BorelError> {
    if length < 4 {
        return Err(BorelError::TooShort { len: length, min: 4 });
    }
    let log_l = usize::BITS - 1 - length.leading_zeros(); // ⌊log₂ L⌋
    Ok((u32::BITS - 1 - log_l.leading_zeros()) as usize)
}

/// Expected count of any single `n`-bit pattern: `⌊L/n⌋ · 2⁻ⁿ`.
pub fn expected_count(length: usize, n: usize) -> Result<f64, BorelError> {
    if n == 0 {
        return Err(BorelError::ZeroBlockLength);
    }
    if n > length {
        return Err(BorelError::BlockLongerThanSequence { n, len: length });
    }
    Ok((length / n) as f64 * 0.5f64.powi(n as i32))
}

/// Result for one block length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockLenResult {
    pub n: usize,
    pub max_deviation: f64,
    pub worst_pattern: String,
    pub pass: bool,
}

/// Outcome of [`borel_test`]. Serializes to the frozen report schema.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BorelReport {
    #[serde(rename = "length")]
    pub length_l: usize,
    pub epsilon: f64,
    pub max_block_len: usize,
    pub per_n: Vec<BlockLenResult>,
    pub verdict: bool,
}

impl BorelReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

impl fmt::Display for BorelReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "L = {} bits, epsilon = {:.6}", self.length_l, self.epsilon)?;
        for entry in &self.per_n {
            writeln!(
                f,
                "  n={} max deviation {:.6} at {:>width$} -> {}",
                entry.n,
                entry.max_deviation,
                entry.worst_pattern,
                if entry.pass { "pass" } else { "FAIL" },
                width = self.max_block_len,
            )?;
        }
        write!(
            f,
            "Borel normal: {} (necessary, not sufficient, for algorithmic randomness)",
            if self.verdict { "yes" } else { "no" }
        )
    }
}

/// Largest deviation from `2⁻ⁿ` and the first pattern attaining it.
pub fn max_deviation(counts: &BlockCounts) -> (f64, u64) {
    let total = counts.total_blocks as f64;
    let target = 0.5f64.powi(counts.n as i32);
    let mut worst = (0.0, 0);
    for (pattern, &count) in counts.counts.iter().enumerate() {
        let deviation = (count as f64 / total - target).abs();
        if deviation > worst.0 {
            worst = (deviation, pattern as u64);
        }
    }
    worst
}

/// Runs the Borel normality test on `x`. Block lengths are counted in parallel.
pub fn borel_test(x: &BitString) -> Result<BorelReport, BorelError> {
    let length = x.len();
    let m = max_block_len(length)?;
    let eps = epsilon(length)?;
    let per_n = (1..=m)
        .into_par_iter()
        .map(|n| {
            let counts = count_blocks(x, n)?;
            let (deviation, pattern) = max_deviation(&counts);
            Ok(BlockLenResult {
                n,
                max_deviation: deviation,
                worst_pattern: pattern_bits(pattern, n).to_string(),
                pass: deviation < eps,
            })
        })
        .collect::<Result<Vec<_>, BorelError>>()?;
    let verdict = per_n.iter().all(|r| r.pass);
    Ok(BorelReport {
        length_l: length,
        epsilon: eps,
        max_block_len: m,
        per_n,
        verdict,
    })
}

/// Number of non-empty binary strings shorter than `n`: `2ⁿ − 2`.
pub fn shorter_strings_count(n: u32) -> Result<u128, BorelError> {
    if n == 0 {
        return Err(BorelError::ZeroLength);
    }
    Ok((1u128 << n) - 2)
}

/// Pigeonhole bound on length-`n` strings with no shorter description:
/// `2ⁿ − (2ⁿ − 2) = 2`.
pub fn incompressible_lower_bound(n: u32) -> Result<u128, BorelError> {
    let shorter = shorter_strings_count(n)?;
    Ok((1u128 << n) - shorter)
}
