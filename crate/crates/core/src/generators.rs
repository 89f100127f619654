//! Reference bit sources used as positive and negative controls.
//!
//! Stochastic sources draw from ChaCha8 (`rand_chacha` 0.3) seeded with
//! `seed_from_u64`. That stream is value-stable across platforms and crate
//! patch releases, so seeded outputs can be frozen in golden tests.

use std::fmt;
use std::str::FromStr;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::bitseq::{BitString, BitStringBuilder};

/// Tolerance on `amp0² + amp1² = 1`.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-9;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum GeneratorError {
    #[error("probability {0} is outside [0, 1]")]
    ProbabilityOutOfRange(f64),
    #[error("amplitudes ({amp0}, {amp1}) are not normalized: squared norm {norm}")]
    NotNormalized { amp0: f64, amp1: f64, norm: f64 },
    #[error("malformed source spec: {0}")]
    BadSpec(String),
}

/// The reference sources.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SourceKind {
    Champernowne,
    Bernoulli,
    Prng,
}

impl SourceKind {
    pub fn name(self) -> &'static str {
        match self {
            SourceKind::Champernowne => "champernowne",
            SourceKind::Bernoulli => "bernoulli",
            SourceKind::Prng => "prng",
        }
    }
}

impl FromStr for SourceKind {
    type Err = GeneratorError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "champernowne" => Ok(SourceKind::Champernowne),
            "bernoulli" => Ok(SourceKind::Bernoulli),
            "prng" => Ok(SourceKind::Prng),
            other => Err(GeneratorError::BadSpec(format!("unknown kind {other:?}"))),
        }
    }
}

/// Full description of a generated sequence.
///
/// `phase_theta` is the relative phase of a prepared qubit state. It is kept
/// for reporting only: measurement statistics depend on `p_one` alone.
#[derive(Debug, Clone, PartialEq)]
pub struct SourceSpec {
    pub kind: SourceKind,
    pub p_one: f64,
    pub phase_theta: f64,
    pub seed: u64,
    pub length: usize,
}

impl SourceSpec {
    pub fn champernowne(length: usize) -> Self {
        Self {
            kind: SourceKind::Champernowne,
            p_one: 0.5,
            phase_theta: 0.0,
            seed: 0,
            length,
        }
    }

    pub fn bernoulli(p_one: f64, seed: u64, length: usize) -> Self {
        Self {
            kind: SourceKind::Bernoulli,
            p_one,
            phase_theta: 0.0,
            seed,
            length,
        }
    }

    pub fn prng(seed: u64, length: usize) -> Self {
        Self {
            kind: SourceKind::Prng,
            p_one: 0.5,
            phase_theta: 0.0,
            seed,
            length,
        }
    }

    /// Bernoulli source measuring the state `amp0|0⟩ + e^{iθ} amp1|1⟩`.
    pub fn from_state(
        amp0: f64,
        amp1: f64,
        phase_theta: f64,
        seed: u64,
        length: usize,
    ) -> Result<Self, GeneratorError> {
        Ok(Self {
            phase_theta,
            ..Self::bernoulli(amplitude_to_p(amp0, amp1)?, seed, length)
        })
    }

    pub fn validate(&self) -> Result<(), GeneratorError> {
        check_probability(self.p_one)
    }

    pub fn generate(&self) -> Result<BitString, GeneratorError> {
        match self.kind {
            SourceKind::Champernowne => Ok(champernowne(self.length)),
            SourceKind::Bernoulli => bernoulli_from_state(self.p_one, self.seed, self.length),
            SourceKind::Prng => Ok(uniform_bits(self.seed, self.length)),
        }
    }
}

/// Single-line `key=value` form, e.g. `kind=bernoulli p=0.99 seed=42 len=1048576`.
impl fmt::Display for SourceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "kind={}", self.kind.name())?;
        if self.kind == SourceKind::Bernoulli {
            write!(f, " p={}", self.p_one)?;
            if self.phase_theta != 0.0 {
                write!(f, " theta={}", self.phase_theta)?;
            }
        }
        if self.kind != SourceKind::Champernowne {
            write!(f, " seed={}", self.seed)?;
        }
        write!(f, " len={}", self.length)
    }
}

impl FromStr for SourceSpec {
    type Err = GeneratorError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut kind = None;
        let mut p_one = None;
        let mut phase_theta = 0.0;
        let mut seed = 0;
        let mut length = None;
        for token in s.split_whitespace() {
            let (key, value) = token
                .split_once('=')
                .ok_or_else(|| GeneratorError::BadSpec(format!("expected key=value, got {token:?}")))?;
            let bad = |what: &str| GeneratorError::BadSpec(format!("bad {what} value {value:?}"));
            match key {
                "kind" => kind = Some(value.parse::<SourceKind>()?),
                "p" => p_one = Some(value.parse::<f64>().map_err(|_| bad("p"))?),
                "theta" => phase_theta = value.parse::<f64>().map_err(|_| bad("theta"))?,
                "seed" => seed = value.parse::<u64>().map_err(|_| bad("seed"))?,
                "len" => length = Some(value.parse::<usize>().map_err(|_| bad("len"))?),
                other => return Err(GeneratorError::BadSpec(format!("unknown key {other:?}"))),
            }
        }
        let kind = kind.ok_or_else(|| GeneratorError::BadSpec("missing kind".into()))?;
        let length = length.ok_or_else(|| GeneratorError::BadSpec("missing len".into()))?;
        let p_one = match (kind, p_one) {
            (SourceKind::Bernoulli, None) => {
                return Err(GeneratorError::BadSpec("bernoulli requires p".into()))
            }
            (_, p) => p.unwrap_or(0.5),
        };
        let spec = SourceSpec {
            kind,
            p_one,
            phase_theta,
            seed,
            length,
        };
        spec.validate()?;
        Ok(spec)
    }
}

fn check_probability(p: f64) -> Result<(), GeneratorError> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(GeneratorError::ProbabilityOutOfRange(p))
    }
}

/// First `length` bits of the binary Champernowne sequence: every binary
/// string, shortest first and lexicographic within a length, concatenated.
pub fn champernowne(length: usize) -> BitString {
    let mut builder = BitStringBuilder::with_capacity(length);
    let mut width = 1usize;
    'outer: loop {
        for value in 0u64..(1u64 << width) {
            let remaining = length - builder.len();
            if remaining == 0 {
                break 'outer;
            }
            if remaining >= width {
                builder.push_word(value, width);
            } else {
                builder.push_word(value >> (width - remaining), remaining);
            }
        }
        width += 1;
    }
    builder.finish()
}

/// Uniform variate in `[0, 1)` with 53 bits of precision.
#[inline]
fn unit_interval(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Independent bits, each 1 with probability `p_one`, reproducible per seed.
/// Each bit consumes one 64-bit draw and is 1 iff the 53-bit uniform is
/// strictly below `p_one`.
pub fn bernoulli_from_state(p_one: f64, seed: u64, length: usize) -> Result<BitString, GeneratorError> {
    check_probability(p_one)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut builder = BitStringBuilder::with_capacity(length);
    for _ in 0..length {
        builder.push(unit_interval(&mut rng) < p_one);
    }
    Ok(builder.finish())
}

/// Raw ChaCha8 output, 64 bits per draw, msb first. Much faster than
/// [`bernoulli_from_state`] at `p_one = 0.5` but not bit-identical to it.
pub fn uniform_bits(seed: u64, length: usize) -> BitString {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let words = (0..length.div_ceil(64)).map(|_| rng.next_u64()).collect();
    BitString::from_words(words, length)
}

/// Born rule: probability of measuring 1 for the state `amp0|0⟩ + amp1|1⟩`.
pub fn amplitude_to_p(amp0: f64, amp1: f64) -> Result<f64, GeneratorError> {
    let norm = amp0 * amp0 + amp1 * amp1;
    if norm.is_nan() || (norm - 1.0).abs() > NORMALIZATION_TOLERANCE {
        return Err(GeneratorError::NotNormalized { amp0, amp1, norm });
    }
    Ok((amp1 * amp1).clamp(0.0, 1.0))
}
