//! Run-length coding of bit strings.
//!
//! A string is stored as the value of its first bit plus the lengths of its
//! maximal constant runs. The serialized code is one flag byte (1 when the
//! first bit is 0) followed by each run length as an unsigned LEB128 varint.
//! A `.rlc` file prefixes that code with the magic bytes `RLC1`.
//!
//! Strongly biased strings collapse to a handful of long runs; balanced
//! strings average runs of two bits, each costing a full byte, so this coder
//! expands them roughly fourfold.

use thiserror::Error;

use crate::bitseq::{BitString, BitStringBuilder};

pub const RLC_MAGIC: &[u8; 4] = b"RLC1";

#[derive(Error, Debug)]
pub enum RleError {
    #[error("run {index} has length 0")]
    ZeroRun { index: usize },
    #[error("missing RLC1 magic")]
    BadMagic,
    #[error("missing flag byte")]
    MissingFlag,
    #[error("flag byte must be 0 or 1, got {0}")]
    BadFlag(u8),
    #[error("malformed varint at byte {offset}: {source}")]
    BadVarint {
        offset: usize,
        #[source]
        source: leb128::read::Error,
    },
    #[error("cannot compute a compression ratio for an empty string")]
    EmptyInput,
}

/// Run-length form of a bit string.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RunLengthCode {
    pub leading_zero: bool,
    pub runs: Vec<u64>,
}

impl RunLengthCode {
    pub fn validate(&self) -> Result<(), RleError> {
        match self.runs.iter().position(|&r| r == 0) {
            Some(index) => Err(RleError::ZeroRun { index }),
            None => Ok(()),
        }
    }

    /// Total number of source bits.
    pub fn source_len(&self) -> u64 {
        self.runs.iter().sum()
    }

    /// Flag byte followed by LEB128 run lengths.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = vec![self.leading_zero as u8];
        for &run in &self.runs {
            leb128::write::unsigned(&mut out, run).expect("writing to a Vec cannot fail");
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, RleError> {
        let (&flag, mut rest) = bytes.split_first().ok_or(RleError::MissingFlag)?;
        let leading_zero = match flag {
            0 => false,
            1 => true,
            other => return Err(RleError::BadFlag(other)),
        };
        let mut runs = Vec::new();
        while !rest.is_empty() {
            let offset = bytes.len() - rest.len();
            let run = leb128::read::unsigned(&mut rest)
                .map_err(|source| RleError::BadVarint { offset, source })?;
            runs.push(run);
        }
        let code = Self { leading_zero, runs };
        code.validate()?;
        Ok(code)
    }

    /// Contents of an `.rlc` file.
    pub fn to_file_bytes(&self) -> Vec<u8> {
        let mut out = RLC_MAGIC.to_vec();
        out.extend(self.to_bytes());
        out
    }

    pub fn from_file_bytes(bytes: &[u8]) -> Result<Self, RleError> {
        let body = bytes.strip_prefix(RLC_MAGIC.as_slice()).ok_or(RleError::BadMagic)?;
        Self::from_bytes(body)
    }

    /// Size of [`Self::to_bytes`] in bits.
    pub fn serialized_bits(&self) -> u64 {
        let varint_bytes: u64 = self.runs.iter().map(|&r| varint_len(r)).sum();
        8 * (1 + varint_bytes)
    }
}

fn varint_len(value: u64) -> u64 {
    let significant = 64 - value.leading_zeros().min(63) as u64;
    significant.div_ceil(7)
}

pub fn encode(x: &BitString) -> RunLengthCode {
    let mut bits = x.iter();
    let Some(first) = bits.next() else {
        return RunLengthCode::default();
    };
    let mut runs = Vec::new();
    let mut current = first;
    let mut run = 1u64;
    for bit in bits {
        if bit == current {
            run += 1;
        } else {
            runs.push(run);
            current = bit;
            run = 1;
        }
    }
    runs.push(run);
    RunLengthCode {
        leading_zero: !first,
        runs,
    }
}

pub fn decode(code: &RunLengthCode) -> Result<BitString, RleError> {
    code.validate()?;
    let mut builder = BitStringBuilder::with_capacity(code.source_len() as usize);
    let mut bit = !code.leading_zero;
    for &run in &code.runs {
        let word = if bit { u64::MAX } else { 0 };
        let mut left = run;
        while left > 0 {
            let width = left.min(64);
            builder.push_word(word, width as usize);
            left -= width;
        }
        bit = !bit;
    }
    Ok(builder.finish())
}

/// Serialized code size over source size, both in bits.
pub fn compression_ratio(x: &BitString) -> Result<f64, RleError> {
    if x.is_empty() {
        return Err(RleError::EmptyInput);
    }
    Ok(encode(x).serialized_bits() as f64 / x.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// The biased measurement record, 64 bits with a 1:99-style zero rate.
    const BIASED: &str = "1111111011111111111011111111011111111111111111111111101111111010";

    #[test]
    fn biased_record_runs() {
        let code = encode(&BitString::from_ascii(BIASED));
        assert!(!code.leading_zero);
        assert_eq!(code.runs, vec![7, 1, 11, 1, 8, 1, 24, 1, 7, 1, 1, 1]);
        // One-run-per-decimal rendering of the ones, zeros written as 0.
        let ones: String = code.runs.iter().step_by(2).map(|r| format!("{r}0")).collect();
        assert_eq!(ones, "70110802407010");
    }

    #[test]
    fn encode_examples() {
        let code = encode(&BitString::from_ascii("0000"));
        assert_eq!(code, RunLengthCode { leading_zero: true, runs: vec![4] });
        assert_eq!(encode(&BitString::empty()), RunLengthCode::default());
    }

    #[test]
    fn decode_examples() {
        let d = |leading_zero, runs: &[u64]| {
            decode(&RunLengthCode { leading_zero, runs: runs.to_vec() })
        };
        assert_eq!(d(false, &[2, 1, 2]).unwrap().to_string(), "11011");
        assert_eq!(d(true, &[1]).unwrap().to_string(), "0");
        assert!(d(true, &[]).unwrap().is_empty());
        assert!(matches!(d(false, &[3, 0, 1]), Err(RleError::ZeroRun { index: 1 })));
    }

    #[test]
    fn exhaustive_round_trip_to_sixteen_bits() {
        for len in 0..=16usize {
            for value in 0u64..(1 << len) {
                let x = BitString::from_bits((0..len).rev().map(|i| (value >> i) & 1 == 1));
                let code = encode(&x);
                assert_eq!(code.source_len(), len as u64);
                assert_eq!(decode(&code).unwrap(), x);
            }
        }
    }

    #[test]
    fn byte_format() {
        let code = RunLengthCode { leading_zero: true, runs: vec![1, 127, 128, 300] };
        let bytes = code.to_bytes();
        assert_eq!(bytes, vec![1, 1, 127, 0x80, 0x01, 0xac, 0x02]);
        assert_eq!(code.serialized_bits(), 8 * bytes.len() as u64);
        assert_eq!(RunLengthCode::from_bytes(&bytes).unwrap(), code);
        let file = code.to_file_bytes();
        assert_eq!(&file[..4], b"RLC1");
        assert_eq!(RunLengthCode::from_file_bytes(&file).unwrap(), code);
    }

    #[test]
    fn malformed_bytes() {
        assert!(matches!(RunLengthCode::from_bytes(&[]), Err(RleError::MissingFlag)));
        assert!(matches!(RunLengthCode::from_bytes(&[2]), Err(RleError::BadFlag(2))));
        assert!(matches!(RunLengthCode::from_bytes(&[0, 0x80]), Err(RleError::BadVarint { offset: 1, .. })));
        assert!(matches!(RunLengthCode::from_bytes(&[0, 0]), Err(RleError::ZeroRun { index: 0 })));
        assert!(matches!(RunLengthCode::from_file_bytes(b"RLC0\0"), Err(RleError::BadMagic)));
    }

    #[test]
    fn ratios() {
        // One 1,000,000-bit run: flag byte + 3-byte varint.
        let ones = BitString::repeat(true, 1_000_000);
        assert_eq!(compression_ratio(&ones).unwrap(), 32.0 / 1_000_000.0);
        // 1024 runs of one bit each, one byte per run plus the flag.
        let alternating = BitString::from_ascii(&"01".repeat(512));
        assert_eq!(compression_ratio(&alternating).unwrap(), 8.0 * 1025.0 / 1024.0);
        let balanced = crate::generators::bernoulli_from_state(0.5, 3, 1 << 20).unwrap();
        let r = compression_ratio(&balanced).unwrap();
        assert!(r > 3.5 && r < 4.5, "ratio {r}");
        assert!(matches!(compression_ratio(&BitString::empty()), Err(RleError::EmptyInput)));
    }

    #[test]
    fn all_ones_ratio_decreases_within_varint_width() {
        // The ratio is (8 + 8·w) / L where w is the varint width of L; it
        // drops strictly with L inside each width band and jumps up by 8/L
        // where the width grows (L = 128, 16384, ...).
        let ratio = |l: usize| compression_ratio(&BitString::repeat(true, l)).unwrap();
        for l in 1..20_000usize {
            if varint_len(l as u64) == varint_len(l as u64 + 1) {
                assert!(ratio(l + 1) < ratio(l), "L = {l}");
            }
        }
        assert!(ratio(128) > ratio(127));
    }

    proptest! {
        #[test]
        fn random_round_trip(v in proptest::collection::vec(any::<bool>(), 0..2000)) {
            let x = BitString::from_bits(v);
            let code = encode(&x);
            prop_assert_eq!(code.source_len(), x.len() as u64);
            prop_assert!(code.runs.iter().all(|&r| r >= 1));
            prop_assert_eq!(RunLengthCode::from_bytes(&code.to_bytes()).unwrap(), code.clone());
            prop_assert_eq!(decode(&code).unwrap(), x);
        }
    }
}
