//! Packed bit strings, the three on-disk bit formats, and bit extraction
//! from detection-time streams.
//!
//! Bits are stored most-significant-first inside 64-bit words: bit `i` of a
//! [`BitString`] lives in word `i / 64` at shift `63 - i % 64`. Bits past the
//! logical length are always zero.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

const WORD_BITS: usize = 64;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum BitSeqError {
    #[error("invalid character {ch:?} at byte offset {offset} for {format} input")]
    InvalidCharacter {
        ch: char,
        offset: usize,
        format: BitFormat,
    },
    #[error("requested range {start}..{end} exceeds bit length {len}")]
    OutOfRange { start: usize, end: usize, len: usize },
    #[error("declared bit length {declared} exceeds the {available} bits present")]
    BitLengthTooLarge { declared: usize, available: usize },
    #[error("timestamp series needs at least 3 entries, got {0}")]
    TooFewTimestamps(usize),
    #[error("timestamps not monotone: entry {index} ({value}) is below its predecessor ({previous})")]
    NonMonotone {
        index: usize,
        previous: u64,
        value: u64,
    },
    #[error("line {line}: {text:?} is not an unsigned decimal integer")]
    BadTimestamp { line: usize, text: String },
    #[error("unknown bit format {0:?} (expected ascii01, packed_msb or hex)")]
    UnknownFormat(String),
}

/// Serialized representation of a bit string.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BitFormat {
    /// `'0'`/`'1'` characters; ASCII whitespace is ignored.
    Ascii01,
    /// Raw bytes, most significant bit of each byte first.
    PackedMsb,
    /// Hex digits, each nibble expanded most significant bit first; ASCII
    /// whitespace is ignored.
    Hex,
}

impl BitFormat {
    pub const ALL: [BitFormat; 3] = [BitFormat::Ascii01, BitFormat::PackedMsb, BitFormat::Hex];

    pub fn name(self) -> &'static str {
        match self {
            BitFormat::Ascii01 => "ascii01",
            BitFormat::PackedMsb => "packed_msb",
            BitFormat::Hex => "hex",
        }
    }
}

impl fmt::Display for BitFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BitFormat {
    type Err = BitSeqError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ascii01" => Ok(BitFormat::Ascii01),
            "packed_msb" | "packed" => Ok(BitFormat::PackedMsb),
            "hex" => Ok(BitFormat::Hex),
            other => Err(BitSeqError::UnknownFormat(other.to_string())),
        }
    }
}

/// An immutable, finite sequence of bits.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitString {
    words: Vec<u64>,
    len: usize,
}

impl BitString {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds a bit string from booleans in order.
    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut builder = BitStringBuilder::new();
        for bit in bits {
            builder.push(bit);
        }
        builder.finish()
    }

    /// Parses a `'0'`/`'1'` literal, panicking on any other character.
    /// Intended for constants and tests; use [`parse_bits`] for untrusted input.
    pub fn from_ascii(literal: &str) -> Self {
        parse_bits(literal.as_bytes(), BitFormat::Ascii01).expect("invalid bit literal")
    }

    /// `len` copies of `bit`.
    pub fn repeat(bit: bool, len: usize) -> Self {
        let fill = if bit { u64::MAX } else { 0 };
        let mut words = vec![fill; len.div_ceil(WORD_BITS)];
        let tail = len % WORD_BITS;
        if tail != 0 {
            if let Some(last) = words.last_mut() {
                *last &= !0u64 << (WORD_BITS - tail);
            }
        }
        Self { words, len }
    }

    pub(crate) fn from_words(mut words: Vec<u64>, len: usize) -> Self {
        words.truncate(len.div_ceil(WORD_BITS));
        words.resize(len.div_ceil(WORD_BITS), 0);
        let tail = len % WORD_BITS;
        if tail != 0 {
            if let Some(last) = words.last_mut() {
                *last &= !0u64 << (WORD_BITS - tail);
            }
        }
        Self { words, len }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Backing words, msb-first, zero-padded past `len`.
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn get(&self, index: usize) -> Result<bool, BitSeqError> {
        if index >= self.len {
            return Err(BitSeqError::OutOfRange {
                start: index,
                end: index + 1,
                len: self.len,
            });
        }
        Ok(self.bit_unchecked(index))
    }

    #[inline]
    fn bit_unchecked(&self, index: usize) -> bool {
        (self.words[index / WORD_BITS] >> (WORD_BITS - 1 - index % WORD_BITS)) & 1 == 1
    }

    /// Reads `width` bits (1..=64) starting at `start` as an unsigned integer,
    /// first bit most significant. Caller guarantees `start + width <= len`.
    #[inline]
    pub(crate) fn read_bits(&self, start: usize, width: usize) -> u64 {
        debug_assert!((1..=64).contains(&width) && start + width <= self.len);
        let word = start / WORD_BITS;
        let offset = start % WORD_BITS;
        let hi = self.words[word] as u128;
        let lo = self.words.get(word + 1).copied().unwrap_or(0) as u128;
        let window = (hi << 64) | lo;
        ((window << offset) >> (128 - width)) as u64
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.bit_unchecked(i))
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Contiguous sub-sequence `[start, start + len)` as an independent value.
    pub fn slice(&self, start: usize, len: usize) -> Result<BitString, BitSeqError> {
        let end = start.checked_add(len).ok_or(BitSeqError::OutOfRange {
            start,
            end: usize::MAX,
            len: self.len,
        })?;
        if end > self.len {
            return Err(BitSeqError::OutOfRange {
                start,
                end,
                len: self.len,
            });
        }
        let mut builder = BitStringBuilder::with_capacity(len);
        let mut pos = start;
        while pos < end {
            let width = (end - pos).min(WORD_BITS);
            builder.push_word(self.read_bits(pos, width), width);
            pos += width;
        }
        Ok(builder.finish())
    }

    pub fn is_prefix_of(&self, other: &BitString) -> bool {
        self.len <= other.len && other.slice(0, self.len).is_ok_and(|p| &p == self)
    }

    /// Bitwise complement of every bit.
    pub fn complement(&self) -> BitString {
        BitString::from_words(self.words.iter().map(|w| !w).collect(), self.len)
    }

    pub fn concat(&self, other: &BitString) -> BitString {
        let mut builder = BitStringBuilder::with_capacity(self.len + other.len);
        builder.extend_from(self);
        builder.extend_from(other);
        builder.finish()
    }

    /// Serializes into `format`. Packed and hex output are zero-padded to the
    /// next byte or nibble; pass the original length back to [`parse_bits_exact`].
    pub fn render(&self, format: BitFormat) -> Vec<u8> {
        match format {
            BitFormat::Ascii01 => self.iter().map(|b| if b { b'1' } else { b'0' }).collect(),
            BitFormat::PackedMsb => {
                let mut out = Vec::with_capacity(self.len.div_ceil(8));
                for word in &self.words {
                    out.extend_from_slice(&word.to_be_bytes());
                }
                out.truncate(self.len.div_ceil(8));
                out
            }
            BitFormat::Hex => {
                const DIGITS: &[u8; 16] = b"0123456789abcdef";
                (0..self.len.div_ceil(4))
                    .map(|i| {
                        let start = i * 4;
                        let width = (self.len - start).min(4);
                        let nibble = self.read_bits(start, width) << (4 - width);
                        DIGITS[nibble as usize]
                    })
                    .collect()
            }
        }
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for bit in self.iter() {
            f.write_str(if bit { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len <= 128 {
            write!(f, "BitString({:?})", self.to_string())
        } else {
            write!(f, "BitString(len={})", self.len)
        }
    }
}

impl FromIterator<bool> for BitString {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        BitString::from_bits(iter)
    }
}

/// Append-only writer producing a [`BitString`].
#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct BitStringBuilder {
    words: Vec<u64>,
    len: usize,
}

impl BitStringBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(bits: usize) -> Self {
        Self {
            words: Vec::with_capacity(bits.div_ceil(WORD_BITS)),
            len: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn push(&mut self, bit: bool) {
        let offset = self.len % WORD_BITS;
        if offset == 0 {
            self.words.push(0);
        }
        if bit {
            *self.words.last_mut().unwrap() |= 1 << (WORD_BITS - 1 - offset);
        }
        self.len += 1;
    }

    /// Appends the low `width` bits of `value`, most significant first.
    #[inline]
    pub fn push_word(&mut self, value: u64, width: usize) {
        debug_assert!(width <= WORD_BITS);
        if width == 0 {
            return;
        }
        let value = if width == WORD_BITS {
            value
        } else {
            value & ((1u64 << width) - 1)
        };
        let offset = self.len % WORD_BITS;
        if offset == 0 {
            self.words.push(value << (WORD_BITS - width));
        } else {
            let free = WORD_BITS - offset;
            let last = self.words.last_mut().unwrap();
            if width <= free {
                *last |= value << (free - width);
            } else {
                *last |= value >> (width - free);
                self.words.push(value << (WORD_BITS - (width - free)));
            }
        }
        self.len += width;
    }

    pub fn extend_from(&mut self, bits: &BitString) {
        let mut pos = 0;
        while pos < bits.len {
            let width = (bits.len - pos).min(WORD_BITS);
            self.push_word(bits.read_bits(pos, width), width);
            pos += width;
        }
    }

    /// Copy of the bits written so far.
    pub fn snapshot(&self) -> BitString {
        BitString::from_words(self.words.clone(), self.len)
    }

    pub fn finish(self) -> BitString {
        BitString::from_words(self.words, self.len)
    }
}

/// Parses `raw` according to `format`. Empty input gives an empty string.
pub fn parse_bits(raw: &[u8], format: BitFormat) -> Result<BitString, BitSeqError> {
    match format {
        BitFormat::Ascii01 => {
            let mut builder = BitStringBuilder::with_capacity(raw.len());
            for (offset, &byte) in raw.iter().enumerate() {
                match byte {
                    b'0' => builder.push(false),
                    b'1' => builder.push(true),
                    b if b.is_ascii_whitespace() => {}
                    b => {
                        return Err(BitSeqError::InvalidCharacter {
                            ch: b as char,
                            offset,
                            format,
                        })
                    }
                }
            }
            Ok(builder.finish())
        }
        BitFormat::PackedMsb => {
            let words = raw
                .chunks(8)
                .map(|chunk| {
                    let mut buf = [0u8; 8];
                    buf[..chunk.len()].copy_from_slice(chunk);
                    u64::from_be_bytes(buf)
                })
                .collect();
            Ok(BitString::from_words(words, raw.len() * 8))
        }
        BitFormat::Hex => {
            let mut builder = BitStringBuilder::with_capacity(raw.len() * 4);
            for (offset, &byte) in raw.iter().enumerate() {
                if byte.is_ascii_whitespace() {
                    continue;
                }
                let nibble = (byte as char).to_digit(16).ok_or(BitSeqError::InvalidCharacter {
                    ch: byte as char,
                    offset,
                    format,
                })?;
                builder.push_word(nibble as u64, 4);
            }
            Ok(builder.finish())
        }
    }
}

/// Like [`parse_bits`], but keeps only the first `bit_length` bits when given.
/// Used for packed and hex data whose length is not a multiple of 8 or 4.
pub fn parse_bits_exact(
    raw: &[u8],
    format: BitFormat,
    bit_length: Option<usize>,
) -> Result<BitString, BitSeqError> {
    let bits = parse_bits(raw, format)?;
    match bit_length {
        None => Ok(bits),
        Some(declared) if declared > bits.len() => Err(BitSeqError::BitLengthTooLarge {
            declared,
            available: bits.len(),
        }),
        Some(declared) => bits.slice(0, declared),
    }
}

/// Event times in a fixed arbitrary unit, non-decreasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TimestampSeries {
    timestamps: Vec<u64>,
}

impl TimestampSeries {
    pub fn new(timestamps: Vec<u64>) -> Result<Self, BitSeqError> {
        if let Some(index) = timestamps.windows(2).position(|w| w[1] < w[0]) {
            return Err(BitSeqError::NonMonotone {
                index: index + 1,
                previous: timestamps[index],
                value: timestamps[index + 1],
            });
        }
        Ok(Self { timestamps })
    }

    /// One unsigned decimal integer per line; blank lines are skipped.
    pub fn parse(text: &str) -> Result<Self, BitSeqError> {
        let mut timestamps = Vec::new();
        for (line, raw) in text.lines().enumerate() {
            let trimmed = raw.trim();
            if trimmed.is_empty() {
                continue;
            }
            let value = trimmed.parse::<u64>().map_err(|_| BitSeqError::BadTimestamp {
                line: line + 1,
                text: trimmed.to_string(),
            })?;
            timestamps.push(value);
        }
        Self::new(timestamps)
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.timestamps
    }

    pub fn len(&self) -> usize {
        self.timestamps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.timestamps.is_empty()
    }
}

/// Converts detection times into bits by comparing consecutive, non-overlapping
/// pairs of inter-arrival gaps: a shorter first gap gives 1, a longer one 0, and
/// ties emit nothing. An unpaired trailing gap is dropped.
pub fn extract_bits_from_timestamps(series: &TimestampSeries) -> Result<BitString, BitSeqError> {
    let times = series.as_slice();
    if times.len() < 3 {
        return Err(BitSeqError::TooFewTimestamps(times.len()));
    }
    let gaps: Vec<u64> = times.windows(2).map(|w| w[1] - w[0]).collect();
    let mut builder = BitStringBuilder::with_capacity(gaps.len() / 2);
    for pair in gaps.chunks_exact(2) {
        match pair[0].cmp(&pair[1]) {
            std::cmp::Ordering::Less => builder.push(true),
            std::cmp::Ordering::Greater => builder.push(false),
            std::cmp::Ordering::Equal => {}
        }
    }
    Ok(builder.finish())
}
