//! Randomness certification for finite bit sequences.
//!
//! - [`bitseq`]: packed bit strings, the `ascii01` / `packed_msb` / `hex`
//!   formats, and bits from photon detection timestamps.
//! - [`generators`]: Champernowne, Bernoulli (measured qubit state) and
//!   uniform reference sources.
//! - [`borel`]: block counting and the Borel normality verdict.
//! - [`rle`]: run-length coding and compression ratios.
//! - [`omega`]: the TinyPF prefix-free machine, Kraft sums and exact lower
//!   bounds on its halting probability.
//! - [`cli`]: the `randcert` command line.
//!
//! Runnable walkthroughs live in `examples/`; see the README for the list.

pub mod bitseq;
pub mod borel;
pub mod cli;
pub mod generators;
pub mod omega;
pub mod rle;

pub use bitseq::{parse_bits, parse_bits_exact, BitFormat, BitString, TimestampSeries};
pub use borel::{borel_test, count_blocks, BorelReport};
pub use generators::{champernowne, SourceSpec};
pub use omega::{omega_lower_bound, Dyadic, OmegaEstimate};
