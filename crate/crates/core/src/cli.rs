//! The `randcert` command line.
//!
//! Exit codes: 0 success or Borel pass, 1 Borel fail, 2 usage error,
//! 3 input, format or I/O error. Reports go to standard output as JSON;
//! diagnostics go to standard error.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bitseq::{extract_bits_from_timestamps, parse_bits_exact, BitFormat, TimestampSeries};
use crate::borel::borel_test;
use crate::generators::SourceSpec;
use crate::omega::{omega_lower_bound, omega_monte_carlo};
use crate::rle::{self, RunLengthCode};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "randcert", version, about = "Borel normality testing and Chaitin Omega bounds")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a reference bit sequence.
    Gen(GenArgs),
    /// Run the Borel normality test; exit 0 on pass, 1 on fail.
    Test(TestArgs),
    /// Run-length compress a bit file to .rlc, or decompress with -d.
    Compress(CompressArgs),
    /// Lower-bound the TinyPF halting probability.
    #[command(subcommand)]
    Omega(OmegaCommand),
    /// Extract bits from a detection-timestamp file.
    Ingest(IngestArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Ascii01,
    #[value(name = "packed_msb", alias = "packed-msb")]
    PackedMsb,
    Hex,
}

impl From<FormatArg> for BitFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Ascii01 => BitFormat::Ascii01,
            FormatArg::PackedMsb => BitFormat::PackedMsb,
            FormatArg::Hex => BitFormat::Hex,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Champernowne,
    Bernoulli,
    Prng,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    /// Source kind; alternatively give a full --spec line.
    #[arg(required_unless_present = "spec", conflicts_with = "spec")]
    pub kind: Option<KindArg>,
    /// Single-line source description, e.g. "kind=bernoulli p=0.99 seed=42 len=1048576".
    #[arg(long, conflicts_with_all = ["len", "p", "seed", "theta", "amp0"])]
    pub spec: Option<String>,
    #[arg(long, required_unless_present = "spec")]
    pub len: Option<usize>,
    /// Probability of a 1 (bernoulli).
    #[arg(long, conflicts_with = "amp0")]
    pub p: Option<f64>,
    /// Amplitude of |0⟩; requires --amp1. Sets p = amp1².
    #[arg(long, requires = "amp1", allow_negative_numbers = true)]
    pub amp0: Option<f64>,
    #[arg(long, requires = "amp0", allow_negative_numbers = true)]
    pub amp1: Option<f64>,
    /// Relative phase of the prepared state (metadata only).
    #[arg(long, allow_negative_numbers = true)]
    pub theta: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum, default_value = "ascii01")]
    pub format: FormatArg,
    /// Output path; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct InputArgs {
    /// Input path, or - for standard input.
    #[arg(long = "in", short = 'i')]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "ascii01")]
    pub format: FormatArg,
    /// Number of meaningful bits when the input is padded (packed_msb, hex).
    #[arg(long)]
    pub bit_length: Option<usize>,
}

#[derive(Args, Debug)]
pub struct TestArgs {
    #[command(flatten)]
    pub input: InputArgs,
}

#[derive(Args, Debug)]
pub struct CompressArgs {
    /// Input path, or - for standard input.
    #[arg(long = "in", short = 'i')]
    pub input: PathBuf,
    #[arg(long, short = 'o')]
    pub out: PathBuf,
    /// Format of the uncompressed side.
    #[arg(long, value_enum, default_value = "packed_msb")]
    pub format: FormatArg,
    #[arg(long, conflicts_with = "decompress")]
    pub bit_length: Option<usize>,
    /// Read an .rlc file and write the bits in --format.
    #[arg(long, short = 'd')]
    pub decompress: bool,
}

#[derive(Subcommand, Debug)]
pub enum OmegaCommand {
    /// Exact lower bound by exhaustive enumeration.
    Enumerate {
        #[arg(long)]
        max_len: usize,
        #[arg(long)]
        budget: u64,
    },
    /// Coin-flip Monte Carlo estimate.
    Montecarlo {
        #[arg(long)]
        seeds: u64,
        #[arg(long, default_value_t = 6)]
        max_flips: usize,
        #[arg(long, default_value_t = 100)]
        budget: u64,
        /// Seed of the first draw; draw i uses first_seed + i.
        #[arg(long, default_value_t = 0)]
        first_seed: u64,
    },
}

#[derive(Args, Debug)]
pub struct IngestArgs {
    /// Timestamp file, one unsigned integer per line, or - for standard input.
    #[arg(long = "in", short = 'i')]
    pub input: PathBuf,
    #[arg(long, short = 'o')]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "ascii01")]
    pub format: FormatArg,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Input(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Input(_) => EXIT_INPUT,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Input(m) => m,
        }
    }
}

fn input_err(e: impl std::fmt::Display) -> CliError {
    CliError::Input(e.to_string())
}

fn usage_err(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

fn read_input(path: &Path) -> Result<Vec<u8>, CliError> {
    if path == Path::new("-") {
        let mut buf = Vec::new();
        io::stdin().read_to_end(&mut buf).map_err(input_err)?;
        return Ok(buf);
    }
    fs::read(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn write_output(path: Option<&Path>, bytes: &[u8], stdout: &mut dyn Write) -> Result<(), CliError> {
    match path {
        Some(path) => {
            fs::write(path, bytes).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
        }
        None => stdout.write_all(bytes).map_err(input_err),
    }
}

fn source_spec(args: &GenArgs) -> Result<SourceSpec, CliError> {
    if let Some(line) = &args.spec {
        return line.parse().map_err(usage_err);
    }
    let length = args.len.ok_or_else(|| usage_err("--len is required"))?;
    let seed = args.seed.unwrap_or(0);
    let theta = args.theta.unwrap_or(0.0);
    let spec = match args.kind.ok_or_else(|| usage_err("source kind is required"))? {
        KindArg::Champernowne => SourceSpec::champernowne(length),
        KindArg::Prng => SourceSpec::prng(seed, length),
        KindArg::Bernoulli => match (args.p, args.amp0, args.amp1) {
            (Some(p), _, _) => SourceSpec {
                phase_theta: theta,
                ..SourceSpec::bernoulli(p, seed, length)
            },
            (None, Some(a0), Some(a1)) => {
                SourceSpec::from_state(a0, a1, theta, seed, length).map_err(usage_err)?
            }
            _ => return Err(usage_err("bernoulli needs --p or --amp0/--amp1")),
        },
    };
    spec.validate().map_err(usage_err)?;
    Ok(spec)
}

fn cmd_gen(args: &GenArgs, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let spec = source_spec(args)?;
    let bits = spec.generate().map_err(usage_err)?;
    write_output(args.out.as_deref(), &bits.render(args.format.into()), stdout)?;
    Ok(EXIT_OK)
}

fn cmd_test(args: &TestArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, CliError> {
    let raw = read_input(&args.input.input)?;
    let bits = parse_bits_exact(&raw, args.input.format.into(), args.input.bit_length).map_err(input_err)?;
    let report = borel_test(&bits).map_err(input_err)?;
    writeln!(stdout, "{}", report.to_json()).map_err(input_err)?;
    let _ = writeln!(stderr, "{report}");
    Ok(if report.verdict { EXIT_OK } else { EXIT_FAIL })
}

fn cmd_compress(args: &CompressArgs, stderr: &mut dyn Write) -> Result<i32, CliError> {
    let raw = read_input(&args.input)?;
    let format = args.format.into();
    if args.decompress {
        let code = RunLengthCode::from_file_bytes(&raw).map_err(input_err)?;
        let bits = rle::decode(&code).map_err(input_err)?;
        write_output(Some(&args.out), &bits.render(format), &mut io::sink())?;
    } else {
        let bits = parse_bits_exact(&raw, format, args.bit_length).map_err(input_err)?;
        let code = rle::encode(&bits);
        write_output(Some(&args.out), &code.to_file_bytes(), &mut io::sink())?;
        if !bits.is_empty() {
            let ratio = rle::compression_ratio(&bits).map_err(input_err)?;
            let _ = writeln!(stderr, "{} bits -> {} runs, ratio {ratio:.6}", bits.len(), code.runs.len());
        }
    }
    Ok(EXIT_OK)
}

fn cmd_omega(command: &OmegaCommand, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let json = match *command {
        OmegaCommand::Enumerate { max_len, budget } => {
            omega_lower_bound(max_len, budget).map_err(usage_err)?.to_json()
        }
        OmegaCommand::Montecarlo {
            seeds,
            max_flips,
            budget,
            first_seed,
        } => {
            let outcome = omega_monte_carlo(seeds, max_flips, budget, first_seed).map_err(usage_err)?;
            serde_json::to_string(&outcome).map_err(input_err)?
        }
    };
    writeln!(stdout, "{json}").map_err(input_err)?;
    Ok(EXIT_OK)
}

fn cmd_ingest(args: &IngestArgs, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let raw = read_input(&args.input)?;
    let text = String::from_utf8(raw).map_err(|_| input_err("timestamp file is not UTF-8"))?;
    let series = TimestampSeries::parse(&text).map_err(input_err)?;
    let bits = extract_bits_from_timestamps(&series).map_err(input_err)?;
    write_output(args.out.as_deref(), &bits.render(args.format.into()), stdout)?;
    Ok(EXIT_OK)
}

/// Parses `args` (including the program name) and executes the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(config) => config,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };
    let result = match &config.command {
        Command::Gen(args) => cmd_gen(args, stdout),
        Command::Test(args) => cmd_test(args, stdout, stderr),
        Command::Compress(args) => cmd_compress(args, stderr),
        Command::Omega(command) => cmd_omega(command, stdout),
        Command::Ingest(args) => cmd_ingest(args, stdout),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "randcert: {}", e.message());
            e.code()
        }
    }
}

/// Entry point for the binary.
pub fn main() -> i32 {
    let stdout = io::stdout();
    let stderr = io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}
