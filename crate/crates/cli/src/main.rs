use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use stlsan::codecs::{self, BitSequence, Carrier, ChannelId, CodecError};
use stlsan::eval::{self, EvalError, SanitizerMode, TrialConfig};
use stlsan::sanitizer::{sanitize_all, OutputFormat, RandomSource};
use stlsan::stl::{self, StlError, StlFormat};

#[derive(Debug, Parser)]
#[command(name = "stlsan", version, about = "Embed, extract and sanitize stego channels in STL files")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Channel {
    Facet,
    Vertex,
    Normal,
    Number,
    Whitespace,
    RobustPair,
}

impl From<Channel> for ChannelId {
    fn from(c: Channel) -> Self {
        match c {
            Channel::Facet => ChannelId::Facet,
            Channel::Vertex => ChannelId::Vertex,
            Channel::Normal => ChannelId::Normal,
            Channel::Number => ChannelId::Number,
            Channel::Whitespace => ChannelId::Whitespace,
            Channel::RobustPair => ChannelId::RobustPair,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Ascii,
    Binary,
    Preserve,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Ascii => OutputFormat::Ascii,
            Format::Binary => OutputFormat::Binary,
            Format::Preserve => OutputFormat::Preserve,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Sanitizer {
    Channel,
    Full,
    None,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Hide a payload in one channel of an STL file
    Embed {
        input: PathBuf,
        #[arg(long, value_enum)]
        channel: Channel,
        /// File of raw payload bytes (MSB first)
        #[arg(long, conflicts_with = "hex", required_unless_present = "hex")]
        payload: Option<PathBuf>,
        /// Payload given as a hex string
        #[arg(long)]
        hex: Option<String>,
        /// Embed only the first N payload bits
        #[arg(long)]
        bits: Option<usize>,
        #[arg(long, value_enum, default_value = "preserve")]
        format: Format,
        #[arg(short = 'o')]
        output: PathBuf,
    },
    /// Read payload bits out of one channel
    Extract {
        input: PathBuf,
        #[arg(long, value_enum)]
        channel: Channel,
        /// Number of bits to read (default: full capacity)
        #[arg(long)]
        bits: Option<usize>,
        /// Output file for the payload bytes (default: stdout)
        #[arg(short = 'o')]
        output: Option<PathBuf>,
    },
    /// Erase every stego channel while keeping the geometry
    Sanitize {
        input: PathBuf,
        #[arg(short = 'o')]
        output: PathBuf,
        #[arg(long, value_enum, default_value = "preserve")]
        format: Format,
        /// Reproducible randomness; requires --insecure-seed
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        insecure_seed: bool,
    },
    /// Print per-channel capacity
    Capacity { input: PathBuf },
    /// Run a survivability experiment and write CSV and SVG results
    Evaluate {
        #[arg(long, value_enum, default_value = "facet")]
        channel: Channel,
        #[arg(long, default_value_t = eval::DEFAULT_PAYLOAD_BITS)]
        bits: usize,
        #[arg(long, default_value_t = eval::DEFAULT_TRIALS)]
        trials: usize,
        #[arg(long)]
        seed: Option<u64>,
        /// Carrier STL (default: generated 5120-facet icosphere)
        #[arg(long)]
        carrier: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "channel")]
        sanitizer: Sanitizer,
        /// Output directory
        #[arg(short = 'o')]
        output: PathBuf,
    },
    /// Write a generated icosphere test mesh
    GenMesh {
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(0..=6))]
        subdivisions: u32,
        #[arg(long, value_enum, default_value = "binary")]
        format: Format,
        #[arg(short = 'o')]
        output: PathBuf,
    },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Format(String),
    #[error("{0}")]
    Capacity(String),
    #[error("{0}")]
    Gates(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Format(_) => 2,
            CliError::Capacity(_) => 3,
            CliError::Gates(_) => 4,
        }
    }
}

impl From<StlError> for CliError {
    fn from(e: StlError) -> Self {
        CliError::Format(e.to_string())
    }
}

impl From<CodecError> for CliError {
    fn from(e: CodecError) -> Self {
        match e {
            CodecError::Stl(s) => s.into(),
            CodecError::UnknownChannel(_) => CliError::Usage(e.to_string()),
            _ => CliError::Capacity(e.to_string()),
        }
    }
}

impl From<EvalError> for CliError {
    fn from(e: EvalError) -> Self {
        match e {
            EvalError::Codec(c) => c.into(),
            EvalError::Stl(s) => s.into(),
            EvalError::NoTrials => CliError::Usage(e.to_string()),
            EvalError::Io { .. } => CliError::Format(e.to_string()),
        }
    }
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|e| CliError::Format(format!("cannot read {}: {e}", path.display())))
}

/// Write via a temp file in the target directory, then rename over the target.
fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let fail = |e: io::Error| CliError::Format(format!("cannot write {}: {e}", path.display()));
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(fail)?;
    tmp.write_all(bytes).map_err(fail)?;
    tmp.as_file().sync_all().map_err(fail)?;
    tmp.persist(path).map_err(|e| fail(e.error))?;
    Ok(())
}

fn parse_hex(s: &str) -> Result<Vec<u8>, CliError> {
    let digits = s.strip_prefix("0x").unwrap_or(s);
    hex::decode(digits).map_err(|e| CliError::Usage(format!("invalid --hex payload: {e}")))
}

fn load_carrier(path: &Path) -> Result<Carrier, CliError> {
    Ok(Carrier::from_bytes(&read(path)?)?)
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Embed {
            input,
            channel,
            payload,
            hex,
            bits,
            format,
            output,
        } => {
            let channel = ChannelId::from(channel);
            let bytes = match (payload, hex) {
                (Some(p), _) => read(&p)?,
                (None, Some(h)) => parse_hex(&h)?,
                (None, None) => return Err(CliError::Usage("one of --payload or --hex is required".into())),
            };
            let payload = BitSequence::from_bytes_msb(&bytes, bits);
            let carrier = load_carrier(&input)?;
            let out_format = OutputFormat::from(format).resolve(carrier.format());
            let embedded = codecs::embed(&carrier, channel, &payload)?;
            if channel.is_text_only() && out_format == StlFormat::Binary {
                return Err(CliError::Usage(format!("{channel} channel output must be ASCII")));
            }
            write_atomic(&output, &embedded.to_bytes(out_format))?;
            eprintln!("embedded {} bits into {channel} channel", payload.len());
        }
        Command::Extract {
            input,
            channel,
            bits,
            output,
        } => {
            let channel = ChannelId::from(channel);
            let carrier = load_carrier(&input)?;
            let bits = match bits {
                Some(b) => b,
                None => codecs::capacity(&carrier, channel)?,
            };
            let payload = codecs::extract(&carrier, channel, bits)?.to_bytes_msb();
            match output {
                Some(path) => write_atomic(&path, &payload)?,
                None => io::stdout()
                    .write_all(&payload)
                    .map_err(|e| CliError::Format(format!("cannot write payload: {e}")))?,
            }
        }
        Command::Sanitize {
            input,
            output,
            format,
            seed,
            insecure_seed,
        } => {
            let source = match (seed, insecure_seed) {
                (Some(s), true) => RandomSource::Seeded(s),
                (Some(_), false) => {
                    return Err(CliError::Usage(
                        "--seed makes sanitizing predictable; pass --insecure-seed to allow it".into(),
                    ))
                }
                (None, _) => RandomSource::Cryptographic,
            };
            let (bytes, report) = sanitize_all(&read(&input)?, &source, format.into())?;
            write_atomic(&output, &bytes)?;
            eprintln!("{report}");
        }
        Command::Capacity { input } => {
            let carrier = load_carrier(&input)?;
            println!("format: {}", carrier.format());
            println!("facets: {}", carrier.model().len());
            println!("{:<12} {:>6} {:>7} {:>12}", "channel", "ascii", "binary", "capacity");
            for ch in ChannelId::ALL {
                let cap = match codecs::capacity(&carrier, ch) {
                    Ok(c) => c.to_string(),
                    Err(CodecError::ChannelUnavailable { .. }) => "unavailable".to_string(),
                    Err(e) => return Err(e.into()),
                };
                let binary = if ch.is_text_only() { "no" } else { "yes" };
                println!("{:<12} {:>6} {:>7} {:>12}", ch.name(), "yes", binary, cap);
            }
        }
        Command::Evaluate {
            channel,
            bits,
            trials,
            seed,
            carrier,
            sanitizer,
            output,
        } => {
            let channel = ChannelId::from(channel);
            let carrier = match carrier {
                Some(path) => load_carrier(&path)?,
                None => eval::default_carrier(channel),
            };
            let config = TrialConfig {
                channel,
                payload_bits: bits,
                trials,
                seed,
                sanitizer: match sanitizer {
                    Sanitizer::Channel => SanitizerMode::Channel,
                    Sanitizer::Full => SanitizerMode::Full,
                    Sanitizer::None => SanitizerMode::None,
                },
            };
            let (matrix, stats) = eval::run_experiment(config, &carrier)?;
            eval::emit_csv(&matrix, &stats, &output)?;
            eval::emit_histogram(&stats, &output.join("histogram.svg"))?;

            let show = |v: Option<f64>| v.map_or("n/a".to_string(), |v| format!("{v:.3}"));
            println!("channel: {channel}, bits: {bits}, trials: {trials}");
            println!("mean survival %: {}", show(stats.mean_pct));
            println!("variance: {}", show(stats.variance_pct2));
            println!("survival % of 0-bits: {}", show(stats.value_mean_pct(false)));
            println!("survival % of 1-bits: {}", show(stats.value_mean_pct(true)));
            if let Some(a) = stats.arrangement_mean_pct() {
                println!("arrangement unchanged %: {a:.3}");
            }
            let results = eval::gates(&config, &stats);
            for g in &results {
                println!("[{}] {}: {}", if g.passed { "PASS" } else { "FAIL" }, g.name, g.detail);
            }
            let failed = results.iter().filter(|g| !g.passed).count();
            if failed > 0 {
                return Err(CliError::Gates(format!("{failed} statistical gate(s) failed")));
            }
        }
        Command::GenMesh {
            subdivisions,
            format,
            output,
        } => {
            let model = stl::generate_test_mesh(subdivisions);
            let format = OutputFormat::from(format).resolve(StlFormat::Binary);
            write_atomic(&output, &stl::write(&model, format))?;
            eprintln!("wrote {} facets", model.len());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("stlsan: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
