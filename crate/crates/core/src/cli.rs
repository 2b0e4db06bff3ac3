//! `wdfa` command-line front end.
//!
//! Exit codes: 0 success, 1 invalid automaton, 2 bad parameters or guard
//! exceeded, 3 I/O or parse failure.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::RngCore;
use thiserror::Error;

use crate::automaton::{check_wheeler, Automaton, ParamError, Params, Transition};
use crate::bench::{self, BenchSink};
use crate::census::{self, CensusError};
use crate::format::{self, FileSink, FramedSink, Header, ParseError, PlainSink};
use crate::oracle::{self, OracleError, MAX_ENUM_CELLS};
use crate::shuffle::{DefaultRng, RngSource};
use crate::stream::{sample_stream, NullSink, Sink, StreamError, StreamStats};

/// Largest family `enumerate` will print.
pub const MAX_ENUM_OUTPUT: u64 = 100_000;
/// Largest automaton `--format dot` will render.
pub const MAX_DOT_STATES: u64 = 100;

#[derive(Debug, Parser)]
#[command(name = "wdfa", version, about = "Uniform random Wheeler DFAs: generate, count, verify")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample a uniform Wheeler DFA and write it as an edge list.
    Generate(GenerateArgs),
    /// Print the exact number of Wheeler DFAs.
    Count(CountArgs),
    /// Check that an edge-list file is a Wheeler DFA.
    Verify(VerifyArgs),
    /// Print every Wheeler DFA of a small family.
    Enumerate(EnumerateArgs),
    /// Measure sampler throughput.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct ParamArgs {
    /// Number of states.
    #[arg(short = 'n', long = "states")]
    pub n: u64,
    /// Number of transitions.
    #[arg(short = 'm', long = "transitions")]
    pub m: u64,
    /// Alphabet size.
    #[arg(short = 's', long = "sigma")]
    pub sigma: u64,
}

impl ParamArgs {
    fn params(&self) -> Params {
        Params::new(self.n, self.m, self.sigma)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Edges,
    Dot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SinkArg {
    /// Stream straight to the output.
    File,
    /// Discard transitions.
    Null,
    /// Buffer the automaton, then write it.
    Memory,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// RNG seed; drawn from OS entropy when omitted.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output path, or `-` for stdout.
    #[arg(short = 'o', long = "output", default_value = "-")]
    pub output: String,
    #[arg(long, value_enum, default_value_t = OutputFormat::Edges)]
    pub format: OutputFormat,
    /// Allow stdout when restarts are possible, framing them with
    /// `# restart` / `# commit` lines.
    #[arg(long)]
    pub raw_stream: bool,
    #[arg(long, value_enum, default_value_t = SinkArg::File)]
    pub sink: SinkArg,
    /// Give up after this many rejected attempts.
    #[arg(long)]
    pub max_attempts: Option<u64>,
}

#[derive(Debug, Args)]
pub struct CountArgs {
    #[arg(short = 'n', long = "states")]
    pub n: u64,
    #[arg(short = 'm', long = "transitions", conflicts_with_all = ["all_m", "bounds"])]
    pub m: Option<u64>,
    #[arg(short = 's', long = "sigma")]
    pub sigma: u64,
    /// Sum over every feasible number of transitions.
    #[arg(long, conflicts_with = "non_effective")]
    pub all_m: bool,
    /// Count automata over `sigma` labels that need not all be used.
    #[arg(long, conflicts_with = "bounds")]
    pub non_effective: bool,
    /// Print entropy bounds (in bits) next to the exact log2 of the count over all m.
    #[arg(long)]
    pub bounds: bool,
    /// Slack parameter of the upper bound, in (0, 1/2].
    #[arg(long, default_value_t = 0.5)]
    pub eps: f64,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Edge-list file, or `-` for stdin.
    pub path: PathBuf,
}

#[derive(Debug, Args)]
pub struct EnumerateArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(short = 'o', long = "output", default_value = "-")]
    pub output: String,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(short = 'n', long = "states", required_unless_present = "grid")]
    pub n: Option<u64>,
    #[arg(short = 'm', long = "transitions", required_unless_present = "grid")]
    pub m: Option<u64>,
    #[arg(short = 's', long = "sigma", default_value_t = 128)]
    pub sigma: u64,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Minimum number of generated automata per point.
    #[arg(long, default_value_t = 1)]
    pub runs: u64,
    /// Keep repeating a point until this much wall time has passed.
    #[arg(long, default_value_t = 0.0)]
    pub min_seconds: f64,
    #[arg(long, value_enum, default_value_t = SinkArg::Null)]
    pub sink: SinkArg,
    /// Output path for `--sink file`.
    #[arg(short = 'o', long = "output")]
    pub output: Option<PathBuf>,
    /// Run the scaling grid instead of a single point.
    #[arg(long, conflicts_with_all = ["n", "m"])]
    pub grid: bool,
    #[arg(long, default_value_t = 1 << 15)]
    pub base_n: u64,
    #[arg(long, default_value_t = 7)]
    pub n_steps: u32,
    #[arg(long, default_value_t = 8)]
    pub m_steps: u32,
    /// Write the grid CSV here instead of stdout.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(format!("I/O error: {e}"))
    }
}

impl From<ParamError> for CliError {
    fn from(e: ParamError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<CensusError> for CliError {
    fn from(e: CensusError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<StreamError> for CliError {
    fn from(e: StreamError) -> Self {
        match e {
            StreamError::Sink(e) => e.into(),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::Io(e.to_string())
    }
}

/// Entry point for the binary: real argv and standard streams.
pub fn main() -> i32 {
    let stdout = io::stdout();
    let stderr = io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                2
            } else {
                let _ = write!(out, "{}", e.render());
                0
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Generate(a) => generate(&a, out, err),
        Command::Count(a) => count(&a, out),
        Command::Verify(a) => verify(&a, out),
        Command::Enumerate(a) => enumerate(&a, out),
        Command::Bench(a) => run_bench(&a, out, err),
    };
    let flushed = out.flush();
    match result.and(flushed.map_err(CliError::from)) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "wdfa: {e}");
            e.exit_code()
        }
    }
}

fn entropy_seed() -> u64 {
    rand::rngs::OsRng.next_u64()
}

/// Warns when the linear expected-time guarantee does not apply.
fn warn_large_alphabet(p: Params, err: &mut dyn Write) {
    if p.m < 2 {
        return;
    }
    let limit = p.m as f64 / (p.m as f64).ln();
    if p.sigma as f64 > limit {
        let _ = writeln!(
            err,
            "wdfa: warning: sigma={} exceeds m/ln m={limit:.1}; the expected linear time bound holds only for sigma <= m/ln m",
            p.sigma
        );
    }
}

fn generate(a: &GenerateArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let p = a.params.params();
    p.validate()?;
    if a.format == OutputFormat::Dot && p.n > MAX_DOT_STATES {
        return Err(CliError::Usage(format!("--format dot supports at most {MAX_DOT_STATES} states")));
    }
    warn_large_alphabet(p, err);
    let seed = a.seed.unwrap_or_else(entropy_seed);
    let header = Header { n: p.n, m: p.m, sigma: p.sigma, seed: Some(seed) };
    let mut source = RngSource::<f64, DefaultRng>::seeded(seed);
    let mut sample = |sink: &mut dyn Sink| sample_stream(p, &mut source, sink, a.max_attempts);
    let to_stdout = a.output == "-";

    let stats: StreamStats = match (a.sink, a.format) {
        (SinkArg::Null, _) => sample(&mut NullSink::default())?,
        (SinkArg::Memory, _) | (SinkArg::File, OutputFormat::Dot) => {
            let mut edges: Vec<Transition> = Vec::with_capacity(p.m.min(1 << 24) as usize);
            let stats = sample(&mut edges)?;
            if to_stdout {
                write_collected(out, &header, a.format, edges)?;
            } else {
                let mut w = BufWriter::new(File::create(&a.output)?);
                write_collected(&mut w, &header, a.format, edges)?;
                w.flush()?;
            }
            stats
        }
        (SinkArg::File, OutputFormat::Edges) if !to_stdout => {
            sample(&mut FileSink::create(Path::new(&a.output), &header)?)?
        }
        (SinkArg::File, OutputFormat::Edges) => {
            let w = BufWriter::new(&mut *out);
            if a.raw_stream {
                sample(&mut FramedSink::new(w, &header)?)?
            } else if p.may_reject() {
                return Err(CliError::Usage(
                    "these parameters may need restarts, which stdout cannot undo; \
                     write to a file with -o <path>, or pass --raw-stream or --sink memory"
                        .into(),
                ));
            } else {
                sample(&mut PlainSink::new(w, &header)?)?
            }
        }
    };
    let _ = writeln!(err, "wdfa: {p} seed={seed} attempts={}", stats.attempts);
    Ok(())
}

fn write_collected(
    w: &mut dyn Write,
    header: &Header,
    fmt: OutputFormat,
    edges: Vec<Transition>,
) -> Result<(), CliError> {
    match fmt {
        OutputFormat::Edges => format::write_edge_list(w, header, &edges)?,
        OutputFormat::Dot => {
            let a = Automaton::new(header.n, header.sigma, edges)
                .map_err(|e| CliError::Invalid(e.to_string()))?;
            format::write_dot(w, header, &a)?;
        }
    }
    Ok(())
}

fn count(a: &CountArgs, out: &mut dyn Write) -> Result<(), CliError> {
    if a.bounds {
        let total = census::count_all_m(a.n, a.sigma)?;
        writeln!(out, "count={total}")?;
        writeln!(out, "log2_count={:.6}", census::log2_big::<f64>(&total))?;
        writeln!(out, "lower_bits={:.6}", census::lower_bound_bits::<f64>(a.n, a.sigma)?)?;
        match census::upper_bound_bits::<f64>(a.n, a.sigma, a.eps) {
            Ok(upper) => writeln!(out, "upper_bits={upper:.6}")?,
            Err(e) => writeln!(out, "upper_bits=NA\nupper_note={e}")?,
        }
        return Ok(());
    }
    let value = match (a.m, a.all_m, a.non_effective) {
        (_, true, _) => census::count_all_m(a.n, a.sigma)?,
        (Some(m), _, true) => census::count_wdfa_noneffective(a.n, m, a.sigma)?,
        (Some(m), _, false) => census::count_wdfa(a.n, m, a.sigma)?,
        (None, ..) => return Err(CliError::Usage("count needs -m, --all-m or --bounds".into())),
    };
    writeln!(out, "{value}")?;
    Ok(())
}

fn verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let parsed = if a.path.as_os_str() == "-" {
        format::parse_edge_list(io::stdin().lock())
    } else {
        let file = File::open(&a.path).map_err(|e| CliError::Io(format!("{}: {e}", a.path.display())))?;
        format::parse_edge_list(BufReader::new(file))
    }
    .map_err(|e| CliError::Io(format!("{}: {e}", a.path.display())))?;

    let found = parsed.transitions.len() as u64;
    let h = parsed.header;
    let automaton = Automaton::new(h.n, h.sigma, parsed.transitions).map_err(|e| invalid(out, e.to_string()))?;
    check_wheeler(&automaton).map_err(|v| invalid(out, v.to_string()))?;
    if found != h.m {
        return Err(invalid(out, format!("header declares m={} but the file has {found} transitions", h.m)));
    }
    writeln!(out, "VALID")?;
    Ok(())
}

fn invalid(out: &mut dyn Write, reason: String) -> CliError {
    let _ = writeln!(out, "INVALID: {reason}");
    CliError::Invalid(reason)
}

fn enumerate(a: &EnumerateArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let p = a.params.params();
    p.validate()?;
    if p.cells() > MAX_ENUM_CELLS {
        return Err(CliError::Usage(format!("enumerate needs n*sigma <= {MAX_ENUM_CELLS}")));
    }
    let size = census::count_wdfa(p.n, p.m, p.sigma)?;
    if size > MAX_ENUM_OUTPUT.into() {
        return Err(CliError::Usage(format!("family has {size} members; enumerate prints at most {MAX_ENUM_OUTPUT}")));
    }
    let mut family = oracle::enumerate_via_r(p.n, p.m, p.sigma)?;
    family.sort_by_key(|d| d.key());

    let mut file_out;
    let w: &mut dyn Write = if a.output == "-" {
        out
    } else {
        file_out = BufWriter::new(File::create(&a.output)?);
        &mut file_out
    };
    writeln!(w, "{}", family.len())?;
    for d in &family {
        writeln!(w)?;
        for t in d.transitions() {
            format::write_edge(w, t)?;
        }
    }
    w.flush()?;
    Ok(())
}

fn run_bench(a: &BenchArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let sink = match (a.sink, &a.output) {
        (SinkArg::Null, _) => BenchSink::Null,
        (SinkArg::Memory, _) => BenchSink::Memory,
        (SinkArg::File, Some(path)) => BenchSink::File(path.clone()),
        (SinkArg::File, None) => return Err(CliError::Usage("--sink file needs -o <path>".into())),
    };
    let seed = a.seed.unwrap_or_else(entropy_seed);
    if a.grid {
        return bench_grid(a, &sink, seed, out);
    }
    let (Some(n), Some(m)) = (a.n, a.m) else {
        return Err(CliError::Usage("bench needs -n and -m, or --grid".into()));
    };
    let p = Params::new(n, m, a.sigma);
    p.validate()?;
    warn_large_alphabet(p, err);
    let point = bench::run_point(p, seed, &sink, a.runs, a.min_seconds)?;
    writeln!(out, "n={}\nm={}\nsigma={}\nseed={seed}", p.n, p.m, p.sigma)?;
    writeln!(out, "runs={}\nedges={}\nseconds={:.6}", point.runs, point.edges, point.seconds)?;
    writeln!(out, "edges_per_sec={:.0}", point.edges_per_sec())?;
    writeln!(out, "mean_attempts={:.4}\nmax_attempts={}", point.mean_attempts(), point.max_attempts)?;
    match bench::peak_rss_kib() {
        Some(kib) => writeln!(out, "peak_rss_kib={kib}")?,
        None => writeln!(out, "peak_rss_kib=NA")?,
    }
    if point.edges_per_sec() < 1e6 {
        let _ = writeln!(err, "wdfa: warning: throughput {:.0} edges/s is below 1e6", point.edges_per_sec());
    }
    Ok(())
}

fn bench_grid(a: &BenchArgs, sink: &BenchSink, seed: u64, out: &mut dyn Write) -> Result<(), CliError> {
    let points = bench::grid(a.base_n, a.n_steps, a.m_steps, a.sigma);
    if points.is_empty() {
        return Err(CliError::Usage("the grid contains no valid parameter point".into()));
    }
    let start = Instant::now();
    let mut csv: Box<dyn Write + '_> = match &a.csv {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(&mut *out),
    };
    writeln!(csv, "{}", bench::CSV_HEADER)?;
    let mut samples = Vec::with_capacity(points.len());
    for (i, p) in points.iter().enumerate() {
        let point = bench::run_point(*p, seed.wrapping_add(i as u64), sink, a.runs, a.min_seconds.max(0.05))?;
        writeln!(csv, "{}", bench::csv_row(&point))?;
        samples.push((p.m as f64, point.seconds_per_run()));
    }
    csv.flush()?;
    drop(csv);
    let slope = bench::loglog_slope(&samples).map_or("NA".to_string(), |s| format!("{s:.4}"));
    let prefix = if a.csv.is_some() { "" } else { "# " };
    writeln!(out, "{prefix}points={}", points.len())?;
    writeln!(out, "{prefix}slope={slope}")?;
    writeln!(out, "{prefix}seconds={:.3}", start.elapsed().as_secs_f64())?;
    Ok(())
}
