//! `polarkit` command-line front end.
//!
//! Exit status: 0 on success, 1 on usage errors, 2 on data or validation
//! errors. Every run prints its resolved configuration as one JSON line on
//! standard error.

mod files;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use polarkit::bitio::{self, BitFormat};
use polarkit::construction::{
    construct_rm, polar_from_profile, reliability_profile, threshold_set,
};
use polarkit::decoder::llr_from_output;
use polarkit::simulate::{
    fractions, log_grid, rate_reliability_curve, rm_vs_polar, run_bler, scaling_probe, write_scaling_csv,
};
use polarkit::synthesis::{bec_profile, synthesize_exact, MAX_EXACT_LEVEL};
use polarkit::{BitVector, Channel, CodeSpec, Exec, LlrWorkspace, Method};

const FORMATS: &str = "\
FILE FORMATS
  Channel descriptor   bec:<eps> | bsc:<p> | table:<path>
                       where <path> holds {\"p0\":[...],\"p1\":[...]}, one entry per output symbol.
                       e.g. bec:0.5   bsc:0.11   table:chan.json
  Code spec (JSON)     {\"version\":1,\"N\":8,\"K\":4,\"channel\":\"bec:0.5\",\"method\":\"exact-bec\",
                        \"info_set\":[4,6,7,8],\"frozen_values\":\"0000\",\"z_hat\":[...],
                        \"samples\":null,\"seed\":null,\"stderr\":null,\"rule\":\"polar\"}
                       info_set is 1-based; frozen_values lists the frozen bits in index order.
  Bit files, ascii     one vector per line, characters 0/1, e.g. `0110`
  Bit files, binary    per vector: u64 little-endian bit count, then the bits packed
                       LSB-first into bytes (unused high bits zero)
  Symbol files         one block per line, N integer symbol ids separated by spaces,
                       or N single digits run together. BEC ids: 0 = received 0,
                       1 = received 1, 2 = erasure, e.g. `0 2 1 1` or `0211`.
                       BSC ids are the received bit; table ids index p0/p1.
  CSV outputs          polarize: index,z,i      curve: eta,R,B,L
                       simulate: trials,errors,bler,stderr,bound_sum
                       simulate --hist-out: index,first_errors
                       compare-rm: rule,trials,errors,bler,stderr,bound_sum
                       bench: N,encode_ns_per_block,decode_ns_per_block

EXAMPLES
  polarkit construct --channel bec:0.5 --n 3 --k 4 --out code.json
  polarkit encode --code code.json --in msg.bits --out cw.bits
  polarkit decode --code code.json --in rx.syms --out msg.bits
  polarkit simulate --code code.json --trials 10000 --seed 7 --out bler.csv
  polarkit polarize --channel bec:0.5 --n 10 --out z_profile.csv
  polarkit curve --code code.json --out curve.csv
  polarkit compare-rm --epsilon 0.5 --n 8 --k 128 --trials 10000 --seed 1 --out rm.csv
  polarkit bench --channel bsc:0.1 --n-list 10,12,14 --out scaling.csv

EXIT STATUS
  0 success, 1 usage error, 2 data or validation error";

#[derive(Parser, Debug)]
#[command(name = "polarkit", version, about = "Polar code construction, encoding, SC decoding and simulation")]
#[command(after_long_help = FORMATS)]
struct Cli {
    /// Worker threads for simulations; results do not depend on it.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    threads: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Choose an information set and write a code spec.
    #[command(after_long_help = FORMATS)]
    Construct(ConstructArgs),
    /// Encode K-bit data vectors into N-bit codewords.
    #[command(after_long_help = FORMATS)]
    Encode(EncodeArgs),
    /// SC-decode channel output symbols into K-bit data vectors.
    #[command(after_long_help = FORMATS)]
    Decode(DecodeArgs),
    /// Block-error rate under SC decoding.
    #[command(after_long_help = FORMATS)]
    Simulate(SimulateArgs),
    /// Per-index z and I of the split channels.
    #[command(after_long_help = FORMATS)]
    Polarize(PolarizeArgs),
    /// Rate and reliability as functions of the threshold eta.
    #[command(after_long_help = FORMATS)]
    Curve(CurveArgs),
    /// Polar rule against the Reed-Muller rule on a BEC.
    #[command(name = "compare-rm", after_long_help = FORMATS)]
    CompareRm(CompareRmArgs),
    /// Median per-block encode and decode times.
    #[command(after_long_help = FORMATS)]
    Bench(BenchArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    /// exact-bec for a BEC, exact-table for n <= 3, monte-carlo otherwise
    Auto,
    ExactBec,
    ExactTable,
    MonteCarlo,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum RuleArg {
    Polar,
    Rm,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Ascii,
    Binary,
}

impl From<FormatArg> for BitFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Ascii => BitFormat::Ascii,
            FormatArg::Binary => BitFormat::Binary,
        }
    }
}

#[derive(Args, Debug)]
struct ProfileArgs {
    /// Reliability estimation method.
    #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
    method: MethodArg,
    /// Monte-Carlo sample count.
    #[arg(long, default_value_t = 100_000)]
    samples: u64,
    /// Monte-Carlo master seed.
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Args, Debug)]
#[command(group(clap::ArgGroup::new("size").required(true).args(["k", "gamma"])))]
struct ConstructArgs {
    /// Channel descriptor.
    #[arg(long)]
    channel: String,
    /// Block length exponent: N = 2^n.
    #[arg(long)]
    n: u32,
    /// Number of information bits.
    #[arg(long)]
    k: Option<usize>,
    /// Take A = {i : z_i < gamma} instead of a fixed K (polar rule only).
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long, value_enum, default_value_t = RuleArg::Polar)]
    rule: RuleArg,
    #[command(flatten)]
    profile: ProfileArgs,
    /// Draw the frozen vector uniformly from this seed instead of all-zero.
    #[arg(long)]
    frozen_seed: Option<u64>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct EncodeArgs {
    #[arg(long)]
    code: PathBuf,
    /// K-bit data vectors.
    #[arg(long = "in")]
    input: PathBuf,
    /// N-bit codewords.
    #[arg(long)]
    out: PathBuf,
    /// Format of both bit files.
    #[arg(long, value_enum, default_value_t = FormatArg::Ascii)]
    format: FormatArg,
}

#[derive(Args, Debug)]
struct DecodeArgs {
    #[arg(long)]
    code: PathBuf,
    /// Channel output symbols, one block per line.
    #[arg(long = "in")]
    input: PathBuf,
    /// Decoded K-bit data vectors.
    #[arg(long)]
    out: PathBuf,
    /// Format of the output bit file.
    #[arg(long, value_enum, default_value_t = FormatArg::Ascii)]
    format: FormatArg,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[arg(long)]
    code: PathBuf,
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    /// Also write the genie first-error histogram.
    #[arg(long)]
    hist_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct PolarizeArgs {
    /// A BEC (any n up to 25) or any channel with n <= 3.
    #[arg(long)]
    channel: String,
    #[arg(long)]
    n: u32,
    /// Also print the fractions of I above 1-delta and below delta to stdout.
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
#[command(group(clap::ArgGroup::new("source").required(true).args(["code", "channel"])))]
struct CurveArgs {
    /// Use the profile stored in this code spec.
    #[arg(long)]
    code: Option<PathBuf>,
    /// Or compute a profile for this channel.
    #[arg(long, requires = "n")]
    channel: Option<String>,
    #[arg(long)]
    n: Option<u32>,
    #[command(flatten)]
    profile: ProfileArgs,
    /// Comma-separated thresholds; default is a log grid from 1e-12 to 1.
    #[arg(long, value_delimiter = ',')]
    eta_grid: Option<Vec<f64>>,
    /// Points of the default log grid.
    #[arg(long, default_value_t = 61)]
    points: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct CompareRmArgs {
    #[arg(long)]
    epsilon: f64,
    #[arg(long)]
    n: u32,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[arg(long, default_value = "bsc:0.1")]
    channel: String,
    /// Comma-separated ascending exponents.
    #[arg(long, value_delimiter = ',', default_value = "10,12,14")]
    n_list: Vec<u32>,
    /// Blocks timed per size.
    #[arg(long, default_value_t = 21)]
    trials: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn echo(config: Value) {
    eprintln!("{config}");
}

fn parse_channel(text: &str) -> Result<Channel> {
    text.parse::<Channel>().map_err(|e| anyhow!("channel {text:?}: {e}"))
}

fn load_code(path: &Path) -> Result<CodeSpec> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    CodeSpec::from_json(&text).with_context(|| format!("parsing {}", path.display()))
}

fn resolve_method(ch: &Channel, n: u32, p: &ProfileArgs) -> Method {
    match p.method {
        MethodArg::ExactBec => Method::ExactBec,
        MethodArg::ExactTable => Method::ExactTable,
        MethodArg::MonteCarlo => Method::MonteCarlo { samples: p.samples, seed: p.seed },
        MethodArg::Auto if ch.is_bec() => Method::ExactBec,
        MethodArg::Auto if n <= MAX_EXACT_LEVEL => Method::ExactTable,
        MethodArg::Auto => Method::MonteCarlo { samples: p.samples, seed: p.seed },
    }
}

fn method_json(m: Method) -> Value {
    match m {
        Method::ExactBec => json!({"method": "exact-bec"}),
        Method::ExactTable => json!({"method": "exact-table"}),
        Method::MonteCarlo { samples, seed } => json!({"method": "monte-carlo", "samples": samples, "seed": seed}),
    }
}

fn run(cli: Cli) -> Result<()> {
    let threads = cli.threads.map(|t| t as usize);
    let exec = Exec::with_threads(threads);
    match cli.command {
        Command::Construct(a) => construct(a, threads, exec),
        Command::Encode(a) => encode(a),
        Command::Decode(a) => decode(a),
        Command::Simulate(a) => simulate(a, threads, exec),
        Command::Polarize(a) => polarize(a),
        Command::Curve(a) => curve(a, threads, exec),
        Command::CompareRm(a) => compare_rm(a, threads, exec),
        Command::Bench(a) => bench(a),
    }
}

fn construct(a: ConstructArgs, threads: Option<usize>, exec: Exec) -> Result<()> {
    let ch = parse_channel(&a.channel)?;
    let method = resolve_method(&ch, a.n, &a.profile);
    echo(json!({
        "command": "construct", "channel": ch.to_string(), "n": a.n, "k": a.k, "gamma": a.gamma,
        "rule": format!("{:?}", a.rule).to_lowercase(), "profile": method_json(method),
        "frozen_seed": a.frozen_seed, "threads": threads, "out": a.out,
    }));
    let profile = reliability_profile(&ch, a.n, method, exec)?;
    let code = match (a.rule, a.k, a.gamma) {
        (RuleArg::Polar, Some(k), _) => {
            let len = 1usize << a.n;
            if k > len {
                bail!("K = {k} exceeds N = {len}");
            }
            polar_from_profile(&ch, a.n, k, profile)?
        }
        (RuleArg::Polar, None, Some(gamma)) => {
            if !(0.0..=1.0).contains(&gamma) {
                bail!("gamma {gamma} outside [0,1]");
            }
            let set = threshold_set(&profile, gamma);
            polar_from_profile(&ch, a.n, set.len(), profile)?
        }
        (RuleArg::Rm, Some(k), _) => construct_rm(&ch, a.n, k)?.with_profile(profile)?,
        (RuleArg::Rm, None, _) => bail!("the RM rule needs --k"),
        (RuleArg::Polar, None, None) => unreachable!("clap requires --k or --gamma"),
    };
    let code = match a.frozen_seed {
        Some(s) => code.with_random_frozen(s)?,
        None => code,
    };
    let json = code.to_json();
    files::write_atomic(&a.out, |w| {
        writeln!(w, "{json}")?;
        Ok(())
    })
}

fn encode(a: EncodeArgs) -> Result<()> {
    echo(json!({
        "command": "encode", "code": a.code, "in": a.input, "out": a.out,
        "format": format!("{:?}", a.format).to_lowercase(),
    }));
    let code = load_code(&a.code)?;
    let data = bitio::read(files::open(&a.input)?, a.format.into())?;
    let words = data
        .iter()
        .enumerate()
        .map(|(no, d)| code.encode_data(d).with_context(|| format!("vector {}", no + 1)))
        .collect::<Result<Vec<BitVector>>>()?;
    files::write_atomic(&a.out, |w| Ok(bitio::write(w, &words, a.format.into())?))
}

fn decode(a: DecodeArgs) -> Result<()> {
    echo(json!({
        "command": "decode", "code": a.code, "in": a.input, "out": a.out,
        "format": format!("{:?}", a.format).to_lowercase(),
    }));
    let code = load_code(&a.code)?;
    let blocks = files::read_symbols(code.channel(), &a.input, code.len())?;
    let mut ws = LlrWorkspace::new(polarkit::BlockLen::new(code.n())?);
    let mut out = Vec::with_capacity(blocks.len());
    for y in &blocks {
        let obs = llr_from_output(code.channel(), y)?;
        let d = ws.decode(&code, &obs)?;
        out.push(d.u_hat.select(code.info_set()));
    }
    files::write_atomic(&a.out, |w| Ok(bitio::write(w, &out, a.format.into())?))
}

fn simulate(a: SimulateArgs, threads: Option<usize>, exec: Exec) -> Result<()> {
    echo(json!({
        "command": "simulate", "code": a.code, "trials": a.trials, "seed": a.seed,
        "threads": threads, "out": a.out, "hist_out": a.hist_out,
    }));
    let code = load_code(&a.code)?;
    let report = run_bler(&code, a.trials, a.seed, exec)?;
    files::write_atomic(&a.out, |w| Ok(report.write_csv(w)?))?;
    if let Some(path) = &a.hist_out {
        files::write_atomic(path, |w| Ok(report.write_hist_csv(w)?))?;
    }
    Ok(())
}

fn polarize(a: PolarizeArgs) -> Result<()> {
    let ch = parse_channel(&a.channel)?;
    echo(json!({
        "command": "polarize", "channel": ch.to_string(), "n": a.n, "delta": a.delta, "out": a.out,
    }));
    let (z, i) = match &ch {
        Channel::Bec(e) => {
            let p = bec_profile(*e, a.n)?;
            (p.z, p.i)
        }
        _ if a.n <= MAX_EXACT_LEVEL => {
            let w = ch.table();
            let splits = (1..=1usize << a.n)
                .map(|idx| synthesize_exact(&w, a.n, idx))
                .collect::<polarkit::Result<Vec<_>>>()?;
            (
                splits.iter().map(|s| s.bhattacharyya()).collect(),
                splits.iter().map(|s| s.capacity()).collect(),
            )
        }
        _ => bail!("polarize needs a BEC or n <= {MAX_EXACT_LEVEL} for {ch}"),
    };
    if let Some(delta) = a.delta {
        if !(delta > 0.0 && delta < 1.0) {
            bail!("delta {delta} outside (0,1)");
        }
        let s = fractions(&i, delta);
        println!("{}", json!({"delta": delta, "frac_high": s.frac_high, "frac_low": s.frac_low}));
    }
    files::write_atomic(&a.out, |w| {
        writeln!(w, "index,z,i")?;
        for (k, (z, i)) in z.iter().zip(&i).enumerate() {
            writeln!(w, "{},{},{}", k + 1, z, i)?;
        }
        Ok(())
    })
}

fn curve(a: CurveArgs, threads: Option<usize>, exec: Exec) -> Result<()> {
    let grid = match &a.eta_grid {
        Some(g) => g.clone(),
        None => log_grid(1e-12, 1.0, a.points),
    };
    let (profile, source) = match (&a.code, &a.channel) {
        (Some(path), _) => {
            let code = load_code(path)?;
            let p = code
                .profile()
                .cloned()
                .ok_or_else(|| anyhow!("{} carries no reliability profile", path.display()))?;
            (p, json!({"code": path}))
        }
        (None, Some(text)) => {
            let ch = parse_channel(text)?;
            let n = a.n.expect("clap requires --n with --channel");
            let method = resolve_method(&ch, n, &a.profile);
            let src = json!({"channel": ch.to_string(), "n": n, "profile": method_json(method)});
            (reliability_profile(&ch, n, method, exec)?, src)
        }
        (None, None) => unreachable!("clap requires --code or --channel"),
    };
    echo(json!({
        "command": "curve", "source": source, "eta_grid": grid, "threads": threads, "out": a.out,
    }));
    let curve = rate_reliability_curve(&profile, &grid);
    files::write_atomic(&a.out, |w| Ok(curve.write_csv(w)?))
}

fn compare_rm(a: CompareRmArgs, threads: Option<usize>, exec: Exec) -> Result<()> {
    echo(json!({
        "command": "compare-rm", "epsilon": a.epsilon, "n": a.n, "k": a.k, "trials": a.trials,
        "seed": a.seed, "threads": threads, "out": a.out,
    }));
    let report = rm_vs_polar(a.epsilon, a.n, a.k, a.trials, a.seed, exec)?;
    files::write_atomic(&a.out, |w| Ok(report.write_csv(w)?))
}

fn bench(a: BenchArgs) -> Result<()> {
    let ch = parse_channel(&a.channel)?;
    echo(json!({
        "command": "bench", "channel": ch.to_string(), "n_list": a.n_list, "trials": a.trials,
        "seed": a.seed, "out": a.out,
    }));
    let rows = scaling_probe(&ch, &a.n_list, a.trials, a.seed)?;
    files::write_atomic(&a.out, |w| Ok(write_scaling_csv(&rows, w)?))
}
