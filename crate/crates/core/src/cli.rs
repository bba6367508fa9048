//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 on usage errors (bad flags or parameter
//! values), 2 on runtime or data errors. Standard output only ever carries
//! data; diagnostics go to standard error.

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::ber::ber_predictability;
use crate::dataset::extract_features;
use crate::entropy::entropy_predictability;
use crate::error::Error;
use crate::estimate::Method;
use crate::experiments::{
    aggregate, run_panel, write_agg_csv, write_raw_csv, Panel, PanelConfig, RAW_HEADER,
};
use crate::generators::{GeneratorKind, GeneratorSpec};
use crate::oracle::TruthRecord;
use crate::series::{read_series, write_series};

#[derive(Debug, Parser)]
#[command(
    name = "predictability",
    version,
    about = "Predictability limits of discrete time series"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Simulate a synthetic series and write it in the series file format.
    Generate(GenerateArgs),
    /// Estimate the predictability of a series file.
    Estimate(EstimateArgs),
    /// Print the closed-form truth for a generator as CSV.
    Oracle(OracleArgs),
    /// Run one sweep panel and write raw and aggregated CSV files.
    Experiment(ExperimentArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum GenName {
    Markov3,
    Additive,
    Copy,
}

#[derive(Debug, Args)]
struct GenArgs {
    /// Generator to use.
    #[arg(long = "gen", value_enum)]
    generator: GenName,
    /// Repeat / rule probability (markov3, additive).
    #[arg(long)]
    q: Option<f64>,
    /// Alphabet size (additive, copy).
    #[arg(long = "M", alias = "m")]
    m: Option<usize>,
    /// Copy weight for the current state.
    #[arg(long, default_value_t = 0.1)]
    q1: f64,
    /// Copy weight for the previous state.
    #[arg(long, default_value_t = 0.2)]
    q2: f64,
    /// Copy weight for the state before that.
    #[arg(long, default_value_t = 0.3)]
    q3: f64,
}

#[derive(Debug, Args)]
struct GenerateArgs {
    #[command(flatten)]
    gen: GenArgs,
    /// Series length.
    #[arg(long)]
    n: usize,
    #[arg(long)]
    seed: u64,
    /// Output file.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum EstimateMethod {
    Entropy,
    Ber,
}

#[derive(Debug, Args)]
struct EstimateArgs {
    #[arg(long, value_enum)]
    method: EstimateMethod,
    /// Window length (required for ber).
    #[arg(long)]
    r: Option<usize>,
    /// Series file.
    #[arg(long)]
    input: PathBuf,
}

#[derive(Debug, Args)]
struct OracleArgs {
    #[command(flatten)]
    gen: GenArgs,
    /// Window length.
    #[arg(long)]
    r: usize,
}

#[derive(Debug, Args)]
struct ExperimentArgs {
    /// Panel letter, A to F.
    #[arg(long)]
    panel: String,
    /// Optional `key = value` file overriding the panel defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out_dir: PathBuf,
    /// Override the number of runs per cell.
    #[arg(long)]
    runs: Option<usize>,
    /// Override the base seed.
    #[arg(long)]
    base_seed: Option<u64>,
    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long)]
    threads: Option<usize>,
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Runtime(_) => 2,
        }
    }
}

fn runtime(e: impl std::fmt::Display) -> Failure {
    Failure::Runtime(e.to_string())
}

// Parameter errors are reported against the flag that carries them.
fn param_failure(e: Error) -> Failure {
    match e {
        Error::Parameter { name, reason } => {
            let flag = match name {
                "q1+q2+q3" => "--q1/--q2/--q3".to_string(),
                other => format!("--{other}"),
            };
            Failure::Usage(format!("invalid value for {flag}: {reason}"))
        }
        other => Failure::Runtime(other.to_string()),
    }
}

/// Parses `args` (including the program name) and runs the command, writing
/// data to `stdout`. Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = match cli.command {
        Command::Generate(a) => cmd_generate(a, stdout),
        Command::Estimate(a) => cmd_estimate(a, stdout),
        Command::Oracle(a) => cmd_oracle(a, stdout),
        Command::Experiment(a) => cmd_experiment(a, stdout),
    };
    match result {
        Ok(()) => 0,
        Err(f) => {
            match &f {
                Failure::Usage(msg) => eprintln!("error: {msg}"),
                Failure::Runtime(msg) => eprintln!("error: {msg}"),
            }
            f.code()
        }
    }
}

fn generator_kind(g: &GenArgs) -> Result<GeneratorKind, Failure> {
    let need_q = || {
        g.q.ok_or_else(|| Failure::Usage("--q is required for this generator".into()))
    };
    let need_m = || {
        g.m.ok_or_else(|| Failure::Usage("--M is required for this generator".into()))
    };
    let kind = match g.generator {
        GenName::Markov3 => GeneratorKind::Markov3 { q: need_q()? },
        GenName::Additive => GeneratorKind::Additive {
            m: need_m()?,
            q: need_q()?,
        },
        GenName::Copy => GeneratorKind::Copy {
            m: need_m()?,
            q1: g.q1,
            q2: g.q2,
            q3: g.q3,
        },
    };
    kind.validate().map_err(param_failure)?;
    Ok(kind)
}

fn cmd_generate(a: GenerateArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    let spec = GeneratorSpec {
        kind: generator_kind(&a.gen)?,
        n: a.n,
        seed: a.seed,
    };
    spec.validate().map_err(param_failure)?;
    let series = spec.generate().map_err(runtime)?;
    let file = File::create(&a.out)
        .map_err(|e| runtime(format!("cannot create {}: {e}", a.out.display())))?;
    write_series(&series, BufWriter::new(file)).map_err(runtime)?;
    writeln!(
        stdout,
        "{} {} {}",
        series.alphabet_size(),
        series.len(),
        a.seed
    )
    .map_err(runtime)?;
    Ok(())
}

fn cmd_estimate(a: EstimateArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    if matches!(a.method, EstimateMethod::Ber) && a.r.is_none() {
        return Err(Failure::Usage("--r is required with --method ber".into()));
    }
    if matches!(a.method, EstimateMethod::Entropy) && a.r.is_some() {
        eprintln!("warning: --r is ignored by the entropy method");
    }
    let file = File::open(&a.input)
        .map_err(|e| runtime(format!("cannot open {}: {e}", a.input.display())))?;
    let series = read_series(BufReader::new(file))
        .map_err(|e| runtime(format!("{}: {e}", a.input.display())))?;
    let est = match a.method {
        EstimateMethod::Entropy => entropy_predictability(&series).map_err(runtime)?,
        EstimateMethod::Ber => {
            let r = a.r.unwrap_or_default();
            let ds = extract_features(&series, r).map_err(|e| match e {
                Error::InvalidCutoff { .. } => {
                    Failure::Usage(format!("invalid value for --r: {e}"))
                }
                other => runtime(other),
            })?;
            match ber_predictability(&ds) {
                Ok(est) => est,
                Err(Error::DegenerateDataset) => {
                    return Err(runtime(
                        "only one class observed; the series is trivially predictable",
                    ))
                }
                Err(e) => return Err(runtime(e)),
            }
        }
    };
    let r_field = match est.method {
        Method::Entropy => String::new(),
        _ => est.meta.cutoff.map(|r| r.to_string()).unwrap_or_default(),
    };
    let mut w = csv::Writer::from_writer(stdout);
    let record = [
        String::new(),
        String::new(),
        series.alphabet_size().to_string(),
        String::new(),
        String::new(),
        String::new(),
        String::new(),
        r_field,
        series.len().to_string(),
        String::new(),
        est.method.to_string(),
        est.point.to_string(),
        est.lower.to_string(),
        est.upper.to_string(),
        String::new(),
        String::new(),
    ];
    w.write_record(RAW_HEADER).map_err(runtime)?;
    w.write_record(&record).map_err(runtime)?;
    w.flush().map_err(runtime)?;
    Ok(())
}

fn cmd_oracle(a: OracleArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    let kind = generator_kind(&a.gen)?;
    let rec = TruthRecord::new(
        GeneratorSpec {
            kind,
            n: 1,
            seed: 0,
        },
        a.r,
    )
    .map_err(|e| match e {
        Error::Parameter { .. } => param_failure(e),
        other => runtime(other),
    })?;
    let (q, w) = match kind {
        GeneratorKind::Markov3 { q } | GeneratorKind::Additive { q, .. } => (q.to_string(), None),
        GeneratorKind::Copy { q1, q2, q3, .. } => (String::new(), Some([q1, q2, q3])),
    };
    let weight = |i: usize| w.map(|w| w[i].to_string()).unwrap_or_default();
    let mut out = csv::Writer::from_writer(stdout);
    out.write_record([
        "generator",
        "M",
        "q",
        "q1",
        "q2",
        "q3",
        "r",
        "true_predictability",
        "true_ber",
    ])
    .map_err(runtime)?;
    out.write_record([
        kind.tag().to_string(),
        kind.alphabet_size().to_string(),
        q,
        weight(0),
        weight(1),
        weight(2),
        rec.r.to_string(),
        rec.true_predictability.to_string(),
        rec.true_ber.to_string(),
    ])
    .map_err(runtime)?;
    out.flush().map_err(runtime)?;
    Ok(())
}

fn cmd_experiment(a: ExperimentArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    let panel: Panel = a
        .panel
        .parse()
        .map_err(|e: Error| Failure::Usage(format!("invalid value for --panel: {e}")))?;
    let mut config = match &a.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| runtime(format!("cannot read {}: {e}", path.display())))?;
            PanelConfig::from_kv_text(&text, Some(panel))
                .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?
        }
        None => PanelConfig::default_for(panel),
    };
    if let Some(runs) = a.runs {
        config.runs = runs;
    }
    if let Some(seed) = a.base_seed {
        config.base_seed = seed;
    }
    config.validate().map_err(param_failure)?;

    let rows = match a.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(runtime)?
            .install(|| run_panel(&config)),
        None => run_panel(&config),
    }
    .map_err(runtime)?;

    fs::create_dir_all(&a.out_dir)
        .map_err(|e| runtime(format!("cannot create {}: {e}", a.out_dir.display())))?;
    let raw_path = a.out_dir.join(format!("panel{panel}_raw.csv"));
    let agg_path = a.out_dir.join(format!("panel{panel}_agg.csv"));
    let create = |p: &PathBuf| {
        File::create(p)
            .map(BufWriter::new)
            .map_err(|e| runtime(format!("cannot create {}: {e}", p.display())))
    };
    write_raw_csv(&rows, create(&raw_path)?).map_err(runtime)?;
    write_agg_csv(&aggregate(&rows), create(&agg_path)?).map_err(runtime)?;
    eprintln!("wrote {} and {}", raw_path.display(), agg_path.display());
    let _ = stdout;
    Ok(())
}
