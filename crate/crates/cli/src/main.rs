use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use phasebell::circular::PhaseDistribution;
use phasebell::estimator::{analyze_record, Convention, EstimateReport, DEFAULT_BINS};
use phasebell::svg::render_sweep_svg;
use phasebell::sweep::{crossings, run_null_suite, run_sweep, write_sweep_csv, NullSuiteConfig, RunManifest, SweepConfig};
use phasebell::synth::{synth_pair, PairedPhaseRecord, RecordModel, ResponseMap};

#[derive(Parser)]
#[command(name = "phasebell", version, about = "Bell-CHSH analysis of continuous phase records")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep σ_L, comparing the statevector oracle with the reduced-phase estimator.
    Sweep(SweepArgs),
    /// Run the raw estimator over classical null models; exits 1 on any violation.
    Null(NullArgs),
    /// Generate or import a paired phase record and estimate CHSH both ways.
    Records(RecordArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ConventionArg {
    SecondHarmonic,
    AppendixFirstHarmonic,
}

impl From<ConventionArg> for Convention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::SecondHarmonic => Convention::SecondHarmonic,
            ConventionArg::AppendixFirstHarmonic => Convention::AppendixFirstHarmonic,
        }
    }
}

#[derive(Args)]
struct SweepArgs {
    /// JSON config; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    sigma_min: Option<f64>,
    #[arg(long)]
    sigma_max: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    kappa: Option<f64>,
    #[arg(long, value_enum)]
    convention: Option<ConventionArg>,
    /// Oracle shot count (default: exact expectations).
    #[arg(long)]
    shots: Option<u32>,
    /// CSV output; stdout when omitted.
    #[arg(long)]
    out_csv: Option<PathBuf>,
    #[arg(long)]
    out_svg: Option<PathBuf>,
    #[arg(long)]
    out_manifest: Option<PathBuf>,
}

#[derive(Args)]
struct NullArgs {
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Decorrelated windows per trial record.
    #[arg(long, default_value_t = 10_000)]
    windows: usize,
    /// Write the JSON report here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    QuantumLocked,
    SharedLambda,
    Deterministic,
    Diffusion,
}

#[derive(Args)]
struct RecordArgs {
    #[arg(long, value_enum, default_value = "quantum-locked")]
    model: ModelArg,
    /// Analyse this record CSV instead of generating one.
    #[arg(long, conflicts_with = "model")]
    input: Option<PathBuf>,
    /// Samples per decorrelated window for an imported record.
    #[arg(long, default_value_t = 1, requires = "input")]
    batch_len: usize,
    #[arg(long, default_value_t = 0.5)]
    sigma_l: f64,
    #[arg(long, default_value_t = 1.0)]
    tau_c: f64,
    /// Response offset of side B for the shared-lambda model.
    #[arg(long, default_value_t = 0.0)]
    offset: f64,
    #[arg(long, default_value_t = 0.0)]
    phi1: f64,
    #[arg(long, default_value_t = 0.0)]
    phi2: f64,
    /// Diffusion rate D (rad²/s).
    #[arg(long, default_value_t = 0.25)]
    rate: f64,
    #[arg(long, default_value_t = 10_000.0)]
    duration: f64,
    #[arg(long, default_value_t = 0.25)]
    dt: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, value_enum, default_value = "second-harmonic")]
    convention: ConventionArg,
    /// Contiguous segments for bias control; calibration uses the first.
    #[arg(long, default_value_t = 2)]
    segments: usize,
    /// Use the whole record for both calibration and correlators.
    #[arg(long)]
    no_split: bool,
    #[arg(long, default_value_t = DEFAULT_BINS)]
    bins: usize,
    /// Record CSV output.
    #[arg(long)]
    out_csv: Option<PathBuf>,
    /// JSON estimate output; stdout when omitted.
    #[arg(long)]
    out_json: Option<PathBuf>,
}

type CliResult<T> = Result<T, String>;

fn create(path: &Path) -> CliResult<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

fn write_text(path: &Path, text: &str) -> CliResult<()> {
    let mut w = create(path)?;
    w.write_all(text.as_bytes()).and_then(|_| w.flush()).map_err(|e| format!("{}: {e}", path.display()))
}

fn sweep_config(a: &SweepArgs) -> CliResult<SweepConfig> {
    let mut cfg = match &a.config {
        Some(p) => {
            let f = File::open(p).map_err(|e| format!("cannot read {}: {e}", p.display()))?;
            serde_json::from_reader(BufReader::new(f)).map_err(|e| format!("{}: {e}", p.display()))?
        }
        None => SweepConfig::default(),
    };
    macro_rules! over {
        ($($f:ident),*) => { $(if let Some(v) = a.$f { cfg.$f = v; })* };
    }
    over!(sigma_min, sigma_max, steps, samples, seed, kappa);
    if let Some(c) = a.convention {
        cfg.convention = c.into();
    }
    if a.shots.is_some() {
        cfg.shots = a.shots;
    }
    for (dst, src) in [(&mut cfg.out_csv, &a.out_csv), (&mut cfg.out_svg, &a.out_svg), (&mut cfg.out_manifest, &a.out_manifest)] {
        if src.is_some() {
            dst.clone_from(src);
        }
    }
    cfg.validate().map_err(|e| e.to_string())?;
    Ok(cfg)
}

fn cmd_sweep(a: SweepArgs) -> CliResult<ExitCode> {
    let cfg = sweep_config(&a)?;
    let start = Instant::now();
    let points = run_sweep(&cfg).map_err(|e| e.to_string())?;
    let wall = start.elapsed().as_secs_f64();
    match &cfg.out_csv {
        Some(p) => write_sweep_csv(&points, create(p)?).map_err(|e| e.to_string())?,
        None => write_sweep_csv(&points, io::stdout().lock()).map_err(|e| e.to_string())?,
    }
    if let Some(p) = &cfg.out_svg {
        let title = format!("CHSH vs σ_L ({}, n = {})", cfg.convention, cfg.samples);
        write_text(p, &render_sweep_svg(&points, &title))?;
    }
    if let Some(p) = &cfg.out_manifest {
        let m = RunManifest::new(&cfg, &points, wall);
        write_text(p, &(serde_json::to_string_pretty(&m).map_err(|e| e.to_string())? + "\n"))?;
    }
    let c = crossings(&points);
    let show = |x: Option<f64>| x.map_or("none".to_string(), |v| format!("{v:.4}"));
    eprintln!("S = 2 crossing: oracle σ_L = {}, reduced σ_L = {}", show(c.oracle), show(c.reduced));
    Ok(ExitCode::SUCCESS)
}

fn cmd_null(a: NullArgs) -> CliResult<ExitCode> {
    let cfg = NullSuiteConfig { trials: a.trials, seed: a.seed, windows: a.windows };
    let report = run_null_suite(&cfg).map_err(|e| e.to_string())?;
    for v in &report.variants {
        println!(
            "{:<24} trials={:<4} max|S|={:.6} worst margin={:+.3e} {}",
            v.model,
            v.trials,
            v.max_abs_s,
            v.worst_margin,
            if v.failures == 0 { "PASS" } else { "FAIL" }
        );
    }
    if let Some(p) = &a.out {
        write_text(p, &(serde_json::to_string_pretty(&report).map_err(|e| e.to_string())? + "\n"))?;
    }
    Ok(if report.passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn record_model(a: &RecordArgs) -> RecordModel {
    match a.model {
        ModelArg::QuantumLocked => RecordModel::QuantumLocked { sigma_l: a.sigma_l, tau_c: a.tau_c },
        ModelArg::SharedLambda => RecordModel::ClassicalSharedLambda {
            lambda: PhaseDistribution::Uniform,
            tau_c: a.tau_c,
            map_a: ResponseMap::Identity,
            map_b: if a.offset == 0.0 { ResponseMap::Identity } else { ResponseMap::Offset(a.offset) },
        },
        ModelArg::Deterministic => RecordModel::ClassicalDeterministic { phi1: a.phi1, phi2: a.phi2 },
        ModelArg::Diffusion => RecordModel::PhaseDiffusion { rate: a.rate },
    }
}

fn cmd_records(a: RecordArgs) -> CliResult<ExitCode> {
    let record = match &a.input {
        Some(p) => {
            let f = File::open(p).map_err(|e| format!("cannot read {}: {e}", p.display()))?;
            let mut r = PairedPhaseRecord::read_csv(BufReader::new(f)).map_err(|e| e.to_string())?;
            if a.batch_len == 0 {
                return Err("batch length must be ≥ 1".into());
            }
            r.batch_len = a.batch_len;
            r
        }
        None => synth_pair(&record_model(&a), a.duration, a.dt, a.seed).map_err(|e| e.to_string())?,
    };
    if let Some(p) = &a.out_csv {
        record.write_csv(create(p)?).map_err(|e| e.to_string())?;
    }
    let convention: Convention = a.convention.into();
    let segments = if a.no_split { None } else { Some(a.segments) };
    let res = analyze_record(&record, convention, segments, a.bins).map_err(|e| e.to_string())?;
    let n = record.n_windows();
    let out = serde_json::json!({
        "raw": EstimateReport::new(&res.raw, convention, n, record.seed),
        "reduced": EstimateReport::new(&res.reduced, convention, n, record.seed),
    });
    let text = serde_json::to_string_pretty(&out).map_err(|e| e.to_string())? + "\n";
    match &a.out_json {
        Some(p) => write_text(p, &text)?,
        None => print!("{text}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Sweep(a) => cmd_sweep(a),
        Command::Null(a) => cmd_null(a),
        Command::Records(a) => cmd_records(a),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        ExitCode::from(2)
    })
}
