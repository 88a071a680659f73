//! `qtur`: experiment runner and verification front end for `qtur-core`.
//!
//! Exit codes: 0 success, 1 a checked inequality or identity failed, 2 I/O
//! failure, 64 usage error. `QRE_THREADS` caps the worker threads of the
//! parallel sweeps.

pub mod error;
pub mod output;
pub mod suites;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use qtur_core::montecarlo::{run_experiment, saturation_family};

pub use error::{CliError, EXIT_FAILURE, EXIT_IO, EXIT_OK, EXIT_USAGE};
use output::{emit, Cell, Format, Metadata, Table};
use suites::{run_suite, Suite};

/// Environment variable capping the number of worker threads.
pub const THREADS_VAR: &str = "QRE_THREADS";

#[derive(Debug, Parser)]
#[command(name = "qtur", version, about = "Relative-entropy uncertainty bound: experiments and checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Random qubit experiment: U against f(S̃) and f(S̃_cl) per record.
    Montecarlo(MontecarloArgs),
    /// Saturating two-level pairs for a list of ε.
    Saturation(SaturationArgs),
    /// Run property suites and report pass/fail with worst residuals.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct MontecarloArgs {
    /// Number of retained records.
    #[arg(short, long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub n: u64,
    #[arg(short, long, default_value_t = 42)]
    pub seed: u64,
    /// Output file; stdout when omitted.
    #[arg(short, long)]
    pub out: Option<PathBuf>,
    #[arg(short, long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SaturationArgs {
    /// Comma-separated ε values, each > 0.
    #[arg(
        short,
        long,
        value_delimiter = ',',
        allow_negative_numbers = true,
        default_value = "0.1,0.5,1,2,4"
    )]
    pub eps: Vec<f64>,
    /// Scale of the observable θ = ω(|1⟩⟨1| - |0⟩⟨0|); U does not depend on it.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub omega: f64,
    #[arg(short, long)]
    pub out: Option<PathBuf>,
    #[arg(short, long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
    /// Random draws per suite.
    #[arg(short, long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    pub draws: u64,
    #[arg(short, long, default_value_t = 7)]
    pub seed: u64,
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I, A>(args: I) -> i32
where
    I: IntoIterator<Item = A>,
    A: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match configure_threads().and_then(|()| execute(&cli.command)) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| CliError::Usage(format!("{THREADS_VAR} must be a positive integer, got {raw:?}")))?;
    // a pool may already exist when `run` is called twice in one process
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    Ok(())
}

pub fn execute(command: &Command) -> Result<(), CliError> {
    match command {
        Command::Montecarlo(a) => montecarlo(a),
        Command::Saturation(a) => saturation(a),
        Command::Verify(a) => verify(a),
    }
}

fn montecarlo(args: &MontecarloArgs) -> Result<(), CliError> {
    let n = usize::try_from(args.n).map_err(|_| CliError::Usage(format!("n = {} is too large", args.n)))?;
    let exp = run_experiment::<f64>(n, args.seed)?;
    let violations = exp.violations();
    let classical = exp.classical_violations();

    let mut meta = Metadata::new("montecarlo");
    meta.push("seed", args.seed);
    meta.push("n", args.n);
    meta.push("rng", "chacha8, record k on stream k");
    meta.push("redraws", exp.redraws());
    meta.push("violations", violations);
    meta.push("classical_violations", classical);
    let table = Table {
        header: vec!["index", "u", "s_tilde", "s_cl", "bound", "bound_cl", "classical_violated"],
        rows: exp
            .records
            .iter()
            .map(|r| {
                vec![
                    Cell::Int(r.index),
                    Cell::Float(r.u),
                    Cell::Float(r.s_tilde),
                    Cell::Float(r.s_cl),
                    Cell::Float(r.bound),
                    Cell::Float(r.bound_cl),
                    Cell::Bool(r.classical_violated),
                ]
            })
            .collect(),
    };
    emit(args.out.as_deref(), args.format, &meta, &table)?;

    let mut err = std::io::stderr().lock();
    let _ = writeln!(err, "records: {}", exp.records.len());
    let _ = writeln!(err, "redraws: {}", exp.redraws());
    let _ = writeln!(err, "violations: {violations}");
    let _ = writeln!(err, "classical violations: {classical}");
    let _ = writeln!(err, "mean gap U - f(S̃): {:.6e}", exp.mean_gap());
    if violations > 0 {
        return Err(CliError::Failed(format!("{violations} records violate U ≥ f(S̃)")));
    }
    Ok(())
}

fn saturation(args: &SaturationArgs) -> Result<(), CliError> {
    if let Some(bad) = args.eps.iter().find(|e| !(**e > 0.0) || !e.is_finite()) {
        return Err(CliError::Usage(format!("every ε must be positive and finite, got {bad}")));
    }
    if !args.omega.is_finite() || args.omega == 0.0 {
        return Err(CliError::Usage(format!("ω must be finite and non-zero, got {}", args.omega)));
    }
    let points = saturation_family(&args.eps, args.omega)?;
    let mut meta = Metadata::new("saturation");
    meta.push("omega", args.omega);
    let table = Table {
        header: vec!["epsilon", "u", "s_tilde", "bound", "gap"],
        rows: points
            .iter()
            .map(|p| {
                vec![
                    Cell::Float(p.epsilon),
                    Cell::Float(p.record.u),
                    Cell::Float(p.record.s_tilde),
                    Cell::Float(p.record.bound),
                    Cell::Float(p.gap()),
                ]
            })
            .collect(),
    };
    emit(args.out.as_deref(), args.format, &meta, &table)?;
    let worst = points.iter().map(|p| p.gap().abs()).fold(0.0, f64::max);
    eprintln!("worst |U - f(S̃)|: {worst:.3e}");
    if !(worst <= 1e-8) {
        return Err(CliError::Failed(format!("saturation gap {worst:e} exceeds 1e-8")));
    }
    Ok(())
}

fn verify(args: &VerifyArgs) -> Result<(), CliError> {
    let draws = usize::try_from(args.draws).map_err(|_| CliError::Usage("draws too large".to_string()))?;
    let reports = run_suite(args.suite, draws, args.seed);
    let mut out = std::io::stdout().lock();
    for r in &reports {
        write!(out, "{r}").map_err(|e| CliError::io(Path::new("-"), e))?;
    }
    let failed: Vec<&str> = reports
        .iter()
        .filter(|r| !r.passed())
        .map(|r| r.suite.name())
        .collect();
    if failed.is_empty() {
        writeln!(out, "all checks passed").map_err(|e| CliError::io(Path::new("-"), e))?;
        Ok(())
    } else {
        Err(CliError::Failed(format!("failing suites: {}", failed.join(", "))))
    }
}
