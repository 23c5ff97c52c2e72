use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use matchgate_shadows::ensembles::Ensemble;

mod commands;
mod observables;

use commands::CliError;

#[derive(Parser, Debug)]
#[command(name = "shadows", version, about = "Matchgate classical shadows: sampling, estimation and exact checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Emit sampled circuits as JSON lines.
    Sample(SampleArgs),
    /// Estimate Majorana monomial expectations from sampled shadows.
    Estimate(EstimateArgs),
    /// Run an exact verification check.
    Verify(VerifyArgs),
    /// Error-versus-shots experiment as CSV.
    Bench(BenchArgs),
}

fn parse_ensemble(s: &str) -> Result<Ensemble, String> {
    Ensemble::from_name(s).ok_or_else(|| {
        let names: Vec<&str> = Ensemble::ALL.iter().map(|e| e.name()).collect();
        format!("unknown ensemble '{s}', expected one of {}", names.join(", "))
    })
}

#[derive(Args, Debug)]
struct SampleArgs {
    #[arg(long, value_parser = parse_ensemble)]
    ensemble: Ensemble,
    /// Number of fermionic modes (qubits).
    #[arg(long)]
    n: usize,
    #[arg(long)]
    shots: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Mean,
    MedianOfMeans,
}

#[derive(Args, Debug)]
struct EstimateArgs {
    #[arg(long, value_parser = parse_ensemble)]
    ensemble: Ensemble,
    /// State file; the vacuum on `--n` qubits when omitted.
    #[arg(long)]
    state_file: Option<PathBuf>,
    #[arg(long, required_unless_present = "state_file")]
    n: Option<usize>,
    #[arg(long)]
    shots: usize,
    /// One monomial per line as space-separated Majorana indices.
    #[arg(long)]
    observables: PathBuf,
    #[arg(long)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = MethodArg::Mean)]
    method: MethodArg,
    #[arg(long, default_value_t = 10)]
    batches: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Check {
    Design3,
    Gamma4,
    SignInvariance,
    MatchingInvariance,
    Lambda,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    check: Check,
    #[arg(long, default_value_t = 1)]
    n: usize,
    /// Pass threshold on the reported deviation.
    #[arg(long)]
    tol: Option<f64>,
    /// Seed for the random state and replacements of the invariance checks.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = matchgate_shadows::cubature::DEFAULT_INVARIANCE_TRIALS)]
    trials: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, value_delimiter = ',', value_parser = parse_ensemble, default_value = "haar,four_angle,two_angle,optimal")]
    ensembles: Vec<Ensemble>,
    #[arg(long, value_delimiter = ',', default_value = "100,1000,10000")]
    grid: Vec<usize>,
    #[arg(long, default_value_t = 1000)]
    bootstrap: usize,
    #[arg(long)]
    seed: u64,
    /// State file; a seeded random state when omitted.
    #[arg(long)]
    state_file: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Sample(a) => commands::sample(&a),
        Command::Estimate(a) => commands::estimate(&a),
        Command::Verify(a) => commands::verify(&a),
        Command::Bench(a) => commands::bench(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::VerificationFailed) => ExitCode::from(5),
        Err(CliError::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
