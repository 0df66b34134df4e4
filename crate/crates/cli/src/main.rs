mod commands;
mod csvout;
mod report;

use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::ExitCode;

use adft8::simulator::Beamformer;
use clap::{Parser, Subcommand};

use commands::{MatrixChoice, Mutation};
use report::ReportDocument;

#[derive(Debug)]
pub enum CliError {
    /// One or more verification checks failed (exit 1).
    Check(Vec<String>),
    /// Bad arguments or malformed input files (exit 2).
    Input(String),
    /// Output could not be written (exit 3).
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Check(_) => 1,
            CliError::Input(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

/// Multiplierless 8-point approximate DFT: verification, beam patterns,
/// error analysis, array simulation and benchmarking.
#[derive(Debug, Parser)]
#[command(name = "adft8", version)]
struct Cli {
    /// Emit the machine-readable JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Output file (CSV for patterns/error/simulate, the report otherwise).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Seed for random batches and scenario noise.
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the factorization, operation counts, MSE and orthogonality.
    Verify {
        /// Break the factorization on purpose to exercise the checks.
        #[arg(long, value_enum)]
        mutate: Option<Mutation>,
    },
    /// Export normalized beam patterns as CSV.
    Patterns {
        #[arg(long, value_enum, default_value = "approx")]
        matrix: MatrixChoice,
        /// Grid step in degrees, in [0.01, 1.0].
        #[arg(long, default_value_t = 0.1)]
        step: f64,
        #[arg(long, default_value_t = PI)]
        omega_t: f64,
    },
    /// Export pattern error curves as CSV and summarize error energies.
    Error {
        #[arg(long, default_value_t = 0.1)]
        step: f64,
        #[arg(long, default_value_t = PI)]
        omega_t: f64,
    },
    /// Run a plane-wave scenario (single arrival or DOA sweep).
    Simulate {
        /// JSON scenario document.
        #[arg(long)]
        scenario: PathBuf,
        /// exact | approximate | fixedpoint
        #[arg(long, default_value = "approximate")]
        which: Beamformer,
        /// Also write the quantized input snapshots (fixedpoint only).
        #[arg(long)]
        samples_out: Option<PathBuf>,
    },
    /// Time the fast kernel against the direct matrix product.
    Bench {
        #[arg(long, default_value_t = 100_000)]
        trials: usize,
        #[arg(long, default_value_t = 5)]
        repeats: usize,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let mut doc = ReportDocument::new(argv);
    // CSV-producing commands send the CSV to --out (or stdout) and the
    // report to stdout (or stderr when stdout carries the CSV).
    let csv = match cli.command {
        Command::Verify { mutate } => {
            commands::verify(&mut doc, mutate);
            None
        }
        Command::Patterns { matrix, step, omega_t } => Some(commands::patterns(&mut doc, matrix, step, omega_t)?),
        Command::Error { step, omega_t } => Some(commands::error(&mut doc, step, omega_t)?),
        Command::Simulate { scenario, which, samples_out } => {
            Some(commands::simulate(&mut doc, &scenario, which, cli.seed, samples_out.as_ref())?)
        }
        Command::Bench { trials, repeats } => {
            commands::bench_cmd(&mut doc, trials, repeats, cli.seed.unwrap_or(0))?;
            None
        }
    };

    let rendered = doc.render(cli.json);
    match csv {
        Some(bytes) => {
            commands::write_output(cli.out.as_ref(), &bytes)?;
            if cli.out.is_some() {
                print!("{rendered}");
            } else {
                eprint!("{rendered}");
            }
        }
        None => commands::write_output(cli.out.as_ref(), rendered.as_bytes())?,
    }

    let failed: Vec<String> = doc.failed_checks().iter().map(|c| c.name.clone()).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Check(failed))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            match &e {
                CliError::Check(names) => eprintln!("error: failed checks: {}", names.join(", ")),
                CliError::Input(msg) | CliError::Io(msg) => eprintln!("error: {msg}"),
            }
            ExitCode::from(e.exit_code())
        }
    }
}
