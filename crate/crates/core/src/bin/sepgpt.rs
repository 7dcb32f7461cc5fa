use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use sepgpt::report::serialize;
use sepgpt::{run_all, run_suite, Error, Suite, SuiteOptions, SuiteReport};

/// Verification suites for two-qubit compositions with separable effects.
#[derive(Parser, Debug)]
#[command(name = "sepgpt", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct Common {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Rounds per game.
    #[arg(long, global = true, default_value_t = 10_000)]
    rounds: u64,
    /// Tolerance for perfect-discrimination checks.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Accepted for compatibility; the report is always JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Record wall-clock time in the report.
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Base measurement: completeness, closed form, block positivity.
    VerifyBase,
    /// All 66 pairs of the twelve-state encoding.
    Table1Sweep,
    /// Simulate the pairwise distinguishability game.
    Play(PlayArgs),
    /// Packing construction and randomized search.
    Packing {
        /// Descent steps allowed per dimension.
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
    },
    /// Five-state encoding in the frozen model.
    Frozen,
    /// Square-bit probabilities, dimensions and product states.
    Squarebit {
        /// Optional file of extra 3x3 states/effects.
        #[arg(long)]
        ext_file: Option<PathBuf>,
    },
    /// Two decompositions of one state with different entropies.
    EntropyDemo,
    /// Quantum failures, Helstrom bound and qubit counting.
    QuantumLimit,
    /// Block codewords over several SEP-bit pairs.
    BlockCode {
        #[arg(long, default_value_t = 2)]
        k: usize,
    },
    /// Information dimension against measurement dimension.
    Dimension,
    /// Every suite, aggregated.
    All {
        #[arg(long)]
        ext_file: Option<PathBuf>,
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
        #[arg(long, default_value_t = 2)]
        k: usize,
    },
}

#[derive(Args, Debug)]
struct PlayArgs {
    /// Number of messages.
    #[arg(long, default_value_t = 12)]
    n: usize,
    /// sep, quantum, quantum-helstrom, frozen or classical.
    #[arg(long, default_value = "sep")]
    theory: String,
    /// Qubits available to the quantum strategy (default: enough for n).
    #[arg(long)]
    qubits: Option<usize>,
}

fn summarize(r: &SuiteReport) {
    let passed = r.checks.iter().filter(|c| c.passed).count();
    eprintln!("{}: {passed}/{} checks passed", r.suite_name, r.checks.len());
    for c in r.failed_checks() {
        eprintln!("  FAIL {}: measured {:?}, expected {:?}", c.name, c.measured, c.expected);
    }
}

fn run(cli: Cli) -> Result<bool, Error> {
    let mut opts = SuiteOptions {
        seed: cli.common.seed,
        rounds: cli.common.rounds,
        tol: cli.common.tol,
        timing: cli.common.timing,
        ..SuiteOptions::default()
    };
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidArgument("--tol must be positive".into()));
    }
    let report = match cli.command {
        Command::VerifyBase => run_suite(Suite::VerifyBase, &opts)?,
        Command::Table1Sweep => run_suite(Suite::Table1Sweep, &opts)?,
        Command::Play(p) => {
            opts.n = p.n;
            opts.theory = p.theory;
            opts.qubits = p.qubits;
            run_suite(Suite::Play, &opts)?
        }
        Command::Packing { budget } => {
            opts.budget = budget;
            run_suite(Suite::Packing, &opts)?
        }
        Command::Frozen => run_suite(Suite::Frozen, &opts)?,
        Command::Squarebit { ext_file } => {
            opts.ext_file = ext_file;
            run_suite(Suite::SquareBit, &opts)?
        }
        Command::EntropyDemo => run_suite(Suite::EntropyDemo, &opts)?,
        Command::QuantumLimit => run_suite(Suite::QuantumLimit, &opts)?,
        Command::BlockCode { k } => {
            opts.k = k;
            run_suite(Suite::BlockCode, &opts)?
        }
        Command::Dimension => run_suite(Suite::Dimension, &opts)?,
        Command::All { ext_file, budget, k } => {
            opts.ext_file = ext_file;
            opts.budget = budget;
            opts.k = k;
            run_all(&opts)?
        }
    };
    let text = serialize(&report)?;
    match &cli.common.out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    summarize(&report);
    Ok(report.passed())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e @ Error::InvalidArgument(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
