//! `seminorm`: evaluate consensus seminorms, certify contraction and simulate
//! matrix products from the command line.
//!
//! Exit codes: 0 success or contractive, 2 input error, 3 not contractive or
//! certification refused, 4 solver failure, 5 counterexample check failed.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use seminorm_core::{PNorm, Seminorm};

#[derive(Parser, Debug)]
#[command(name = "seminorm", version, about = "Consensus seminorms, contraction certificates and product simulation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    Metric,
    Induced,
    Coe,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ScheduleKind {
    Cyclic,
    Random,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate one seminorm of a matrix and print it as JSON.
    Seminorm {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long, default_value = "inf", value_parser = parse_p)]
        p: PNorm,
        /// Use the sampling lower bound with this many random directions
        /// (induced seminorms only).
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Row-sum / nonnegativity validation tolerance.
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Certify per-step contraction; exit 0 if contractive, 3 if not.
    Certify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_parser = parse_certifiable)]
        seminorm: Seminorm,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Print the class report of a stochastic matrix.
    Classify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Simulate a product over an ensemble and check the λ^i rate bounds.
    Simulate {
        /// Matrix files, or directories whose .csv/.json files are all used.
        #[arg(long, num_args = 1.., required = true)]
        ensemble: Vec<PathBuf>,
        #[arg(long, value_enum, default_value = "cyclic")]
        schedule: ScheduleKind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        steps: usize,
        #[arg(long, default_value = "induced-inf", value_parser = parse_seminorm)]
        seminorm: Seminorm,
        /// Initial vector as comma-separated entries; defaults to e₁.
        #[arg(long)]
        initial: Option<String>,
        /// Trace CSV destination.
        #[arg(long)]
        out: Option<PathBuf>,
        /// JSON summary destination (also printed to stdout).
        #[arg(long)]
        summary: Option<PathBuf>,
        /// Simulate and write the trace even when λ ≥ 1.
        #[arg(long)]
        force: bool,
    },
    /// Check the built-in scrambling matrix whose metric ∞-seminorm is 1.
    Counterexample {
        /// Add this to every zero entry and renormalize before checking.
        #[arg(long)]
        perturb: Option<f64>,
        #[arg(long, default_value_t = 1.0)]
        tau_threshold: f64,
        #[arg(long)]
        json: bool,
    },
    /// Estimate equivalence constants between two seminorms by sampling.
    Equivalence {
        #[arg(long, value_parser = parse_seminorm)]
        a: Seminorm,
        #[arg(long, value_parser = parse_seminorm)]
        b: Seminorm,
        #[arg(long, default_value_t = 5)]
        n: usize,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn parse_p(s: &str) -> Result<PNorm, String> {
    s.parse()
}

fn parse_seminorm(s: &str) -> Result<Seminorm, String> {
    s.parse()
}

fn parse_certifiable(s: &str) -> Result<Seminorm, String> {
    match s.parse()? {
        sn @ (Seminorm::Metric(PNorm::Inf) | Seminorm::Induced(PNorm::Inf)) => Ok(sn),
        other => Err(format!("{other} cannot be certified (use metric-inf or induced-inf)")),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { commands::EXIT_INPUT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
