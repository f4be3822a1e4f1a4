//! `sympent`: entanglement entropy of Gaussian states from the command line.

mod commands;
mod input;
mod output;
mod sweep;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use sympent_core::units::DEFAULT_TOL;
use sympent_core::LogBase;

/// Exit status for malformed input, I/O failures and usage errors.
pub const EXIT_ERROR: u8 = 1;
/// `validate` found a well-formed but unphysical covariance matrix.
pub const EXIT_UNPHYSICAL: u8 = 2;
/// `verify` found a grid point outside tolerance.
pub const EXIT_ORACLE: u8 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "sympent",
    version,
    about = "Entanglement entropy of Gaussian states"
)]
pub struct Cli {
    /// Numerical tolerance for physicality and oracle checks.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    /// Logarithm base for entropies [default: bits, or the sweep file's choice].
    #[arg(long, global = true, value_enum)]
    pub base: Option<BaseArg>,
    /// Write the primary output here (atomically) instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write a run record here; defaults to `<out>.run.json` when `--out` is set.
    #[arg(long, global = true)]
    pub record: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BaseArg {
    Bits,
    Nats,
}

impl From<BaseArg> for LogBase {
    fn from(b: BaseArg) -> Self {
        match b {
            BaseArg::Bits => LogBase::Bits,
            BaseArg::Nats => LogBase::Nats,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GridArg {
    Coarse,
    Fine,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the uncertainty principle; exit 0 if physical, 2 if not.
    Validate {
        /// Covariance file (JSON or CSV) or model file.
        input: PathBuf,
    },
    /// Symplectic eigenvalues, descending.
    Spectrum {
        input: PathBuf,
        /// Restrict to these modes first (1-based, comma separated).
        #[arg(long)]
        modes: Option<String>,
        /// Also report the Williamson transform and its residuals.
        #[arg(long)]
        williamson: bool,
    },
    /// Entropy of subsystem A for a bipartition such as "1,2|3,4".
    Entropy {
        input: PathBuf,
        #[arg(long)]
        partition: String,
    },
    /// Sweep one model parameter and tabulate the entropy as CSV.
    Sweep {
        spec: PathBuf,
        /// Overrides the partition in the sweep file.
        #[arg(long)]
        partition: Option<String>,
    },
    /// Compare the closed-form entropy against truncated Fock-space sums.
    Verify {
        #[arg(long, value_enum, default_value_t = GridArg::Coarse)]
        grid: GridArg,
    },
    /// Sample the Wigner function of one mode on a square grid.
    Wigner {
        input: PathBuf,
        /// Mode index, 1-based.
        #[arg(long, default_value_t = 1)]
        mode: usize,
        /// `extent,steps`: the grid spans [-extent, extent] in q and p.
        #[arg(long, default_value = "8,161")]
        grid: String,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
