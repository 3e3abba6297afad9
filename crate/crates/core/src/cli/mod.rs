//! File-based front end behind the `spinlat` binary.
//!
//! Every command writes its outputs and a [`RunManifest`] into `--out-dir`.
//! Exit codes:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success |
//! | 1 | target or state is not reachable |
//! | 2 | malformed input or invalid flags |
//! | 3 | band structure not converged, or boundary leakage |
//! | 4 | fidelity or oracle agreement below tolerance |

mod commands;
mod manifest;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::Error;
pub use manifest::{FileDigest, RunManifest, MANIFEST_FILE, RUN_MANIFEST_SCHEMA};

pub const EXIT_OK: i32 = 0;
pub const EXIT_UNREACHABLE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_NUMERICS: i32 = 3;
pub const EXIT_FIDELITY: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "spinlat", version, about = "Microwave-controlled transport in spin-dependent optical lattices")]
pub struct Cli {
    /// Directory receiving all outputs and the run manifest.
    #[arg(long, global = true, default_value = "spinlat-out")]
    pub out_dir: PathBuf,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    /// Command-specific tolerance (reachability for `check`, agreement for `compare-hn`).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Band structure, Wannier functions, potentials and Franck-Condon weights.
    Bands(BandsArgs),
    /// Reachability report for a state.
    Check(CheckArgs),
    /// Compile a target column into a pulse sequence and verify it.
    Synth(SynthArgs),
    /// Propagate a state through a pulse sequence.
    Simulate(SimulateArgs),
    /// Compare the closed-form scalar propagator with the numeric chain.
    CompareHn(CompareHnArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct BandsArgs {
    /// lin-parallel-lin depth in E_R.
    #[arg(long, conflicts_with = "trap_freq")]
    pub v0: Option<f64>,
    /// Polarization angle in degrees.
    #[arg(long, default_value_t = 90.0)]
    pub theta: f64,
    /// Spin-up harmonic trap frequency in E_R; sets the depth.
    #[arg(long)]
    pub trap_freq: Option<f64>,
    #[arg(long, default_value_t = crate::model::DEFAULT_PLANEWAVES)]
    pub planewaves: usize,
    #[arg(long, default_value_t = crate::model::DEFAULT_Q_POINTS)]
    pub qgrid: usize,
    /// Bands written to bands.csv.
    #[arg(long, default_value_t = 4)]
    pub bands: usize,
    /// Microwave Rabi frequency of the dressed potentials, in E_R.
    #[arg(long, default_value_t = 0.0)]
    pub omega: f64,
    /// Microwave detuning of the dressed potentials, in E_R.
    #[arg(long, default_value_t = 0.0)]
    pub delta: f64,
    /// Also tabulate the Franck-Condon ratio at this many angles between
    /// `--theta` and 90 degrees.
    #[arg(long)]
    pub sweep: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
pub struct CheckArgs {
    /// Spinor-state or synthesis-target JSON.
    pub state: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SynthMode {
    /// Unit Franck-Condon weights.
    Ideal,
    /// Rates weighted by the Franck-Condon factors of `--theta`, `--trap-freq`.
    Physical,
}

#[derive(Debug, Args, Serialize)]
pub struct SynthArgs {
    /// Synthesis-target or spinor-state JSON.
    pub target: PathBuf,
    /// Largest bare Rabi frequency, in E_R.
    #[arg(long, default_value_t = 1.0)]
    pub omega_max: f64,
    /// Uniform force in E_R per site; durations snap to multiples of 2 pi / F.
    #[arg(long)]
    pub gradient: Option<f64>,
    #[arg(long, default_value_t = 0.5)]
    pub delta_l: f64,
    #[arg(long, value_enum, default_value_t = SynthMode::Ideal)]
    pub mode: SynthMode,
    /// Polarization angle in degrees (physical mode).
    #[arg(long, default_value_t = 80.0)]
    pub theta: f64,
    /// Trap frequency in E_R (physical mode).
    #[arg(long, default_value_t = 20.0)]
    pub trap_freq: f64,
    #[arg(long, default_value_t = 1.0 - 1e-9)]
    pub min_fidelity: f64,
    #[arg(long, default_value_t = 128)]
    pub qgrid: usize,
    /// Suppressed-to-driven pair rate; zero is perfect isolation.
    #[arg(long, default_value_t = 0.0)]
    pub leakage: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryArg {
    Open,
    Periodic,
}

#[derive(Debug, Args, Serialize)]
pub struct SimulateArgs {
    pub state: PathBuf,
    pub sequence: PathBuf,
    #[arg(long, value_enum, default_value_t = BoundaryArg::Open)]
    pub boundary: BoundaryArg,
    /// Ring size; implies a periodic boundary.
    #[arg(long)]
    pub ring: Option<usize>,
    /// Write populations after every segment to trajectory.csv.
    #[arg(long)]
    pub emit_trajectory: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct CompareHnArgs {
    /// Scalar-schedule JSON; a random schedule from `--seed` when absent.
    pub schedule: Option<PathBuf>,
    /// Simulate on a ring of this many sites (force-free schedules only).
    #[arg(long)]
    pub ring: Option<usize>,
    #[arg(long, default_value_t = 64)]
    pub qgrid: usize,
    /// Segments of the random schedule.
    #[arg(long, default_value_t = 5)]
    pub segments: usize,
}

/// Failure carrying its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn new(code: i32, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Unreachable { .. } => EXIT_UNREACHABLE,
            Error::NotConverged { .. } | Error::Leakage { .. } => EXIT_NUMERICS,
            _ => EXIT_INVALID,
        };
        Failure::new(code, e.to_string())
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
        }
    };
    match commands::dispatch(&cli) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

/// Entry point for the binary.
pub fn main() -> ! {
    std::process::exit(run(std::env::args_os()))
}
