//! Command-line front end: correlation-vector reports, parameter sweeps
//! reproducing the Werner and Bell-mixture curves, randomized verification
//! campaigns, and MUB export.
//!
//! Exit codes: 0 ok, 2 parse failure, 3 unsupported dimension/level,
//! 4 I/O failure, 5 verification failure.
//!
//! The worker count is taken from the MUBCORR_WORKERS environment variable
//! (default: machine parallelism; 0 means sequential). Output is
//! byte-identical for a fixed seed regardless of worker count.

mod commands;
mod statefile;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use mubcorr::verify::Campaign;
use mubcorr::OptimizerConfig;

use commands::{GlobalSettings, Measure, SweepFamily, SweepSpec};
use statefile::StateFileError;

pub const WORKERS_ENV: &str = "MUBCORR_WORKERS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Toggle {
    On,
    Off,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CampaignArg {
    Inequalities,
    Dominance,
    OracleMatch,
    Uncertainty,
}

impl From<CampaignArg> for Campaign {
    fn from(c: CampaignArg) -> Self {
        match c {
            CampaignArg::Inequalities => Campaign::Inequalities,
            CampaignArg::Dominance => Campaign::Dominance,
            CampaignArg::OracleMatch => Campaign::OracleMatch,
            CampaignArg::Uncertainty => Campaign::Uncertainty,
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "mubcorr",
    about = "Classical and genuine-quantum correlation measures over mutually unbiased bases",
    version
)]
struct Cli {
    /// Global seed for all randomized components.
    #[arg(long, global = true, default_value_t = 7117)]
    seed: u64,

    /// Optimizer restarts per level (default: 32 for d_A <= 3, 128 above).
    #[arg(long, global = true)]
    restarts: Option<usize>,

    /// Objective convergence tolerance in bits.
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol: f64,

    /// Cap on the total Hilbert-space dimension d_A*d_B.
    #[arg(long = "max-dim", global = true, default_value_t = 64)]
    max_dim: usize,

    /// Number of correlation-vector levels M (default: family maximum).
    #[arg(long, global = true)]
    m: Option<usize>,

    /// Two-stage handling of degenerate C1 optima.
    #[arg(long = "two-stage", global = true, value_enum, default_value_t = Toggle::On)]
    two_stage: Toggle,

    /// Output path (stdout when omitted; corrvec writes its JSON report
    /// here).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Stdout format for corrvec.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute the correlation vector, discord and inequality reports for a
    /// state file.
    Corrvec {
        /// JSON state file (explicit matrix or family descriptor).
        state_file: PathBuf,
    },
    /// Sweep a one-parameter family and write a CSV of all measures.
    Sweep {
        #[arg(long, value_enum)]
        family: SweepFamily,
        /// Subsystem dimension for the Werner family.
        #[arg(long, default_value_t = 2)]
        d: usize,
        /// Lower end of the parameter range.
        #[arg(long)]
        lo: Option<f64>,
        /// Upper end of the parameter range.
        #[arg(long)]
        hi: Option<f64>,
        /// Number of sweep points.
        #[arg(long, default_value_t = 81)]
        steps: usize,
        /// Line start for the bell-diagonal-line family, as r1,r2,r3.
        #[arg(long = "r-from", value_delimiter = ',', default_values_t = [0.0, 0.0, 0.0])]
        r_from: Vec<f64>,
        /// Line end for the bell-diagonal-line family, as r1,r2,r3.
        #[arg(long = "r-to", value_delimiter = ',', default_values_t = [1.0, 1.0, -1.0])]
        r_to: Vec<f64>,
        /// Measures to compute.
        #[arg(long, value_enum, value_delimiter = ',', default_values_t = [Measure::C1, Measure::Q2, Measure::Q3, Measure::D, Measure::Ef])]
        measures: Vec<Measure>,
    },
    /// Run a randomized verification campaign; exits 5 on violations.
    Verify {
        #[arg(long, value_enum)]
        campaign: CampaignArg,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        /// Subsystem dimensions as dA,dB.
        #[arg(long, value_delimiter = ',', default_values_t = [2, 2])]
        dims: Vec<usize>,
    },
    /// Export the standard MUB family for a prime dimension d <= 13.
    Mub {
        #[arg(long)]
        d: usize,
    },
}

/// CLI failure classes, mapped to documented exit codes.
#[derive(Debug)]
pub enum CliError {
    /// exit 2
    Parse(String),
    /// exit 3
    Unsupported(String),
    /// exit 4
    Io(String),
    /// exit 5
    VerificationFailed,
}

impl From<mubcorr::Error> for CliError {
    fn from(e: mubcorr::Error) -> Self {
        match e {
            mubcorr::Error::UnsupportedDimension { .. }
            | mubcorr::Error::UnsupportedLevel { .. }
            | mubcorr::Error::DimensionOverflow { .. } => Self::Unsupported(e.to_string()),
            other => Self::Parse(other.to_string()),
        }
    }
}

impl From<StateFileError> for CliError {
    fn from(e: StateFileError) -> Self {
        match e {
            StateFileError::Parse(msg) => Self::Parse(msg),
            StateFileError::Unsupported(msg) => Self::Unsupported(msg),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Unsupported(_) => 3,
            CliError::Io(_) => 4,
            CliError::VerificationFailed => 5,
        }
    }

    fn message(&self) -> Option<&str> {
        match self {
            CliError::Parse(m) | CliError::Unsupported(m) | CliError::Io(m) => Some(m),
            CliError::VerificationFailed => None,
        }
    }
}

fn init_workers() {
    if let Ok(raw) = std::env::var(WORKERS_ENV) {
        if let Ok(n) = raw.trim().parse::<usize>() {
            let threads = n.max(1); // 0 means sequential
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build_global();
        } else {
            eprintln!("warning: ignoring non-numeric {WORKERS_ENV}={raw}");
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let optimizer = OptimizerConfig {
        restarts: cli.restarts,
        objective_tol: cli.tol,
        seed: cli.seed,
        two_stage_degenerate: cli.two_stage == Toggle::On,
        max_levels: cli.m,
        ..OptimizerConfig::default()
    };
    let settings = GlobalSettings {
        seed: cli.seed,
        optimizer,
        max_dim: cli.max_dim,
        out: cli.out.clone(),
        format: cli.format,
    };
    match cli.command {
        Command::Corrvec { state_file } => commands::cmd_corrvec(&settings, &state_file),
        Command::Sweep {
            family,
            d,
            lo,
            hi,
            steps,
            r_from,
            r_to,
            measures,
        } => {
            if r_from.len() != 3 || r_to.len() != 3 {
                return Err(CliError::Parse(
                    "--r-from and --r-to need exactly three components".into(),
                ));
            }
            let (default_lo, default_hi) = match family {
                SweepFamily::Werner => (-1.0, 1.0),
                _ => (0.0, 1.0),
            };
            let spec = SweepSpec {
                family,
                d,
                lo: lo.unwrap_or(default_lo),
                hi: hi.unwrap_or(default_hi),
                steps,
                r_from: [r_from[0], r_from[1], r_from[2]],
                r_to: [r_to[0], r_to[1], r_to[2]],
                measures,
            };
            commands::cmd_sweep(&settings, &spec)
        }
        Command::Verify {
            campaign,
            samples,
            dims,
        } => {
            if dims.len() != 2 {
                return Err(CliError::Parse("--dims needs exactly dA,dB".into()));
            }
            commands::cmd_verify(&settings, campaign.into(), samples, (dims[0], dims[1]))
        }
        Command::Mub { d } => commands::cmd_mub(&settings, d),
    }
}

fn main() -> ExitCode {
    init_workers();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if let Some(msg) = e.message() {
                eprintln!("error: {msg}");
            }
            ExitCode::from(e.exit_code())
        }
    }
}
