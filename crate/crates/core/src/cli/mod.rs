//! The `genus-packets` command line: one subcommand per capability, JSON or CSV output and
//! the `verify` orchestrator. Exit codes: 0 success, 1 domain error, 2 verification
//! failure, 64 usage error.

mod commands;
pub mod json;
pub mod verify;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::Error;
pub use verify::{run_suite, Failure, Suite, SuiteReport, VerifyParams};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_VERIFY: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Parser, Debug)]
#[command(name = "genus-packets", version, about = "Genus packets of sphere points, quadratic orders with level and their L-factors")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug, Clone)]
pub struct Output {
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// write to this file instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// worker threads; output order does not depend on it
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Args, Debug, Clone)]
pub struct DRange {
    #[arg(long = "d")]
    pub d: Option<u64>,
    #[arg(long)]
    pub d_min: Option<u64>,
    #[arg(long)]
    pub d_max: Option<u64>,
}

#[derive(Args, Debug, Clone)]
pub struct LevelArgs {
    /// discriminant of the order Λ
    #[arg(long, allow_hyphen_values = true)]
    pub disc: i64,
    /// ξ ∈ Λ as "a,b" in the basis (1, ω)
    #[arg(long, default_value = "1,0", allow_hyphen_values = true)]
    pub xi: String,
    /// torsion order N of x = ξ/N (1 for trivial level)
    #[arg(long, default_value_t = 1)]
    pub n: u64,
}

#[derive(Args, Debug, Clone)]
pub struct BowenArgs {
    /// split prime carrying the Bowen restriction
    #[arg(long)]
    pub p1: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub tau: u32,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// primitive points of x² + y² + z² = D
    Spheres {
        #[command(flatten)]
        range: DRange,
        #[command(flatten)]
        output: Output,
    },
    /// orthogonal grids of every point of norm D
    Grids {
        #[command(flatten)]
        range: DRange,
        #[command(flatten)]
        output: Output,
    },
    /// the genus packet: one grid class per rotation orbit
    Packet {
        #[command(flatten)]
        range: DRange,
        #[command(flatten)]
        output: Output,
    },
    /// reduced forms, genus characters and, with a level, Pic(Λ,x) and its conductor
    Classgroup {
        #[arg(long, allow_hyphen_values = true)]
        disc: i64,
        #[arg(long, allow_hyphen_values = true)]
        xi: Option<String>,
        #[arg(long)]
        n: Option<u64>,
        #[command(flatten)]
        output: Output,
    },
    /// class number formula with level
    CnfCheck {
        #[command(flatten)]
        level: LevelArgs,
        #[arg(long, default_value_t = 1_000_000)]
        truncation: u64,
        #[command(flatten)]
        output: Output,
    },
    /// ideals with level by norm
    Count {
        #[command(flatten)]
        level: LevelArgs,
        /// window in normalized units: √|D|·x_min² ≤ Nr ≤ √|D|·x_max²
        #[arg(long)]
        x_min: Option<f64>,
        #[arg(long)]
        x_max: Option<f64>,
        /// window in norms
        #[arg(long)]
        norm_min: Option<f64>,
        #[arg(long)]
        norm_max: Option<f64>,
        /// torsion order of y
        #[arg(long, default_value_t = 1)]
        y_order: u64,
        /// principal genus only
        #[arg(long)]
        pg: bool,
        #[command(flatten)]
        bowen: BowenArgs,
        /// also run the lattice-point oracle and compare
        #[arg(long)]
        oracle: bool,
        #[command(flatten)]
        output: Output,
    },
    /// one local Euler factor: closed form, and optionally the coset-sum oracle
    Lfactor {
        #[arg(long)]
        p: u64,
        #[arg(long, value_enum)]
        split_type: commands::SplitArg,
        /// f_v = p^n
        #[arg(long, default_value_t = 0)]
        n: u32,
        /// level point ξ/p^e as "a,b" (with --e)
        #[arg(long, allow_hyphen_values = true)]
        xi: Option<String>,
        #[arg(long, default_value_t = 0)]
        e: u32,
        /// "re" or "re,im"
        #[arg(long, allow_hyphen_values = true)]
        s: String,
        #[arg(long, default_value_t = 0)]
        tau: u32,
        #[arg(long)]
        oracle: bool,
        #[arg(long, default_value_t = 1e-11)]
        tolerance: f64,
        #[command(flatten)]
        output: Output,
    },
    /// residue at s = 1 with its bound
    Residue {
        #[command(flatten)]
        level: LevelArgs,
        #[command(flatten)]
        bowen: BowenArgs,
        #[arg(long, default_value_t = 1_000_000)]
        truncation: u64,
        #[command(flatten)]
        output: Output,
    },
    /// packet coordinates and equidistribution statistics
    Stats {
        #[command(flatten)]
        range: DRange,
        /// keep only D passing the congruence filters at p₁, p₂
        #[arg(long)]
        p1: Option<u64>,
        #[arg(long)]
        p2: Option<u64>,
        #[arg(long, default_value_t = 1)]
        max_val_f: u32,
        #[arg(long, default_value_t = 1)]
        max_val_n: u32,
        /// summary CSV path (with --format csv)
        #[arg(long)]
        summary: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// run the oracle suites
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        #[arg(long)]
        max_d: Option<u64>,
        #[arg(long)]
        max_p: Option<u64>,
        #[arg(long)]
        max_disc: Option<u64>,
        #[arg(long)]
        max_level: Option<u64>,
        #[arg(long)]
        norm_max: Option<f64>,
        #[arg(long)]
        count_disc: Option<u64>,
        #[arg(long)]
        truncation: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        output: Output,
    },
}

/// Failure modes of a command.
#[derive(Debug)]
pub enum Outcome {
    Domain(String),
    Usage(String),
    Verification,
}

impl From<Error> for Outcome {
    fn from(e: Error) -> Self {
        Outcome::Domain(e.to_string())
    }
}

/// Parse `argv` (program name first), run, and write to `out`/`err`.
pub fn run_with(argv: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    match commands::dispatch(cli.command, out) {
        Ok(()) => EXIT_OK,
        Err(Outcome::Verification) => EXIT_VERIFY,
        Err(Outcome::Domain(m)) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_DOMAIN
        }
        Err(Outcome::Usage(m)) => {
            let _ = writeln!(err, "error: {m}\n\n{}", <Cli as clap::CommandFactory>::command().render_usage());
            EXIT_USAGE
        }
    }
}

/// Entry point of the binary.
pub fn run(argv: &[String]) -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}
