//! Command-line front end: `solve`, `verify`, `helly` and `report`.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 infeasible instance,
//! 3 verification failure. Errors are printed to stderr as one JSON object.

mod commands;
pub mod document;
mod error;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use strongcert::numerics::Scalar;

pub use error::CliError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;
pub const EXIT_REJECTED: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "strongcert", version, about = "Exact strong optimality certificates for convex minimization over finite sets")]
pub struct Cli {
    #[command(flatten)]
    pub flags: GlobalFlags,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalFlags {
    /// Scale factor for the default dual box around S (p/q, at least 1)
    #[arg(long, global = true, value_name = "K", value_parser = parse_scalar)]
    pub box_inflate: Option<Scalar>,
    /// Maximum number of candidate points enumerated from S
    #[arg(long, global = true, value_name = "N")]
    pub enum_cap: Option<u64>,
    /// Relaxation used by the maximality probe (p/q, positive)
    #[arg(long, global = true, value_name = "P/Q", value_parser = parse_scalar)]
    pub epsilon: Option<Scalar>,
    /// Log filter, e.g. warn, info, debug
    #[arg(long, global = true, default_value = "warn")]
    pub log_level: String,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute a certificate for an instance
    Solve {
        instance: PathBuf,
        /// Write the document here instead of stdout
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Re-run the brute-force oracles and compare
        #[arg(long)]
        cross_check: bool,
    },
    /// Check a certificate against its instance
    Verify {
        instance: PathBuf,
        certificate: PathBuf,
        #[arg(long)]
        cross_check: bool,
    },
    /// Check a Helly witness and report the implied lower bound
    Helly { witness: PathBuf },
    /// Summarize a run as text, or as tab-separated tables
    Report {
        instance: PathBuf,
        /// Use this certificate instead of solving
        #[arg(long)]
        certificate: Option<PathBuf>,
        #[arg(long)]
        tsv: bool,
    },
}

fn parse_scalar(s: &str) -> Result<Scalar, String> {
    s.parse::<Scalar>().map_err(|e| e.to_string())
}

/// Runs one invocation and returns its exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return EXIT_OK;
            }
            let error = CliError::Usage {
                message: e.render().to_string().trim_end().to_string(),
            };
            let _ = writeln!(err, "{}", error.to_json());
            return EXIT_ERROR;
        }
    };
    let _ = env_logger::Builder::new()
        .parse_filters(&cli.flags.log_level)
        .target(env_logger::Target::Stderr)
        .try_init();
    match commands::dispatch(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "{}", e.to_json());
            EXIT_ERROR
        }
    }
}
