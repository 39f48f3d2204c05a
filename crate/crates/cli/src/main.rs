//! `mutfan` command-line tool. Indices on the command line and in JSON
//! output are 1-based.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

#[derive(Parser, Debug)]
#[command(name = "mutfan", version, about = "Mutation fans, g-vectors and universal coefficients")]
pub struct Cli {
    /// Worker threads for sequence enumeration (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct DepthArg {
    /// Maximum mutation-sequence length.
    #[arg(long, env = "MUTFAN_DEPTH", default_value_t = 8)]
    pub depth: usize,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Mutate an extended exchange matrix.
    Mutate {
        #[arg(long)]
        matrix: PathBuf,
        /// Mutation indices, applied left to right.
        #[arg(short = 'k', long = "k", value_delimiter = ',', required = true, num_args = 1..)]
        k: Vec<usize>,
    },
    /// Enumerate the mutation class of the principal part.
    Class {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        cap: usize,
    },
    /// Apply a composite mutation map to a vector.
    Eta {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        seq: Vec<usize>,
        /// Comma-separated rationals, e.g. `1,-2/3,0`.
        #[arg(long, allow_hyphen_values = true)]
        vector: String,
        /// Apply the inverse map instead.
        #[arg(long)]
        inverse: bool,
    },
    /// Check a linear relation for B-coherence up to a depth.
    Coherent {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        relation: PathBuf,
        #[command(flatten)]
        depth: DepthArg,
        /// Also check the truncated condition directly when B has no zero column.
        #[arg(long)]
        verify_shortcut: bool,
    },
    /// g-vectors reachable within a depth. By default they are computed for the
    /// transpose, so they span rays of the mutation fan of the given matrix.
    Gvec {
        #[arg(long)]
        matrix: PathBuf,
        #[command(flatten)]
        depth: DepthArg,
        #[arg(long)]
        no_transpose: bool,
    },
    /// Universal extended exchange matrices.
    Universal {
        #[command(subcommand)]
        kind: UniversalKind,
    },
    /// Solve and verify a coefficient specialization.
    Specialize {
        #[arg(long)]
        universal: PathBuf,
        #[arg(long)]
        target: PathBuf,
        #[command(flatten)]
        depth: DepthArg,
        /// Walk length for verifying the specialization conditions.
        #[arg(long)]
        walk_depth: Option<usize>,
        /// Require nonnegative coefficients.
        #[arg(long)]
        nonnegative: bool,
    },
    /// Print the seeds of a cluster pattern along a walk.
    Pattern {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        seq: Vec<usize>,
        /// Report the period of the repeating walk given by `--seq` instead.
        #[arg(long)]
        period: bool,
        #[arg(long, default_value_t = 40)]
        max_steps: usize,
    },
    /// Approximate the mutation fan by pulled-back coordinate hyperplanes.
    Fan {
        #[arg(long)]
        matrix: PathBuf,
        #[command(flatten)]
        depth: DepthArg,
        /// Write a stereographic SVG rendering (rank 3).
        #[arg(long)]
        svg: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum UniversalKind {
    /// Rank 2, `B = [[0, a], [b, 0]]`.
    Rank2 {
        #[arg(short = 'a', allow_hyphen_values = true)]
        a: i64,
        #[arg(short = 'b', allow_hyphen_values = true)]
        b: i64,
        /// Rays per parity class of each infinite family.
        #[arg(long, default_value_t = 8)]
        count: usize,
        /// Also print the exact limit rays.
        #[arg(long)]
        limit_exact: bool,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Lib(#[from] mutfan::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        use mutfan::Error as E;
        match self {
            CliError::Usage(_) | CliError::Io { .. } => 2,
            CliError::Lib(e) => match e {
                E::NotLaurent(_)
                | E::RecurrenceMismatch { .. }
                | E::NoCone { .. }
                | E::Inconsistent(_)
                | E::NegativeCoefficient { .. }
                | E::Fractional { .. } => 1,
                _ => 2,
            },
        }
    }
}

/// Whether the command's mathematical check passed.
#[derive(Debug, PartialEq, Eq)]
pub enum Outcome {
    Ok,
    Refuted,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let mut out = std::io::stdout().lock();
    match commands::run(&cli.command, &mut out) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Refuted) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
