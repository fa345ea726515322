//! `exchkit` command-line interface.
//!
//! Exit status: 0 when the analysis completed (a law that fails to extend
//! is a result, not an error), 1 for malformed input, 2 when a resource
//! cap is hit, 3 when no representation was found or an internal check
//! failed.

mod commands;
mod render;
mod sweep;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use exchkit::Error;

#[derive(Parser, Debug)]
#[command(
    name = "exchkit",
    version,
    about = "Exact extendibility analysis for exchangeable laws on finite alphabets"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List the types of a given mass in lexicographic order.
    Types {
        /// Alphabet size; symbols are numbered from 0.
        #[arg(long, conflicts_with = "alphabet")]
        k: Option<usize>,
        /// Comma-separated symbol labels.
        #[arg(long, value_delimiter = ',')]
        alphabet: Option<Vec<String>>,
        #[arg(long)]
        mass: u32,
    },
    /// Law of n ordered draws without replacement from an urn.
    Urn {
        /// Urn composition as a type string, e.g. `2:1`.
        #[arg(long)]
        nu: String,
        #[arg(long)]
        n: u32,
        #[arg(long, value_delimiter = ',')]
        alphabet: Option<Vec<String>>,
        /// Cross-check against enumeration of every ordered draw.
        #[arg(long)]
        brute_force: bool,
    },
    /// Expand the point mass at a type in urn measures of a larger mass.
    Invert {
        #[arg(long)]
        mu: String,
        #[arg(long = "N")]
        big_n: u32,
    },
    /// Norm of the extending functional, with a maximizing function.
    Norm {
        /// JSON file, inline document, or `-` for standard input (the default).
        input: Option<String>,
        #[arg(long = "N")]
        big_n: u32,
        /// Re-check the certificate by enumerating sequences.
        #[arg(long)]
        brute_force: bool,
    },
    /// Decide N-extendibility with a witness or a refutation.
    Extend {
        /// JSON file, inline document, or `-` for standard input (the default).
        input: Option<String>,
        #[arg(long = "N")]
        big_n: u32,
        /// Also evaluate |E g| <= (1 + epsilon) sup |U g| for this function.
        #[arg(long, requires = "epsilon")]
        function: Option<String>,
        #[arg(long)]
        epsilon: Option<String>,
    },
    /// Probe infinite extendibility.
    Probe {
        /// JSON file, inline document, or `-` for standard input (the default).
        input: Option<String>,
        #[arg(long = "max-N")]
        max_n: u32,
        #[arg(long, default_value_t = exchkit::represent::DEFAULT_GRID_DEPTH)]
        grid_depth: u32,
    },
    /// Minimal total-variation signed mixture of product laws.
    Represent {
        /// JSON file, inline document, or `-` for standard input (the default).
        input: Option<String>,
        #[arg(long, default_value_t = exchkit::represent::DEFAULT_GRID_DEPTH)]
        grid_depth: u32,
    },
    /// Worked example laws and their checked claims.
    Corpus {
        #[command(subcommand)]
        which: CorpusCommand,
    },
    /// Solve a linear program, or check a supplied outcome, exactly.
    LpVerify {
        /// JSON file, inline document, or `-` for standard input (the default).
        input: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
pub enum CorpusCommand {
    /// Uniform law on binary sequences with a fixed number of ones.
    IntroUrn {
        #[arg(long, default_value_t = 2)]
        n: u32,
        #[arg(long, default_value_t = 1)]
        ones: u32,
        #[arg(long = "max-N", default_value_t = 8)]
        max_n: u32,
    },
    /// Four-point pair law with positive covariance that still fails to
    /// extend.
    AppendixA1 {
        #[arg(long = "max-N", default_value_t = 12)]
        max_n: u32,
        #[arg(long, default_value_t = 8)]
        grid_depth: u32,
    },
    /// Dyadic discretization of a density g(max(x1, x2)).
    Gnedin {
        /// Optional JSON object mapping grid points to values of g.
        input: Option<String>,
        #[arg(long, default_value_t = 2)]
        j: u32,
        /// Closed-form g when no values are given.
        #[arg(long, default_value = "linear")]
        profile: String,
        #[arg(long = "max-N", default_value_t = 4)]
        max_n: u32,
    },
    /// Every example with default settings.
    All,
    /// Check extendible <=> norm 1 on seeded random laws.
    DualitySweep {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        count: usize,
        #[arg(long = "max-N", default_value_t = 5)]
        max_n: u32,
    },
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Input(_) => 1,
        Error::Capacity { .. } => 2,
        Error::Representation { .. } | Error::Internal(_) => 3,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let usage = err.use_stderr();
            let _ = err.print();
            return if usage { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match commands::run(&cli.command) {
        Ok(report) => {
            // a closed pipe downstream is not our failure
            let _ = writeln!(std::io::stdout().lock(), "{}", render::render(&report, cli.format));
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}
