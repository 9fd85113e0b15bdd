//! Command-line front end for the `conifold` library: table emission, the
//! verification suite, and thin wrappers over the library computations.

pub mod commands;
pub mod error;
pub mod input;
pub mod report;
pub mod suite;
pub mod tables;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::error::CliError;
use crate::report::{Format, Report};

#[derive(Debug, Parser)]
#[command(name = "conifold", version, about = "Exact zig-zag and monodromy computations at isolated singular points")]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value = "markdown")]
    pub format: Format,
    /// Seed for the randomized isomorphism probes and generated corpora.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Emit the standard zig-zag and extension-template tables.
    Tables,
    /// Run the full verification suite.
    Check {
        /// Directory holding table1.json and table2.json to compare against.
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Weight filtration of a nilpotent matrix.
    Weights {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        center: Option<i64>,
    },
    /// Total monodromy, its logarithm and weight data.
    Monodromy {
        #[arg(long)]
        input: PathBuf,
        /// Defaults to the fibre dimension, or 3 for a bare configuration.
        #[arg(long, allow_hyphen_values = true)]
        center: Option<i64>,
        /// Replace T by T^m before taking the logarithm.
        #[arg(long)]
        power: Option<u32>,
    },
    /// Self-dual extension classes of IC by r skyscrapers.
    Classify {
        #[arg(short = 'r', default_value_t = 1)]
        r: usize,
    },
    /// Check a long exact sequence witness.
    Les {
        #[arg(long)]
        input: PathBuf,
    },
    /// Validate a tuple, presentation, gluing datum or degeneration.
    Validate {
        #[arg(long)]
        input: PathBuf,
    },
}

pub fn execute(cli: &Cli) -> Result<Report, CliError> {
    match &cli.command {
        Command::Tables => Ok(commands::tables()),
        Command::Check { input } => commands::check(cli.seed, input.as_deref()),
        Command::Weights { input, center } => commands::weights(input, *center),
        Command::Monodromy { input, center, power } => commands::monodromy(input, *center, *power),
        Command::Classify { r } => commands::classify(*r),
        Command::Les { input } => commands::les(input),
        Command::Validate { input } => commands::validate_input(input),
    }
}

/// Rendered output and exit code: 0 when every check passes, 1 when a
/// mathematical check fails, 2 on input errors.
pub fn run(cli: &Cli) -> (String, i32) {
    match execute(cli) {
        Ok(report) => {
            let code = if report.passed { 0 } else { 1 };
            (report.render(cli.format), code)
        }
        Err(e) => (format!("error: {e}"), e.exit_code()),
    }
}
