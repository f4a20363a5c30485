//! Command-line front end for `ejet-core`: parses germs from text, runs
//! classification, reduction, decomposition and numeric verification, and
//! prints deterministic JSON.

pub mod commands;
pub mod json;
pub mod parse;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use commands::{run, Output};

#[derive(Debug, Parser)]
#[command(name = "ejet", version, about = "Classify E6/E7/E8 singularities of bivariate germs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide the type of the germ and print the certificate.
    Classify {
        #[command(flatten)]
        input: Input,
        /// Include the decision path in the output.
        #[arg(long)]
        explain: bool,
    },
    /// Reduce the germ to its pre-normal form, or replay a saved chain.
    Reduce {
        #[command(flatten)]
        input: Input,
        /// Replay the transform chain stored in this JSON file instead.
        #[arg(long, value_name = "FILE")]
        chain: Option<PathBuf>,
    },
    /// Split the germ along the solution of d²φ/dx2² = 0.
    Decompose {
        #[command(flatten)]
        input: Input,
        /// Decompose the reduced jet rather than the input.
        #[arg(long)]
        reduced: bool,
    },
    /// Check the reduction against the normal form numerically.
    Verify {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 0.1)]
        radius: f64,
        #[arg(long, default_value_t = 500)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Clone, Args)]
pub struct Input {
    /// Germ expression such as "x2^3 + x1^4"; `-` reads standard input.
    #[arg(required_unless_present = "batch", conflicts_with = "batch", allow_hyphen_values = true)]
    pub germ: Option<String>,
    /// One germ per line; blank lines and `#` comments are skipped.
    #[arg(long, value_name = "FILE")]
    pub batch: Option<PathBuf>,
    /// Jet order N.
    #[arg(long, default_value_t = 8)]
    pub order: u32,
    /// Series working order W (defaults to N).
    #[arg(long, value_name = "W")]
    pub series_order: Option<u32>,
    /// Compact single-line JSON (the default).
    #[arg(long, conflicts_with = "pretty")]
    pub json: bool,
    /// Indented JSON.
    #[arg(long)]
    pub pretty: bool,
}

impl Input {
    pub fn series_order(&self) -> u32 {
        self.series_order.unwrap_or(self.order)
    }
}
