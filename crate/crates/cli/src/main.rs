mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

/// τ and knot Floer ranks of the two-companion satellites D_{J,s}(K,t),
/// computed by gluing bordered invariants and reducing.
///
/// Knots are given as `builtin:NAME` (unknot, trefoil_rh, trefoil_lh,
/// figure_eight) or as a path to a model JSON file. Set
/// BORDERFLOER_FIXTURES to use a fixtures directory other than the embedded
/// copy.
#[derive(Parser, Debug)]
#[command(name = "borderfloer", version, about, long_about, term_width = 80)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print τ(D_{J,s}(K,t))
    Tau(SatelliteArgs),
    /// Print the knot Floer ranks of D_{J,s}(K,t) per Alexander level
    Hfk(SatelliteArgs),
    /// τ of the t-twisted positive or negative Whitehead double of K
    Whitehead(WhiteheadArgs),
    /// τ over a grid of framings, checked against the closed formula
    Sweep(SweepArgs),
    /// Check a structure or knot model file
    Validate {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Fixture integrity checks
    Fixtures {
        #[command(subcommand)]
        action: FixturesAction,
    },
    /// Cancel a structure down to its survivors
    Reduce {
        file: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Box tensor product, pairing the A side of one file with the D side of another
    Tensor {
        file_a: PathBuf,
        side_a: String,
        file_b: PathBuf,
        side_b: String,
        #[arg(long)]
        prune: bool,
        /// Write the result here instead of stdout
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum FixturesAction {
    Check {
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args, Debug, Clone)]
pub struct RunArgs {
    #[arg(long)]
    pub json: bool,
    /// Write the cancellation sequence to this file as JSON
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Tie-break seed for cancellation order
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Args, Debug, Clone)]
pub struct SatelliteArgs {
    #[arg(long = "J", value_name = "KNOT")]
    pub j: String,
    #[arg(long = "s", allow_negative_numbers = true)]
    pub s: i32,
    #[arg(long = "K", value_name = "KNOT")]
    pub k: String,
    #[arg(long = "t", allow_negative_numbers = true)]
    pub t: i32,
    /// Drop CFAA sequences that cannot pair with a knot complement
    #[arg(long)]
    pub prune: bool,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Args, Debug, Clone)]
pub struct WhiteheadArgs {
    #[arg(long = "K", value_name = "KNOT")]
    pub k: String,
    #[arg(long = "t", allow_negative_numbers = true)]
    pub t: i32,
    #[arg(long, default_value = "+", allow_hyphen_values = true)]
    pub sign: String,
    #[arg(long)]
    pub prune: bool,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Args, Debug, Clone)]
pub struct SweepArgs {
    #[arg(long = "J", value_name = "KNOT")]
    pub j: String,
    #[arg(long = "K", value_name = "KNOT")]
    pub k: String,
    #[arg(long, value_name = "A:B", allow_hyphen_values = true)]
    pub s_range: String,
    #[arg(long, value_name = "A:B", allow_hyphen_values = true)]
    pub t_range: String,
    #[arg(long)]
    pub prune: bool,
    #[arg(long)]
    pub json: bool,
    #[arg(long)]
    pub seed: Option<u64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(status) => status.into(),
        Err(f) => {
            eprintln!("borderfloer: {f}");
            f.code().into()
        }
    }
}
