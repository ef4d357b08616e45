mod cache;
mod commands;
mod examples;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

/// Knot contact homology from braid words.
#[derive(Parser, Debug)]
#[command(name = "kch", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Emit {command, input, mode, result, version} as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Neither read nor write the result cache.
    #[arg(long, global = true)]
    pub no_cache: bool,
}

#[derive(Args, Debug, Clone)]
pub struct BraidArgs {
    /// Braid word, e.g. "1 -2 1 -2" or "s1^3"; "" is the trivial braid.
    #[arg(long, allow_hyphen_values = true)]
    pub braid: String,
    /// Number of strands (default: one more than the largest generator).
    #[arg(long)]
    pub n: Option<usize>,
}

#[derive(Args, Debug, Clone)]
pub struct ModeArgs {
    /// topological | transverse | transverse-uv | hat
    #[arg(long, default_value = "topological")]
    pub mode: String,
    /// Position of the extra strand: 0 or n+1.
    #[arg(long)]
    pub star: Option<String>,
    /// Fully noncommutative coefficients.
    #[arg(long)]
    pub noncommutative: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the DGA of a braid closure.
    Dga {
        #[command(flatten)]
        braid: BraidArgs,
        #[command(flatten)]
        mode: ModeArgs,
    },
    /// Check that the differential squares to zero.
    D2Check {
        #[command(flatten)]
        braid: BraidArgs,
        #[command(flatten)]
        mode: ModeArgs,
    },
    /// Count augmentations to F_p.
    AugCount {
        #[command(flatten)]
        braid: BraidArgs,
        #[command(flatten)]
        mode: ModeArgs,
        #[arg(long, default_value_t = 3)]
        prime: u64,
        /// Use the hat DGA (same as --mode hat).
        #[arg(long)]
        hat: bool,
        /// Also list the augmentations.
        #[arg(long)]
        enumerate: bool,
    },
    /// List augmentations to F_p.
    AugEnum {
        #[command(flatten)]
        braid: BraidArgs,
        #[command(flatten)]
        mode: ModeArgs,
        #[arg(long, default_value_t = 3)]
        prime: u64,
        #[arg(long)]
        hat: bool,
    },
    /// Linearized homology with respect to an augmentation.
    Linhom {
        #[command(flatten)]
        braid: BraidArgs,
        #[command(flatten)]
        mode: ModeArgs,
        /// Values, e.g. "la=1,mu=-1,U=1,a12=-2,a21=-2"; unlisted chords are 0.
        #[arg(long, allow_hyphen_values = true)]
        aug: String,
        /// Z, Q, Fp (with --prime) or F<p>, e.g. F3.
        #[arg(long, default_value = "Z")]
        coeff: String,
        #[arg(long)]
        prime: Option<u64>,
    },
    /// Augmentation polynomial by elimination.
    Augpoly {
        #[command(flatten)]
        braid: BraidArgs,
        /// Set U = 1 first.
        #[arg(long)]
        two_var: bool,
        /// resultant | groebner
        #[arg(long)]
        method: Option<String>,
        /// File holding the HOMFLY-PT polynomial P(a, q) to check against.
        #[arg(long)]
        homfly_file: Option<PathBuf>,
        /// Elimination budget in seconds.
        #[arg(long, default_value_t = 120)]
        time_limit: u64,
    },
    /// Check an augmentation polynomial against the HOMFLY-PT polynomial.
    HomflyCheck {
        /// Polynomial in la, mu, U; computed from --braid when omitted.
        #[arg(long, allow_hyphen_values = true)]
        poly: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        braid: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        /// HOMFLY-PT polynomial in a, q.
        #[arg(long, allow_hyphen_values = true)]
        homfly: Option<String>,
        #[arg(long)]
        homfly_file: Option<PathBuf>,
        #[arg(long)]
        method: Option<String>,
    },
    /// Compare two braids by their hat augmentation numbers.
    CompareTransverse {
        /// Give exactly two, or use --pair-file.
        #[arg(long, allow_hyphen_values = true)]
        braid: Vec<String>,
        #[arg(long)]
        n: Option<usize>,
        /// File with two lines "name strands: word".
        #[arg(long)]
        pair_file: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        prime: u64,
    },
    /// List the built-in examples, or recompute and check them.
    Examples {
        #[arg(long)]
        verify: bool,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    ExitCode::from(commands::run(&cli))
}
