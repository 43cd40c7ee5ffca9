mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use commands::{Failure, Outcome};

const EXIT_CODES: &str = "\
Exit codes:
  0  success
  2  unreadable input or bad arguments
  3  invalid complex, gradient field, or endpoints
  4  a structural check failed (collapse shape, factorization, free pair)";

/// Discrete flow categories of discrete Morse functions: Hom posets, the
/// double-nerve spectral sequence, and structural checks.
#[derive(Parser, Debug)]
#[command(name = "dflow", version, after_help = EXIT_CODES)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Complex as JSON: {"cells":[{"id","dim"}],"covering":[[upper,lower]]} or {"facets":[[0,1,2]]}
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,

    /// Gradient field as JSON: {"pairs":[[lower,upper]]} or a Morse function {"values":{id:value}}.
    /// Without it every cell is critical.
    #[arg(long, global = true)]
    pub field: Option<PathBuf>,

    /// Coefficients for homology.
    #[arg(long, global = true, value_enum, default_value_t = Coeff::Z)]
    pub coeff: Coeff,

    /// Highest nerve degree checked by `verify`.
    #[arg(long, global = true, default_value_t = 3)]
    pub max_dim: usize,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Without --input, run on a random complex (at most 20 cells) and field drawn from this seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the complex and field and list the critical cells.
    Validate,
    /// Hom poset between two critical cells.
    Hom {
        #[arg(long)]
        source: String,
        #[arg(long)]
        target: String,
    },
    /// Pages 0 to 2 of the spectral sequence and the total homology.
    Spectral,
    /// CW-poset, unique-factorization, nerve-vanishing and collapse checks.
    Verify {
        /// Check the face poset of the complex as a category instead of the
        /// flow category; failures are reported with exit code 0.
        #[arg(long)]
        face_poset: bool,
    },
    /// Barycentric subdivision and its homology.
    Subdivide,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Coeff {
    Z,
    Q,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Dot,
    Text,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(Outcome { text, code }) => {
            print!("{text}");
            ExitCode::from(code)
        }
        Err(Failure { code, error }) => {
            eprintln!("error: {error:#}");
            ExitCode::from(code)
        }
    }
}
