//! `bicoef`: bounds, audits, sweeps, expansions and identity suites from
//! the command line.
//!
//! Exit codes: 0 success, 1 usage error, 2 degenerate bound, 3 failed
//! verification.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use bicoef::harness::Quantity;
use bicoef::scalar::{parse_rational, Mode};
use bicoef::verify::Suite;
use bicoef::{ClassKind, TheoremId};
use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;

use crate::output::Format;

pub const EXIT_USAGE: u8 = 1;
pub const EXIT_DEGENERATE: u8 = 2;
pub const EXIT_VERIFY: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "bicoef", version, about = "Initial-coefficient bounds for bi-univalent function pairs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output encoding; only json and csv are stable.
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,

    /// key=value defaults file (overrides $BICOEF_CONFIG).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

fn rational(s: &str) -> Result<BigRational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

#[derive(Debug, Args)]
pub struct PairArgs {
    /// Class pairing of (f, g): PP, PM, PL, MM, ML or LL.
    #[arg(long)]
    pub pair: TheoremId,
    #[arg(long, value_parser = rational, default_value = "0")]
    pub alpha: BigRational,
    #[arg(long, value_parser = rational, default_value = "0")]
    pub beta: BigRational,
}

#[derive(Debug, Args)]
pub struct TargetArgs {
    /// Target for f: caratheodory, order:<g> or strong:<g>.
    #[arg(long, default_value = "caratheodory")]
    pub phi: String,
    /// Target for g, same keys as --phi.
    #[arg(long, default_value = "caratheodory")]
    pub psi: String,
    /// Explicit coefficients B1,B2,...; wins over --phi.
    #[arg(long, value_parser = rational, value_delimiter = ',', num_args = 1..)]
    pub phi_coeffs: Option<Vec<BigRational>>,
    /// Explicit coefficients D1,D2,...; wins over --psi.
    #[arg(long, value_parser = rational, value_delimiter = ',', num_args = 1..)]
    pub psi_coeffs: Option<Vec<BigRational>>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Printed and generic bounds at one parameter point.
    #[command(allow_negative_numbers = true)]
    Bound {
        #[command(flatten)]
        pair: PairArgs,
        #[command(flatten)]
        targets: TargetArgs,
    },
    /// Printed-vs-generic discrepancies over an alpha x beta grid.
    Audit {
        #[arg(long)]
        theorem: TheoremId,
        /// start:end:step, used for both alpha and beta.
        #[arg(long, default_value = "0:1:0.25")]
        grid: String,
        #[command(flatten)]
        targets: TargetArgs,
    },
    /// Extremal sweep of |a2| or |a3| over the relaxed coefficient region.
    #[command(allow_negative_numbers = true)]
    Sweep {
        #[command(flatten)]
        pair: PairArgs,
        #[command(flatten)]
        targets: TargetArgs,
        /// a2, a3 or both.
        #[arg(long, default_value = "a2")]
        what: String,
        #[arg(long)]
        radial_steps: Option<usize>,
        #[arg(long)]
        phase_steps: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Random safety-net samples for the a3 sweep.
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Order-2 functional expansion: series engine next to closed form.
    #[command(allow_negative_numbers = true)]
    Expand {
        #[arg(long)]
        class: ClassKind,
        #[arg(long, value_parser = rational, default_value = "0")]
        alpha: BigRational,
        #[arg(long, value_parser = rational)]
        a2: BigRational,
        #[arg(long, value_parser = rational)]
        a3: BigRational,
        #[arg(long, value_parser = rational, default_value = "0")]
        a2_im: BigRational,
        #[arg(long, value_parser = rational, default_value = "0")]
        a3_im: BigRational,
        #[arg(long, default_value = "exact")]
        mode: Mode,
    },
    /// Randomized identity suites.
    Verify {
        #[arg(long, default_value = "all")]
        suite: Suite,
        #[arg(long, default_value = "exact")]
        mode: Mode,
        #[arg(long)]
        seed: Option<u64>,
        /// Draws per check.
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Reference |a2| values for classical class pairs next to the PP bound.
    Table,
}

pub fn parse_quantities(what: &str) -> Result<Vec<Quantity>, String> {
    match what {
        "both" => Ok(vec![Quantity::A2, Quantity::A3]),
        other => Ok(vec![other.parse()?]),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(&cli) {
        Ok(out) => {
            print!("{}", out.stdout);
            if let Some(msg) = &out.stderr {
                eprintln!("{msg}");
            }
            ExitCode::from(out.code)
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
