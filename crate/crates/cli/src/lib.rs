//! The `interlace` command line: evaluation, multiplication tables,
//! identity verification against a shipped expectation table, zero-divisor
//! search and the 2×2 matrix model.
//!
//! Exit codes: 0 when the outcome is the expected one, 1 when a verification
//! verdict contradicts the expectation table, 2 for usage, configuration and
//! evaluation errors.

use std::ffi::OsString;
use std::fmt;
use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use interlace::identities::Law;
use interlace::sample::DEFAULT_SAMPLES;
use serde::{Deserialize, Serialize};

pub mod commands;
pub mod config;
pub mod expectations;
mod render;

pub use config::{CommonArgs, Format, RunConfig};
pub use expectations::Expectations;

pub const EXIT_EXPECTED: i32 = 0;
pub const EXIT_UNEXPECTED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "interlace", version, about = "Cayley–Dickson algebras and their interlaced matrix model")]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate an expression such as "(e1 + 1/2*e4) * conj(e5)".
    Eval {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Print the basis multiplication table.
    Table,
    /// Check an identity and compare the verdict with the expectation table.
    Verify { law: LawArg },
    /// Search for pairs of nonzero elements whose product is zero.
    ZeroDivisors {
        /// Number of candidate left factors to examine.
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        budget: usize,
    },
    /// Show the matrix M(x) of an expression's value.
    Matrix {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        /// Also build and verify both one-sided interlaced inverses.
        #[arg(long)]
        inverse: bool,
    },
}

/// Laws reachable from `verify`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LawArg {
    /// M(x) ⊛ M(y) = M(x y).
    Mnemonic,
    /// x(xy) = (xx)y and (yx)x = y(xx).
    Alternative,
    /// x(yx) = (xy)x.
    Flexible,
    /// The three Moufang identities.
    Moufang,
    /// N(xy) = N(x) N(y).
    Norm,
    /// X^# ⊛ X = Δ_L I and X ⊛ X^# = Δ_R I.
    Adjugate,
}

impl LawArg {
    pub const ALL: [LawArg; 6] =
        [LawArg::Mnemonic, LawArg::Alternative, LawArg::Flexible, LawArg::Moufang, LawArg::Norm, LawArg::Adjugate];

    pub fn law(self) -> Law {
        match self {
            LawArg::Mnemonic => Law::Mnemonic,
            LawArg::Alternative => Law::Alternative,
            LawArg::Flexible => Law::Flexible,
            LawArg::Moufang => Law::Moufang,
            LawArg::Norm => Law::NormComposition,
            LawArg::Adjugate => Law::Adjugate,
        }
    }
}

impl fmt::Display for LawArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.to_possible_value().expect("no skipped variants").get_name())
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{rendered}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{rendered}");
                EXIT_EXPECTED
            };
        }
    };
    match commands::dispatch(&cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            EXIT_USAGE
        }
    }
}
