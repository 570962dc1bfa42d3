use std::fmt;

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use interlace::sample::{DEFAULT_SAMPLES, DEFAULT_SEED};
use interlace::{Orientation, Signature};

/// Environment variable consulted when `--format` is absent.
pub const FORMAT_ENV: &str = "INTERLACE_FORMAT";

pub const DEFAULT_LEVEL: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.to_possible_value().expect("no skipped variants").get_name())
    }
}

/// Flags shared by every subcommand, as typed on the command line.
#[derive(Clone, Debug, Args)]
pub struct CommonArgs {
    /// Doubling level n; the algebra has dimension 2^n.
    #[arg(long, global = true, default_value_t = DEFAULT_LEVEL)]
    pub level: usize,

    /// n characters of '+'/'-', one per doubling step (innermost first),
    /// or a preset: "division", "split-octonion".
    #[arg(long, global = true, allow_hyphen_values = true, default_value = "division")]
    pub signs: String,

    #[arg(long, global = true, env = FORMAT_ENV, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,

    /// Random dense tuples added after the exhaustive basis sweep.
    #[arg(long, global = true, default_value_t = DEFAULT_SAMPLES)]
    pub samples: usize,

    /// "default", or "eq1-verbatim" for the p2* p1 cross term.
    #[arg(long, global = true, default_value = "default", value_parser = parse_orientation)]
    pub orientation: Orientation,
}

fn parse_orientation(s: &str) -> Result<Orientation, String> {
    s.parse().map_err(|e: interlace::Error| e.to_string())
}

/// Validated run configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub signature: Signature,
    pub format: Format,
    pub seed: u64,
    pub samples: usize,
    pub orientation: Orientation,
}

/// Expands a preset or parses a literal pattern; the result has `level` signs.
pub fn resolve_signs(level: usize, signs: &str) -> Result<Signature> {
    let sig = match signs {
        "division" => Signature::division(level),
        "split-octonion" => Signature::split_octonion(),
        pattern => Signature::from_pattern(pattern)?,
    };
    if sig.level() != level {
        bail!("sign pattern {signs:?} has {} signs but --level is {level}", sig.level());
    }
    Ok(sig)
}

impl RunConfig {
    pub fn from_args(args: &CommonArgs) -> Result<Self> {
        let signature = resolve_signs(args.level, &args.signs).context("bad --signs")?;
        Ok(RunConfig {
            signature,
            format: args.format,
            seed: args.seed,
            samples: args.samples,
            orientation: args.orientation,
        })
    }
}
