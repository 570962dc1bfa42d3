use std::io::Write;

use anyhow::{ensure, Context, Result};
use interlace::algebra::{mul_table, DEFAULT_TABLE_BOUND};
use interlace::expr::{self, ReassociationWarning};
use interlace::identities::{check_law, find_zero_divisors, Law, LawReport, Mode, ZeroDivisorPair};
use interlace::matrix::{
    interlaced_left_inverse, interlaced_right_inverse, m_embed, mnemonic_check, MatrixJson, MnemonicWitness,
    OneSidedInverse,
};
use interlace::{CdElement, Orientation, Sign, Signature};
use serde::Serialize;

use crate::render::{self, holds_fails, yes_no};
use crate::{Cli, Command, Expectations, Format, LawArg, RunConfig, EXIT_EXPECTED, EXIT_UNEXPECTED, EXIT_USAGE};

/// Basis sweeps with more tuples than this are replaced by random sampling.
pub const MAX_BASIS_TUPLES: usize = 1 << 12;

pub fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let cfg = RunConfig::from_args(&cli.common)?;
    match &cli.command {
        Command::Eval { expr } => cmd_eval(expr, &cfg, out, err),
        Command::Table => cmd_table(&cfg, out),
        Command::Verify { law } => cmd_verify(*law, &cfg, out),
        Command::ZeroDivisors { budget } => cmd_zero_divisors(*budget, &cfg, out),
        Command::Matrix { expr, inverse } => cmd_matrix(expr, *inverse, &cfg, out, err),
    }
}

/// Parses `src`, or reports the error with a caret under the offending
/// position and yields `None`.
fn parse_or_report(src: &str, err: &mut dyn Write) -> Result<Option<expr::Expr>> {
    match expr::parse(src) {
        Ok(e) => Ok(Some(e)),
        Err(e) => {
            let column = src[..e.offset.min(src.len())].chars().count();
            writeln!(err, "error: {e}")?;
            writeln!(err, "  {src}")?;
            writeln!(err, "  {}^", " ".repeat(column))?;
            Ok(None)
        }
    }
}

#[derive(Serialize)]
struct EvalJson<'a> {
    expr: String,
    level: usize,
    signs: &'a [Sign],
    orientation: Orientation,
    value: &'a CdElement,
    text: String,
    warnings: &'a [ReassociationWarning],
}

pub fn cmd_eval(src: &str, cfg: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let Some(parsed) = parse_or_report(src, err)? else {
        return Ok(EXIT_USAGE);
    };
    let sig = &cfg.signature;
    let value = expr::eval(&parsed, sig, cfg.orientation)?;
    let warnings = expr::reassociation_warnings(&parsed, sig, cfg.orientation);
    for w in &warnings {
        writeln!(err, "warning: {w}")?;
    }
    match cfg.format {
        Format::Text => writeln!(out, "{value}")?,
        Format::Csv => render::element_csv(out, &value)?,
        Format::Json => render::json(
            out,
            &EvalJson {
                expr: parsed.to_string(),
                level: sig.level(),
                signs: sig.signs(),
                orientation: cfg.orientation,
                value: &value,
                text: value.to_string(),
                warnings: &warnings,
            },
        )?,
    }
    Ok(EXIT_EXPECTED)
}

#[derive(Serialize)]
struct TableJson<'a, R> {
    level: usize,
    signs: &'a [Sign],
    orientation: Orientation,
    dim: usize,
    rows: R,
}

pub fn cmd_table(cfg: &RunConfig, out: &mut dyn Write) -> Result<i32> {
    let sig = &cfg.signature;
    let table = mul_table(sig, cfg.orientation, DEFAULT_TABLE_BOUND)?;
    match cfg.format {
        Format::Csv => out.write_all(table.to_csv().as_bytes())?,
        Format::Json => render::json(
            out,
            &TableJson {
                level: sig.level(),
                signs: sig.signs(),
                orientation: cfg.orientation,
                dim: table.dim(),
                rows: table.rows(),
            },
        )?,
        Format::Text => {
            let d = table.dim();
            let labels: Vec<String> = (0..d).map(|k| format!("e{k}")).collect();
            let cells: Vec<Vec<String>> = (0..d)
                .map(|j| {
                    table
                        .row(j)
                        .iter()
                        .map(|e| match e.sign {
                            Sign::Plus => format!("e{}", e.index),
                            Sign::Minus => format!("-e{}", e.index),
                        })
                        .collect()
                })
                .collect();
            writeln!(out, "{sig}, orientation {}", cfg.orientation)?;
            render::table_grid(out, &labels, &cells)?;
        }
    }
    Ok(EXIT_EXPECTED)
}

/// Exhaustive basis sweep plus `samples` dense tuples, or `samples` dense
/// tuples alone when the sweep would exceed [`MAX_BASIS_TUPLES`].
pub fn campaign_mode(law: Law, sig: &Signature, samples: usize, seed: u64) -> Mode {
    match sig.dim().checked_pow(law.arity() as u32) {
        Some(n) if n <= MAX_BASIS_TUPLES => Mode::Exhaustive { dense: samples, seed },
        _ => Mode::Random { count: samples, seed },
    }
}

fn argument_names(law: LawArg) -> &'static [&'static str] {
    match law {
        LawArg::Moufang => &["x", "y", "z"],
        LawArg::Adjugate => &["a", "b", "c", "d"],
        _ => &["x", "y"],
    }
}

#[derive(Serialize)]
struct VerifyJson<'a> {
    expected_holds: bool,
    matches_expectation: bool,
    /// Whether the witness, re-evaluated, still violates the law.
    witness_revalidated: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    mnemonic_witness: Option<&'a MnemonicWitness>,
    report: &'a LawReport,
}

pub fn cmd_verify(law: LawArg, cfg: &RunConfig, out: &mut dyn Write) -> Result<i32> {
    let sig = &cfg.signature;
    let expected = Expectations::shipped().expects_hold(law, sig.level())?;
    let mode = campaign_mode(law.law(), sig, cfg.samples, cfg.seed);
    let report = check_law(law.law(), sig, mode, cfg.orientation).with_context(|| format!("cannot check {law}"))?;
    let matches = report.holds == expected;
    let revalidated = (!report.holds).then(|| report.revalidate());
    let mnemonic = match (law, report.witness.as_slice()) {
        (LawArg::Mnemonic, [x, y]) => mnemonic_check(x, y, cfg.orientation)?.witness,
        _ => None,
    };
    match cfg.format {
        Format::Json => render::json(
            out,
            &VerifyJson {
                expected_holds: expected,
                matches_expectation: matches,
                witness_revalidated: revalidated,
                mnemonic_witness: mnemonic.as_ref(),
                report: &report,
            },
        )?,
        Format::Csv => {
            writeln!(out, "law,level,signs,orientation,mode,seed,tested,holds,expected,matches")?;
            writeln!(
                out,
                "{law},{},{},{},{},{},{},{},{},{}",
                sig.level(),
                sig.pattern(),
                cfg.orientation,
                serde_json::to_value(report.mode)?.as_str().unwrap_or_default(),
                report.seed,
                report.tested,
                report.holds,
                expected,
                matches
            )?;
        }
        Format::Text => {
            writeln!(out, "{law} at {sig}, orientation {}", cfg.orientation)?;
            let how = match report.mode {
                Mode::Exhaustive { .. } if law.law().multilinear() => "every basis tuple".to_string(),
                Mode::Exhaustive { dense, seed } => {
                    format!("every basis tuple, then {dense} dense tuples from seed {seed}")
                }
                Mode::Random { count, seed } => format!("{count} dense tuples from seed {seed}"),
            };
            writeln!(out, "checked {} tuples ({how})", report.tested)?;
            writeln!(out, "verdict: {}; expected: {}", holds_fails(report.holds), holds_fails(expected))?;
            if !report.holds {
                writeln!(out, "witness:")?;
                for (name, e) in argument_names(law).iter().zip(&report.witness) {
                    writeln!(out, "  {name} = {e}")?;
                }
                if let Some(w) = &mnemonic {
                    writeln!(out, "  entry {}: M(x) ⊛ M(y) gives {}, M(x y) gives {}", w.entry, w.lhs, w.rhs)?;
                }
                writeln!(out, "witness re-checked: {}", yes_no(report.revalidate()))?;
            }
            if matches {
                writeln!(out, "as expected")?;
            } else {
                writeln!(out, "UNEXPECTED: the expectation table says this law {}", holds_fails(expected))?;
            }
        }
    }
    Ok(if matches { EXIT_EXPECTED } else { EXIT_UNEXPECTED })
}

#[derive(Serialize)]
struct ZeroDivisorsJson<'a> {
    level: usize,
    signs: &'a [Sign],
    orientation: Orientation,
    seed: u64,
    budget: usize,
    examined: usize,
    pairs: &'a [ZeroDivisorPair],
}

pub fn cmd_zero_divisors(budget: usize, cfg: &RunConfig, out: &mut dyn Write) -> Result<i32> {
    let sig = &cfg.signature;
    let search = find_zero_divisors(sig, budget, cfg.seed, cfg.orientation);
    for p in &search.pairs {
        let product = p.x.mul_oriented(&p.y, cfg.orientation)?;
        ensure!(
            product.is_zero() && product == p.product,
            "reported pair ({}, {}) does not multiply to zero",
            p.x,
            p.y
        );
    }
    match cfg.format {
        Format::Json => render::json(
            out,
            &ZeroDivisorsJson {
                level: sig.level(),
                signs: sig.signs(),
                orientation: cfg.orientation,
                seed: cfg.seed,
                budget: search.budget,
                examined: search.examined,
                pairs: &search.pairs,
            },
        )?,
        Format::Csv => {
            writeln!(out, "x,y,product")?;
            for p in &search.pairs {
                writeln!(out, "{},{},{}", p.x, p.y, p.product)?;
            }
        }
        Format::Text => {
            writeln!(
                out,
                "{sig}, orientation {}: {} zero-divisor pairs among {} candidates",
                cfg.orientation,
                search.pairs.len(),
                search.examined
            )?;
            for p in &search.pairs {
                writeln!(out, "({}) * ({}) = {}", p.x, p.y, p.product)?;
            }
        }
    }
    Ok(EXIT_EXPECTED)
}

#[derive(Serialize)]
struct InverseJson<'a> {
    delta_left: &'a CdElement,
    delta_right: &'a CdElement,
    left: &'a OneSidedInverse,
    right: &'a OneSidedInverse,
    /// `M(x* / N(x))`, which both candidates should equal.
    conjugate_over_norm: MatrixJson<'a>,
    left_equals_conjugate_over_norm: bool,
    right_equals_conjugate_over_norm: bool,
}

#[derive(Serialize)]
struct MatrixCmdJson<'a> {
    expr: String,
    value: &'a CdElement,
    matrix: MatrixJson<'a>,
    #[serde(skip_serializing_if = "Option::is_none")]
    inverse: Option<InverseJson<'a>>,
}

pub fn cmd_matrix(src: &str, inverse: bool, cfg: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let Some(parsed) = parse_or_report(src, err)? else {
        return Ok(EXIT_USAGE);
    };
    let o = cfg.orientation;
    let value = expr::eval(&parsed, &cfg.signature, o)?;
    let embedded = m_embed(&value).context("the matrix model needs level >= 1")?;
    let inv = if inverse {
        let left = interlaced_left_inverse(embedded.mat(), o).context("left inverse: delta_left is not invertible")?;
        let right =
            interlaced_right_inverse(embedded.mat(), o).context("right inverse: delta_right is not invertible")?;
        let n = value.norm();
        let target = m_embed(&value.conjugate().scale(&n.inv()?))?;
        Some((left, right, target))
    } else {
        None
    };
    match cfg.format {
        Format::Json => {
            let inverse = inv.as_ref().map(|(left, right, target)| InverseJson {
                delta_left: &left.delta,
                delta_right: &right.delta,
                left,
                right,
                conjugate_over_norm: target.to_json(),
                left_equals_conjugate_over_norm: &left.candidate == target.mat(),
                right_equals_conjugate_over_norm: &right.candidate == target.mat(),
            });
            render::json(
                out,
                &MatrixCmdJson { expr: parsed.to_string(), value: &value, matrix: embedded.to_json(), inverse },
            )?;
        }
        Format::Csv => {
            writeln!(out, "matrix,entry,value")?;
            render::matrix_csv(out, "M", embedded.mat())?;
            if let Some((left, right, _)) = &inv {
                render::matrix_csv(out, "left_inverse", &left.candidate)?;
                render::matrix_csv(out, "right_inverse", &right.candidate)?;
            }
        }
        Format::Text => {
            writeln!(out, "M({value}) at {}, gamma = {}", cfg.signature, embedded.top_sign().value())?;
            render::matrix(out, embedded.mat())?;
            if let Some((left, right, target)) = &inv {
                for (r, label) in [(left, "left"), (right, "right")] {
                    writeln!(out, "delta_{label} = {}", r.delta)?;
                    writeln!(out, "{label} inverse:")?;
                    render::matrix(out, &r.candidate)?;
                    writeln!(out, "  verified: {}", yes_no(r.verified))?;
                    writeln!(out, "  delta_{label} in {label} nucleus: {}", yes_no(r.delta_in_nucleus))?;
                    writeln!(out, "  equals M(x*/N(x)): {}", yes_no(&r.candidate == target.mat()))?;
                }
            }
        }
    }
    Ok(EXIT_EXPECTED)
}
