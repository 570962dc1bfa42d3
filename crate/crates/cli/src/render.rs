use std::io::{self, Write};

use interlace::{CdElement, Mat2};
use serde::Serialize;

pub fn json(out: &mut dyn Write, value: &impl Serialize) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)
}

/// Named entries of a matrix, one per line, indented.
pub fn matrix(out: &mut dyn Write, m: &Mat2) -> io::Result<()> {
    for (name, e) in m.entries() {
        writeln!(out, "  {name} = {e}")?;
    }
    Ok(())
}

pub fn matrix_csv(out: &mut dyn Write, label: &str, m: &Mat2) -> io::Result<()> {
    for (name, e) in m.entries() {
        writeln!(out, "{label},{name},{e}")?;
    }
    Ok(())
}

/// Column-aligned grid of `e_j * e_k`.
pub fn table_grid(out: &mut dyn Write, labels: &[String], cells: &[Vec<String>]) -> io::Result<()> {
    let width = labels.iter().chain(cells.iter().flatten()).map(String::len).max().unwrap_or(1);
    write!(out, "{:>width$}", "*")?;
    for l in labels {
        write!(out, " {l:>width$}")?;
    }
    writeln!(out)?;
    for (l, row) in labels.iter().zip(cells) {
        write!(out, "{l:>width$}")?;
        for c in row {
            write!(out, " {c:>width$}")?;
        }
        writeln!(out)?;
    }
    Ok(())
}

pub fn element_csv(out: &mut dyn Write, e: &CdElement) -> io::Result<()> {
    writeln!(out, "index,coefficient")?;
    for (k, c) in e.coeffs().iter().enumerate() {
        writeln!(out, "{k},{c}")?;
    }
    Ok(())
}

pub fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn holds_fails(b: bool) -> &'static str {
    if b {
        "holds"
    } else {
        "fails"
    }
}
