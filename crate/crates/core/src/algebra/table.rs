use std::fmt::Write as _;

use num_traits::{One, Zero};
use serde::Serialize;

use super::{mul_coeffs, Orientation, Sign, Signature};
use crate::error::Error;
use crate::scalar::Rational;

/// Largest level for which a full table is generated unless overridden.
pub const DEFAULT_TABLE_BOUND: usize = 6;

/// `sign * e_index`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SignedBasis {
    pub sign: Sign,
    pub index: usize,
}

/// Products of all basis pairs: `entry(j, k)` is `e_j * e_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MulTable {
    signature: Signature,
    orientation: Orientation,
    entries: Vec<SignedBasis>,
}

/// Builds the multiplication table, failing if some basis product is not a
/// single signed basis element.
pub fn mul_table(signature: &Signature, orientation: Orientation, bound: usize) -> Result<MulTable, Error> {
    if signature.level() > bound {
        return Err(Error::LevelAboveBound { level: signature.level(), bound });
    }
    let dim = signature.dim();
    let mut entries = Vec::with_capacity(dim * dim);
    let unit = |k: usize| {
        let mut v = vec![Rational::zero(); dim];
        v[k] = Rational::one();
        v
    };
    for j in 0..dim {
        let ej = unit(j);
        for k in 0..dim {
            let prod = mul_coeffs(&ej, &unit(k), signature.signs(), orientation);
            entries.push(as_signed_basis(&prod).ok_or(Error::NotSignedBasis { j, k })?);
        }
    }
    Ok(MulTable { signature: signature.clone(), orientation, entries })
}

fn as_signed_basis(v: &[Rational]) -> Option<SignedBasis> {
    let mut found = None;
    for (m, c) in v.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        if found.is_some() {
            return None;
        }
        let sign = if *c == Rational::one() {
            Sign::Plus
        } else if *c == -Rational::one() {
            Sign::Minus
        } else {
            return None;
        };
        found = Some(SignedBasis { sign, index: m });
    }
    found
}

#[derive(Serialize)]
struct TableRow {
    j: usize,
    k: usize,
    sign: i8,
    m: usize,
}

impl MulTable {
    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn dim(&self) -> usize {
        self.signature.dim()
    }

    pub fn entry(&self, j: usize, k: usize) -> SignedBasis {
        self.entries[j * self.dim() + k]
    }

    pub fn row(&self, j: usize) -> &[SignedBasis] {
        let d = self.dim();
        &self.entries[j * d..(j + 1) * d]
    }

    /// Every row and every column hits each basis index exactly once.
    pub fn is_latin(&self) -> bool {
        let d = self.dim();
        let distinct = |indices: Vec<usize>| {
            let mut seen = vec![false; d];
            indices.into_iter().all(|m| !std::mem::replace(&mut seen[m], true))
        };
        (0..d).all(|j| distinct((0..d).map(|k| self.entry(j, k).index).collect()))
            && (0..d).all(|k| distinct((0..d).map(|j| self.entry(j, k).index).collect()))
    }

    /// CSV with header `j,k,sign,m`, meaning `e_j * e_k = sign * e_m`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("j,k,sign,m\n");
        let d = self.dim();
        for j in 0..d {
            for k in 0..d {
                let e = self.entry(j, k);
                let _ = writeln!(out, "{j},{k},{},{}", e.sign.value(), e.index);
            }
        }
        out
    }

    /// Rows in the same order as the CSV, for JSON output.
    pub fn rows(&self) -> impl Serialize + '_ {
        let d = self.dim();
        (0..d * d)
            .map(|i| {
                let e = self.entries[i];
                TableRow { j: i / d, k: i % d, sign: e.sign.value(), m: e.index }
            })
            .collect::<Vec<_>>()
    }
}
