//! The Cayley–Dickson tower with a free sign at every doubling.
//!
//! An element of level `n` is a vector of `2^n` coefficients. Basis indexing:
//! `e_0 = 1`, and at doubling step `m` the upper half of the basis is the
//! image of the lower half under left multiplication by the new unit `l`,
//! i.e. `e_{2^m + j} = l * e_j`. Splitting an element into halves therefore
//! gives `x = q + l*p` with `q = coeffs[..h]` and `p = coeffs[h..]`.
//!
//! Multiplication of `(q1 + l p1)(q2 + l p2)` with `l^2 = g` is
//!
//! ```text
//! lo = q1 q2 + g (p2 p1*)
//! hi = q2 p1 + q1* p2
//! ```
//!
//! which is the orientation reproduced by the interlaced matrix product (see
//! [`crate::matrix`]). [`Orientation::Verbatim`] swaps the first cross term to
//! `g (p2* p1)` for side-by-side comparison.

mod table;

pub use table::{mul_table, MulTable, SignedBasis, DEFAULT_TABLE_BOUND};

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::scalar::{Rational, Scalar};

/// Square of a doubling unit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    pub fn value(self) -> i8 {
        match self {
            Sign::Minus => -1,
            Sign::Plus => 1,
        }
    }

    pub fn from_value(v: i64) -> Option<Sign> {
        match v {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Sign::Minus => '-',
            Sign::Plus => '+',
        }
    }

    pub fn apply<S: Scalar>(self, x: S) -> S {
        match self {
            Sign::Plus => x,
            Sign::Minus => -x,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        match self {
            Sign::Minus => Sign::Plus,
            Sign::Plus => Sign::Minus,
        }
    }
}

impl Serialize for Sign {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_i8(self.value())
    }
}

impl<'de> Deserialize<'de> for Sign {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let v = i64::deserialize(deserializer)?;
        Sign::from_value(v).ok_or_else(|| serde::de::Error::custom(format!("sign must be +1 or -1, got {v}")))
    }
}

/// Level plus the square of each doubling unit, innermost first.
///
/// `signs[m]` is the square of the unit introduced at doubling step `m + 1`,
/// so the level equals `signs.len()`. Level 0 is the base field.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Signature {
    signs: Vec<Sign>,
}

impl Signature {
    pub fn new(signs: Vec<Sign>) -> Self {
        Signature { signs }
    }

    pub fn base() -> Self {
        Signature { signs: Vec::new() }
    }

    /// All units square to -1.
    pub fn division(level: usize) -> Self {
        Signature { signs: vec![Sign::Minus; level] }
    }

    /// `(-1, -1, +1)`: split octonions.
    pub fn split_octonion() -> Self {
        Signature { signs: vec![Sign::Minus, Sign::Minus, Sign::Plus] }
    }

    /// Parses a string of `+`/`-` characters, one per doubling.
    pub fn from_pattern(pattern: &str) -> Result<Self, Error> {
        pattern
            .chars()
            .map(|c| match c {
                '+' => Ok(Sign::Plus),
                '-' => Ok(Sign::Minus),
                other => Err(Error::InvalidSigns(format!("unexpected character {other:?} in {pattern:?}"))),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Signature::new)
    }

    /// Every sign pattern of the given level, in lexicographic `-` < `+` order.
    pub fn all_patterns(level: usize) -> Vec<Signature> {
        (0..1usize << level)
            .map(|bits| {
                Signature::new(
                    (0..level)
                        .map(|m| if bits >> (level - 1 - m) & 1 == 1 { Sign::Plus } else { Sign::Minus })
                        .collect(),
                )
            })
            .collect()
    }

    pub fn level(&self) -> usize {
        self.signs.len()
    }

    pub fn dim(&self) -> usize {
        1 << self.signs.len()
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    /// Sign of the outermost doubling.
    pub fn top(&self) -> Option<Sign> {
        self.signs.last().copied()
    }

    pub fn truncated(&self) -> Option<Signature> {
        let (_, rest) = self.signs.split_last()?;
        Some(Signature::new(rest.to_vec()))
    }

    pub fn extended(&self, top: Sign) -> Signature {
        let mut signs = self.signs.clone();
        signs.push(top);
        Signature::new(signs)
    }

    pub fn is_division(&self) -> bool {
        self.signs.iter().all(|&s| s == Sign::Minus)
    }

    pub fn pattern(&self) -> String {
        self.signs.iter().map(|s| s.as_char()).collect()
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "level {} [{}]", self.level(), self.pattern())
    }
}

impl FromStr for Signature {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        Signature::from_pattern(s)
    }
}

/// Which orientation of the first cross term the product uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum Orientation {
    /// `lo = q1 q2 + g p2 p1*`; agrees with the interlaced matrix model.
    #[default]
    #[serde(rename = "default")]
    Standard,
    /// `lo = q1 q2 + g p2* p1`, the cross term as it is usually printed.
    #[serde(rename = "eq1-verbatim")]
    Verbatim,
}

impl Orientation {
    pub fn tag(self) -> &'static str {
        match self {
            Orientation::Standard => "default",
            Orientation::Verbatim => "eq1-verbatim",
        }
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Orientation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "default" => Ok(Orientation::Standard),
            "eq1-verbatim" => Ok(Orientation::Verbatim),
            other => Err(Error::InvalidOrientation(other.to_string())),
        }
    }
}

/// An element of the algebra with the given signature.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Element<S: Scalar = Rational> {
    signature: Signature,
    coeffs: Vec<S>,
}

/// Cayley–Dickson element with exact rational coefficients.
pub type CdElement = Element<Rational>;

impl<S: Scalar> Element<S> {
    pub fn new(signature: Signature, coeffs: Vec<S>) -> Result<Self, Error> {
        if coeffs.len() != signature.dim() {
            return Err(Error::BadLength { got: coeffs.len(), expected: signature.dim() });
        }
        Ok(Element { signature, coeffs })
    }

    pub fn zero(signature: &Signature) -> Self {
        Element { coeffs: vec![S::zero(); signature.dim()], signature: signature.clone() }
    }

    pub fn one(signature: &Signature) -> Self {
        Self::scalar(signature, S::one())
    }

    /// `s * e_0`.
    pub fn scalar(signature: &Signature, s: S) -> Self {
        let mut x = Self::zero(signature);
        x.coeffs[0] = s;
        x
    }

    /// The basis element `e_k`.
    pub fn basis(signature: &Signature, k: usize) -> Result<Self, Error> {
        let dim = signature.dim();
        if k >= dim {
            return Err(Error::IndexOutOfRange { index: k, dim });
        }
        let mut x = Self::zero(signature);
        x.coeffs[k] = S::one();
        Ok(x)
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn level(&self) -> usize {
        self.signature.level()
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &S {
        &self.coeffs[k]
    }

    pub fn into_coeffs(self) -> Vec<S> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// True when every coordinate but `e_0` vanishes.
    pub fn is_scalar(&self) -> bool {
        self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// Coordinate on `e_0`.
    pub fn real_part(&self) -> &S {
        &self.coeffs[0]
    }

    fn check_same(&self, other: &Self) -> Result<(), Error> {
        if self.signature != other.signature {
            return Err(Error::SignatureMismatch { left: self.signature.clone(), right: other.signature.clone() });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, Error> {
        self.check_same(other)?;
        Ok(self.zip_with(other, |a, b| a.clone() + b.clone()))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, Error> {
        self.check_same(other)?;
        Ok(self.zip_with(other, |a, b| a.clone() - b.clone()))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&S, &S) -> S) -> Self {
        Element {
            signature: self.signature.clone(),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| f(a, b)).collect(),
        }
    }

    /// Multiplies every coordinate by a base-field scalar.
    pub fn scale(&self, s: &S) -> Self {
        Element {
            signature: self.signature.clone(),
            coeffs: self.coeffs.iter().map(|c| c.clone() * s.clone()).collect(),
        }
    }

    /// Product in the default orientation.
    pub fn try_mul(&self, other: &Self) -> Result<Self, Error> {
        self.mul_oriented(other, Orientation::Standard)
    }

    pub fn mul_oriented(&self, other: &Self, orientation: Orientation) -> Result<Self, Error> {
        self.check_same(other)?;
        Ok(Element {
            signature: self.signature.clone(),
            coeffs: mul_coeffs(&self.coeffs, &other.coeffs, self.signature.signs(), orientation),
        })
    }

    /// Standard involution: `(q + l p)* = q* - l p`, which negates every
    /// coordinate except the one on `e_0`.
    pub fn conjugate(&self) -> Self {
        Element { signature: self.signature.clone(), coeffs: conj_coeffs(&self.coeffs) }
    }

    /// `N(q + l p) = N(q) - g N(p)`, the `e_0` coordinate of `x x*`.
    pub fn norm(&self) -> S {
        norm_coeffs(&self.coeffs, self.signature.signs())
    }

    /// `x x*` computed by multiplication rather than the closed form.
    pub fn times_conjugate(&self, orientation: Orientation) -> Self {
        Element {
            signature: self.signature.clone(),
            coeffs: mul_coeffs(&self.coeffs, &conj_coeffs(&self.coeffs), self.signature.signs(), orientation),
        }
    }

    /// The candidate `x* / N(x)` together with a check of both sides.
    pub fn inverse_oriented(&self, orientation: Orientation) -> Result<InverseReport<S>, Error> {
        let n = self.norm();
        if n.is_zero() {
            return Err(Error::NotInvertible { norm: n.to_string() });
        }
        let value = self.conjugate().scale(&n.try_recip()?);
        let one = Self::one(&self.signature);
        let right = self.mul_oriented(&value, orientation)?;
        let left = value.mul_oriented(self, orientation)?;
        Ok(InverseReport { right_holds: right.approx_eq(&one), left_holds: left.approx_eq(&one), value })
    }

    pub fn inverse(&self) -> Result<InverseReport<S>, Error> {
        self.inverse_oriented(Orientation::Standard)
    }

    /// `x = q + l p` split into `(q, p)` one level down.
    pub fn split_pair(&self) -> Result<PairView<S>, Error> {
        let sig = self.signature.truncated().ok_or(Error::LevelZero)?;
        let h = self.dim() / 2;
        Ok(PairView {
            lo: Element { signature: sig.clone(), coeffs: self.coeffs[..h].to_vec() },
            hi: Element { signature: sig, coeffs: self.coeffs[h..].to_vec() },
        })
    }

    /// Coordinate-wise comparison with [`Scalar::approx_eq`].
    pub fn approx_eq(&self, other: &Self) -> bool {
        self.signature == other.signature && self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| a.approx_eq(b))
    }

    /// Same coordinates with another coefficient type.
    pub fn map_scalars<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Element<T> {
        Element { signature: self.signature.clone(), coeffs: self.coeffs.iter().map(f).collect() }
    }
}

impl CdElement {
    /// Builds an element from integer coordinates.
    pub fn from_ints(signature: &Signature, coeffs: &[i64]) -> Result<Self, Error> {
        Self::new(signature.clone(), coeffs.iter().map(|&c| Rational::from(c)).collect())
    }

    pub fn to_f64(&self) -> Element<f64> {
        self.map_scalars(Rational::to_f64)
    }
}

/// Result of [`Element::inverse`]. `right_holds` records `x * value == 1`,
/// `left_holds` records `value * x == 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct InverseReport<S: Scalar = Rational> {
    pub value: Element<S>,
    pub left_holds: bool,
    pub right_holds: bool,
}

impl<S: Scalar> InverseReport<S> {
    pub fn two_sided(&self) -> bool {
        self.left_holds && self.right_holds
    }
}

/// The halves `(q, p)` of `x = q + l p`.
#[derive(Clone, Debug, PartialEq)]
pub struct PairView<S: Scalar = Rational> {
    pub lo: Element<S>,
    pub hi: Element<S>,
}

impl<S: Scalar> PairView<S> {
    pub fn new(lo: Element<S>, hi: Element<S>) -> Result<Self, Error> {
        lo.check_same(&hi)?;
        Ok(PairView { lo, hi })
    }

    /// `lo + l hi` one level up, with `l^2 = top`.
    pub fn join(&self, top: Sign) -> Result<Element<S>, Error> {
        self.lo.check_same(&self.hi)?;
        let mut coeffs = Vec::with_capacity(2 * self.lo.dim());
        coeffs.extend_from_slice(&self.lo.coeffs);
        coeffs.extend_from_slice(&self.hi.coeffs);
        Ok(Element { signature: self.lo.signature.extended(top), coeffs })
    }
}

pub(crate) fn conj_coeffs<S: Scalar>(x: &[S]) -> Vec<S> {
    x.iter().enumerate().map(|(i, c)| if i == 0 { c.clone() } else { -c.clone() }).collect()
}

fn norm_coeffs<S: Scalar>(x: &[S], signs: &[Sign]) -> S {
    match signs.split_last() {
        None => x[0].clone() * x[0].clone(),
        Some((&top, rest)) => {
            let h = x.len() / 2;
            // N(q) - g N(p)
            norm_coeffs(&x[..h], rest) + (-top).apply(norm_coeffs(&x[h..], rest))
        }
    }
}

fn is_zero_slice<S: Scalar>(x: &[S]) -> bool {
    x.iter().all(Zero::is_zero)
}

fn add_into<S: Scalar>(acc: &mut [S], other: Vec<S>, sign: Sign) {
    for (a, b) in acc.iter_mut().zip(other) {
        let cur = std::mem::replace(a, S::zero());
        *a = match sign {
            Sign::Plus => cur + b,
            Sign::Minus => cur - b,
        };
    }
}

/// Recursive doubling product on raw coordinate slices.
pub(crate) fn mul_coeffs<S: Scalar>(x: &[S], y: &[S], signs: &[Sign], orientation: Orientation) -> Vec<S> {
    let Some((&top, rest)) = signs.split_last() else {
        return vec![x[0].clone() * y[0].clone()];
    };
    if is_zero_slice(x) || is_zero_slice(y) {
        return vec![S::zero(); x.len()];
    }
    let h = x.len() / 2;
    let (q1, p1) = x.split_at(h);
    let (q2, p2) = y.split_at(h);

    let mut lo = mul_coeffs(q1, q2, rest, orientation);
    let cross = match orientation {
        Orientation::Standard => mul_coeffs(p2, &conj_coeffs(p1), rest, orientation),
        Orientation::Verbatim => mul_coeffs(&conj_coeffs(p2), p1, rest, orientation),
    };
    add_into(&mut lo, cross, top);

    let mut hi = mul_coeffs(q2, p1, rest, orientation);
    add_into(&mut hi, mul_coeffs(&conj_coeffs(q1), p2, rest, orientation), Sign::Plus);

    lo.extend(hi);
    lo
}

// Operator forms panic on mismatched signatures; use the `try_*` methods
// when the operands come from untrusted input.

impl<S: Scalar> Add for &Element<S> {
    type Output = Element<S>;
    fn add(self, rhs: &Element<S>) -> Element<S> {
        self.try_add(rhs).expect("adding elements of different algebras")
    }
}

impl<S: Scalar> Sub for &Element<S> {
    type Output = Element<S>;
    fn sub(self, rhs: &Element<S>) -> Element<S> {
        self.try_sub(rhs).expect("subtracting elements of different algebras")
    }
}

impl<S: Scalar> Mul for &Element<S> {
    type Output = Element<S>;
    fn mul(self, rhs: &Element<S>) -> Element<S> {
        self.try_mul(rhs).expect("multiplying elements of different algebras")
    }
}

impl<S: Scalar> Neg for &Element<S> {
    type Output = Element<S>;
    fn neg(self) -> Element<S> {
        Element { signature: self.signature.clone(), coeffs: self.coeffs.iter().map(|c| -c.clone()).collect() }
    }
}

impl<S: Scalar> fmt::Display for Element<S> {
    /// Sum of nonzero terms, e.g. `1 - 2*e3 + 1/2*e5`; zero prints as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let text = c.to_string();
            let (neg, mag) = match text.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, text),
            };
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            match (k, mag.as_str()) {
                (0, _) => f.write_str(&mag)?,
                (_, "1") => write!(f, "e{k}")?,
                _ => write!(f, "{mag}*e{k}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl<S: Scalar> fmt::Debug for Element<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} <{}>", self, self.signature.pattern())
    }
}

#[derive(Serialize, Deserialize)]
struct ElementRepr {
    level: usize,
    signs: Vec<Sign>,
    coeffs: Vec<Rational>,
}

impl Serialize for CdElement {
    fn serialize<Ser: serde::Serializer>(&self, serializer: Ser) -> Result<Ser::Ok, Ser::Error> {
        ElementRepr { level: self.level(), signs: self.signature.signs.clone(), coeffs: self.coeffs.clone() }
            .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CdElement {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = ElementRepr::deserialize(deserializer)?;
        if repr.signs.len() != repr.level {
            return Err(serde::de::Error::custom(format!(
                "level {} does not match {} signs",
                repr.level,
                repr.signs.len()
            )));
        }
        Element::new(Signature::new(repr.signs), repr.coeffs).map_err(serde::de::Error::custom)
    }
}
