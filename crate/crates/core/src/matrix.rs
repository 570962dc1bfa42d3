//! 2×2 matrices over a tower algebra and the interlaced product
//!
//! ```text
//! [a  b] ⊛ [a' b']   [a a' + c' b    b' a + b d']
//! [c  d]   [c' d'] = [a' c + d c'    c b' + d' d ]
//! ```
//!
//! Each entry is one product in natural matrix order (R) plus one with its
//! factors swapped (L), in the pattern `[[R+L, L+R], [L+R, R+L]]`. Embedding
//! `x = q + l p` as `M(x) = [[q, g p*], [p, q*]]` turns the tower product into
//! this matrix product: `M(x) ⊛ M(y) = M(x y)` at every level.

use serde::{Deserialize, Serialize};

use crate::algebra::{CdElement, Element, Orientation, PairView, Sign, Signature};
use crate::error::Error;
use crate::identities::{nucleus_membership, LawReport, Nucleus};
use crate::scalar::{Rational, Scalar};

/// Entry names in row-major order.
pub const ENTRY_NAMES: [&str; 4] = ["a", "b", "c", "d"];

/// `[[a, b], [c, d]]` with entries in one algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat2<S: Scalar = Rational> {
    pub(crate) a: Element<S>,
    pub(crate) b: Element<S>,
    pub(crate) c: Element<S>,
    pub(crate) d: Element<S>,
}

#[derive(Serialize, Deserialize)]
struct MatRepr {
    a: CdElement,
    b: CdElement,
    c: CdElement,
    d: CdElement,
}

impl Serialize for Mat2 {
    fn serialize<Ser: serde::Serializer>(&self, serializer: Ser) -> Result<Ser::Ok, Ser::Error> {
        MatRepr { a: self.a.clone(), b: self.b.clone(), c: self.c.clone(), d: self.d.clone() }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Mat2 {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let r = MatRepr::deserialize(deserializer)?;
        Mat2::new(r.a, r.b, r.c, r.d).map_err(serde::de::Error::custom)
    }
}

impl<S: Scalar> Mat2<S> {
    pub fn new(a: Element<S>, b: Element<S>, c: Element<S>, d: Element<S>) -> Result<Self, Error> {
        for other in [&b, &c, &d] {
            if other.signature() != a.signature() {
                return Err(Error::SignatureMismatch { left: a.signature().clone(), right: other.signature().clone() });
            }
        }
        Ok(Mat2 { a, b, c, d })
    }

    pub fn identity(signature: &Signature) -> Self {
        let (one, zero) = (Element::one(signature), Element::zero(signature));
        Mat2 { a: one.clone(), b: zero.clone(), c: zero, d: one }
    }

    /// `diag(s, s)`.
    pub fn diagonal(s: &Element<S>) -> Self {
        let zero = Element::zero(s.signature());
        Mat2 { a: s.clone(), b: zero.clone(), c: zero, d: s.clone() }
    }

    pub fn signature(&self) -> &Signature {
        self.a.signature()
    }

    pub fn a(&self) -> &Element<S> {
        &self.a
    }
    pub fn b(&self) -> &Element<S> {
        &self.b
    }
    pub fn c(&self) -> &Element<S> {
        &self.c
    }
    pub fn d(&self) -> &Element<S> {
        &self.d
    }

    /// Entries paired with their names, row-major.
    pub fn entries(&self) -> [(&'static str, &Element<S>); 4] {
        [("a", &self.a), ("b", &self.b), ("c", &self.c), ("d", &self.d)]
    }

    fn check_same(&self, other: &Self) -> Result<(), Error> {
        if self.signature() != other.signature() {
            return Err(Error::SignatureMismatch { left: self.signature().clone(), right: other.signature().clone() });
        }
        Ok(())
    }

    /// The interlaced product with entries multiplied in the default
    /// orientation.
    pub fn interlaced(&self, other: &Self) -> Result<Self, Error> {
        self.interlaced_oriented(other, Orientation::Standard)
    }

    pub fn interlaced_oriented(&self, other: &Self, o: Orientation) -> Result<Self, Error> {
        self.check_same(other)?;
        let m = |x: &Element<S>, y: &Element<S>| x.mul_oriented(y, o);
        let (a, b, c, d) = (&self.a, &self.b, &self.c, &self.d);
        let (a2, b2, c2, d2) = (&other.a, &other.b, &other.c, &other.d);
        Ok(Mat2 {
            a: &m(a, a2)? + &m(c2, b)?,
            b: &m(b2, a)? + &m(b, d2)?,
            c: &m(a2, c)? + &m(d, c2)?,
            d: &m(c, b2)? + &m(d2, d)?,
        })
    }

    /// Ordinary matrix product, every term in natural order.
    pub fn ordinary(&self, other: &Self, o: Orientation) -> Result<Self, Error> {
        self.check_same(other)?;
        let m = |x: &Element<S>, y: &Element<S>| x.mul_oriented(y, o);
        let (a, b, c, d) = (&self.a, &self.b, &self.c, &self.d);
        let (a2, b2, c2, d2) = (&other.a, &other.b, &other.c, &other.d);
        Ok(Mat2 {
            a: &m(a, a2)? + &m(b, c2)?,
            b: &m(a, b2)? + &m(b, d2)?,
            c: &m(c, a2)? + &m(d, c2)?,
            d: &m(c, b2)? + &m(d, d2)?,
        })
    }

    /// `X^# = [[d, -b], [-c, a]]`.
    pub fn adjugate(&self) -> Self {
        Mat2 { a: self.d.clone(), b: -&self.b, c: -&self.c, d: self.a.clone() }
    }

    /// `d a - c b`.
    pub fn delta_left(&self, o: Orientation) -> Element<S> {
        &self.d.mul_oriented(&self.a, o).expect("shared signature")
            - &self.c.mul_oriented(&self.b, o).expect("shared signature")
    }

    /// `a d - c b`.
    pub fn delta_right(&self, o: Orientation) -> Element<S> {
        &self.a.mul_oriented(&self.d, o).expect("shared signature")
            - &self.c.mul_oriented(&self.b, o).expect("shared signature")
    }

    /// Every entry multiplied on the left by `s`.
    pub fn left_scaled(&self, s: &Element<S>, o: Orientation) -> Result<Self, Error> {
        Ok(Mat2 {
            a: s.mul_oriented(&self.a, o)?,
            b: s.mul_oriented(&self.b, o)?,
            c: s.mul_oriented(&self.c, o)?,
            d: s.mul_oriented(&self.d, o)?,
        })
    }

    /// Every entry multiplied on the right by `s`.
    pub fn right_scaled(&self, s: &Element<S>, o: Orientation) -> Result<Self, Error> {
        Ok(Mat2 {
            a: self.a.mul_oriented(s, o)?,
            b: self.b.mul_oriented(s, o)?,
            c: self.c.mul_oriented(s, o)?,
            d: self.d.mul_oriented(s, o)?,
        })
    }

    /// First entry (row-major) where the two matrices differ.
    pub fn first_difference(&self, other: &Self) -> Option<&'static str> {
        self.entries()
            .into_iter()
            .zip(other.entries())
            .find(|((_, x), (_, y))| !x.approx_eq(y))
            .map(|((name, _), _)| name)
    }

    pub fn approx_eq(&self, other: &Self) -> bool {
        self.first_difference(other).is_none()
    }

    pub fn entry(&self, name: &str) -> Option<&Element<S>> {
        self.entries().into_iter().find(|(n, _)| *n == name).map(|(_, e)| e)
    }
}

/// Which factor order a term of the interlaced product uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Order {
    /// Natural order of ordinary matrix multiplication.
    R,
    /// Factors swapped.
    L,
}

/// One product contributing to an entry of `X ⊛ Y`.
#[derive(Clone, Debug, Serialize)]
pub struct Term {
    pub order: Order,
    /// Names of the factors as written, e.g. `["c'", "b"]`.
    pub factors: [String; 2],
    pub value: CdElement,
}

#[derive(Clone, Debug, Serialize)]
pub struct EntryTerms {
    pub entry: &'static str,
    pub terms: Vec<Term>,
}

impl EntryTerms {
    /// Tags in the order the terms are written, e.g. `"RL"`.
    pub fn tags(&self) -> String {
        self.terms
            .iter()
            .map(|t| match t.order {
                Order::R => 'R',
                Order::L => 'L',
            })
            .collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RlReport {
    pub entries: Vec<EntryTerms>,
    /// Tag strings arranged as a 2×2 grid.
    pub pattern: [[String; 2]; 2],
    /// Whether the grid is `[[RL, LR], [LR, RL]]` with one R and one L per entry.
    pub matches_expected: bool,
}

/// The expected tag grid.
pub const EXPECTED_RL_PATTERN: [[&str; 2]; 2] = [["RL", "LR"], ["LR", "RL"]];

/// Lists the two products behind each entry of `X ⊛ Y`, tagged by order.
///
/// A term is tagged R when its factors appear in the order ordinary matrix
/// multiplication would use (row entry of `X`, then column entry of `Y`).
pub fn rl_pattern_report(x: &Mat2, y: &Mat2) -> Result<RlReport, Error> {
    x.check_same(y)?;
    // (entry, [(left factor, right factor)]) for each displayed term; names
    // without a prime belong to X.
    let layout: [(&str, [(&str, &str); 2]); 4] = [
        ("a", [("a", "a'"), ("c'", "b")]),
        ("b", [("b'", "a"), ("b", "d'")]),
        ("c", [("a'", "c"), ("d", "c'")]),
        ("d", [("c", "b'"), ("d'", "d")]),
    ];
    let lookup = |name: &str| -> &CdElement {
        match name.strip_suffix('\'') {
            Some(n) => y.entry(n).expect("known entry"),
            None => x.entry(name).expect("known entry"),
        }
    };
    let mut entries = Vec::with_capacity(4);
    for (entry, terms) in layout {
        let terms = terms
            .iter()
            .map(|&(l, r)| {
                let order = if l.ends_with('\'') { Order::L } else { Order::R };
                Ok(Term { order, factors: [l.to_string(), r.to_string()], value: lookup(l).try_mul(lookup(r))? })
            })
            .collect::<Result<Vec<_>, Error>>()?;
        entries.push(EntryTerms { entry, terms });
    }
    let pattern = [[entries[0].tags(), entries[1].tags()], [entries[2].tags(), entries[3].tags()]];
    let matches_expected = entries.iter().all(|e| e.terms.len() == 2)
        && pattern.iter().flatten().zip(EXPECTED_RL_PATTERN.iter().flatten()).all(|(got, want)| got == want);
    Ok(RlReport { entries, pattern, matches_expected })
}

/// A matrix of the form `[[q, g p*], [p, q*]]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddedMat {
    mat: Mat2,
    top: Sign,
}

impl EmbeddedMat {
    /// Accepts `mat` only if `b = g c*` and `d = a*`.
    pub fn try_new(mat: Mat2, top: Sign) -> Result<Self, Error> {
        let expected_b = conj_scaled(&mat.c, top);
        if mat.b != expected_b {
            return Err(Error::NotInImage(format!("b = {} but g c* = {}", mat.b, expected_b)));
        }
        if mat.d != mat.a.conjugate() {
            return Err(Error::NotInImage(format!("d = {} but a* = {}", mat.d, mat.a.conjugate())));
        }
        Ok(EmbeddedMat { mat, top })
    }

    pub fn mat(&self) -> &Mat2 {
        &self.mat
    }

    pub fn top_sign(&self) -> Sign {
        self.top
    }

    pub fn into_mat(self) -> Mat2 {
        self.mat
    }
}

fn conj_scaled(x: &CdElement, s: Sign) -> CdElement {
    match s {
        Sign::Plus => x.conjugate(),
        Sign::Minus => -&x.conjugate(),
    }
}

/// `M(q + l p) = [[q, g p*], [p, q*]]`, entries one level down.
pub fn m_embed(x: &CdElement) -> Result<EmbeddedMat, Error> {
    let top = x.signature().top().ok_or(Error::LevelZero)?;
    let PairView { lo: q, hi: p } = x.split_pair()?;
    let mat = Mat2 { b: conj_scaled(&p, top), d: q.conjugate(), a: q, c: p };
    Ok(EmbeddedMat { mat, top })
}

/// Inverse of [`m_embed`]; rejects matrices outside its image.
pub fn m_extract(mat: &Mat2, top: Sign) -> Result<CdElement, Error> {
    let embedded = EmbeddedMat::try_new(mat.clone(), top)?;
    PairView::new(embedded.mat.a, embedded.mat.c)?.join(top)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MnemonicWitness {
    pub x: CdElement,
    pub y: CdElement,
    pub entry: &'static str,
    /// Entry of `M(x) ⊛ M(y)`.
    pub lhs: CdElement,
    /// Entry of `M(x y)`.
    pub rhs: CdElement,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MnemonicVerdict {
    pub holds: bool,
    pub orientation: Orientation,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<MnemonicWitness>,
}

/// Compares `M(x) ⊛ M(y)` with `M(x y)`, both sides using `o` for every
/// product.
pub fn mnemonic_check(x: &CdElement, y: &CdElement, o: Orientation) -> Result<MnemonicVerdict, Error> {
    let lhs = m_embed(x)?.mat.interlaced_oriented(&m_embed(y)?.mat, o)?;
    let rhs = m_embed(&x.mul_oriented(y, o)?)?.mat;
    let witness = lhs.first_difference(&rhs).map(|entry| MnemonicWitness {
        x: x.clone(),
        y: y.clone(),
        entry,
        lhs: lhs.entry(entry).cloned().expect("known entry"),
        rhs: rhs.entry(entry).cloned().expect("known entry"),
    });
    Ok(MnemonicVerdict { holds: witness.is_none(), orientation: o, witness })
}

/// Which side a one-sided inverse acts from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// Outcome of building `Δ_L^{-1} X^#` or `X^# Δ_R^{-1}`.
#[derive(Clone, Debug, Serialize)]
pub struct OneSidedInverse {
    pub side: Side,
    pub delta: CdElement,
    pub candidate: Mat2,
    /// Whether `delta` lies in the nucleus the construction needs.
    pub delta_in_nucleus: bool,
    pub nucleus_report: LawReport,
    /// `candidate ⊛ X = I` for the left inverse, `X ⊛ candidate = I` for
    /// the right one, checked exactly.
    pub verified: bool,
}

/// `Δ_L^{-1} X^#` with Δ_L^{-1} multiplied into every entry from the left.
pub fn interlaced_left_inverse(x: &Mat2, o: Orientation) -> Result<OneSidedInverse, Error> {
    one_sided_inverse(x, Side::Left, o)
}

/// `X^# Δ_R^{-1}` with Δ_R^{-1} multiplied into every entry from the right.
pub fn interlaced_right_inverse(x: &Mat2, o: Orientation) -> Result<OneSidedInverse, Error> {
    one_sided_inverse(x, Side::Right, o)
}

fn one_sided_inverse(x: &Mat2, side: Side, o: Orientation) -> Result<OneSidedInverse, Error> {
    let delta = match side {
        Side::Left => x.delta_left(o),
        Side::Right => x.delta_right(o),
    };
    let delta_inv = delta.inverse_oriented(o)?.value;
    let adj = x.adjugate();
    let identity = Mat2::identity(x.signature());
    let (candidate, nucleus, verified) = match side {
        Side::Left => {
            let cand = adj.left_scaled(&delta_inv, o)?;
            let ok = cand.interlaced_oriented(x, o)? == identity;
            (cand, Nucleus::Left, ok)
        }
        Side::Right => {
            let cand = adj.right_scaled(&delta_inv, o)?;
            let ok = x.interlaced_oriented(&cand, o)? == identity;
            (cand, Nucleus::Right, ok)
        }
    };
    let nucleus_report = nucleus_membership(&delta, nucleus, o);
    Ok(OneSidedInverse { side, delta_in_nucleus: nucleus_report.holds, nucleus_report, delta, candidate, verified })
}

/// `x + i y ↦ [[x, -y], [y, x]]` with real entries.
pub fn classic_embed_complex(z: &CdElement) -> Result<Mat2, Error> {
    if z.level() != 1 || !z.signature().is_division() {
        return Err(Error::NonDivisionSignature(z.signature().clone()));
    }
    let base = Signature::base();
    let re = Element::scalar(&base, z.coeff(0).clone());
    let im = Element::scalar(&base, z.coeff(1).clone());
    Mat2::new(re.clone(), -&im, im, re)
}

/// `q0 + q1 i + q2 j + q3 k ↦ [[q0 + i q3, -q2 + i q1], [q2 + i q1, q0 - i q3]]`
/// with complex entries.
///
/// The input is read with `i = e1`, `j = e2` and `k = e1 e2` (which is
/// `-e3` in this basis). The result equals `M(φ(q))` for the automorphism φ
/// sending `i, j, k` to `e3, e2, e1`, i.e. the level-2 embedding with `k`
/// as the complex unit of the entries and `j` as the doubling unit.
pub fn classic_embed_quaternion(q: &CdElement) -> Result<Mat2, Error> {
    if q.level() != 2 || !q.signature().is_division() {
        return Err(Error::NonDivisionSignature(q.signature().clone()));
    }
    let sig = q.signature();
    let k = CdElement::basis(sig, 1)?.try_mul(&Element::basis(sig, 2)?)?;
    // k = sigma e3
    let sigma = k.coeff(3).clone();
    let (q0, q1, q2) = (q.coeff(0).clone(), q.coeff(1).clone(), q.coeff(2).clone());
    let q3 = q.coeff(3).clone() * sigma;
    let complex = Signature::division(1);
    let z = |re: Rational, im: Rational| Element::new(complex.clone(), vec![re, im]).expect("two coordinates");
    Mat2::new(z(q0.clone(), q3.clone()), z(-q2.clone(), q1.clone()), z(q2, q1), z(q0, -q3))
}

/// JSON form `{"gamma": ±1, "entries": {...}}`.
#[derive(Serialize)]
pub struct MatrixJson<'a> {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<i8>,
    pub entries: &'a Mat2,
}

impl EmbeddedMat {
    pub fn to_json(&self) -> MatrixJson<'_> {
        MatrixJson { gamma: Some(self.top.value()), entries: &self.mat }
    }
}
