//! Checks for the laws that hold low in the tower and fail higher up.
//!
//! A check enumerates argument tuples, evaluates them in parallel and keeps
//! the first violation in enumeration order, so results do not depend on
//! the number of worker threads. Random tuples are drawn per index from a
//! seeded stream for the same reason.

use num_traits::Zero;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::algebra::{CdElement, Element, Orientation, Sign, Signature};
use crate::error::Error;
use crate::matrix::{mnemonic_check, Mat2};
use crate::sample::{Sampler, DEFAULT_SAMPLES, DEFAULT_SEED};
use crate::scalar::Rational;

/// Which nucleus to test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Nucleus {
    /// `(x u) v = x (u v)`
    Left,
    /// `(u x) v = u (x v)`
    Middle,
    /// `(u v) x = u (v x)`
    Right,
}

/// A law checked over tuples of elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Law {
    /// `x(xy) = (xx)y` and `(yx)x = y(xx)`.
    Alternative,
    /// `x(yx) = (xy)x`.
    Flexible,
    /// `z(x(zy)) = ((zx)z)y`, `x(z(yz)) = ((xz)y)z`, `(zx)(yz) = (z(xy))z`.
    Moufang,
    /// `N(xy) = N(x) N(y)`.
    NormComposition,
    /// `M(x) ⊛ M(y) = M(xy)`.
    Mnemonic,
    /// `X^# ⊛ X = Δ_L I` and `X ⊛ X^# = Δ_R I`, for `X = [[a, b], [c, d]]`.
    Adjugate,
    /// Fixed element in the given nucleus; tuples are `(u, v)`.
    Nucleus(Nucleus),
    /// Fixed element commutes with every `u`.
    Commutes,
}

impl Law {
    pub fn name(&self) -> &'static str {
        match self {
            Law::Alternative => "alternative",
            Law::Flexible => "flexible",
            Law::Moufang => "moufang",
            Law::NormComposition => "norm",
            Law::Mnemonic => "mnemonic",
            Law::Adjugate => "adjugate",
            Law::Nucleus(Nucleus::Left) => "left-nucleus",
            Law::Nucleus(Nucleus::Middle) => "middle-nucleus",
            Law::Nucleus(Nucleus::Right) => "right-nucleus",
            Law::Commutes => "commutes",
        }
    }

    /// Number of free arguments per tuple.
    pub fn arity(&self) -> usize {
        match self {
            Law::Alternative | Law::Flexible | Law::NormComposition | Law::Mnemonic | Law::Nucleus(_) => 2,
            Law::Moufang => 3,
            Law::Adjugate => 4,
            Law::Commutes => 1,
        }
    }

    /// Laws linear in every argument slot, for which basis tuples suffice.
    pub fn multilinear(&self) -> bool {
        matches!(self, Law::Mnemonic | Law::Nucleus(_) | Law::Commutes)
    }

    /// Smallest level at which the law is defined.
    pub fn min_level(&self) -> usize {
        match self {
            Law::Mnemonic => 1,
            _ => 0,
        }
    }

    /// True if `args` (with `fixed` prepended for membership laws) violate
    /// the law.
    pub fn violated(&self, fixed: Option<&CdElement>, args: &[CdElement], o: Orientation) -> bool {
        let m = |x: &CdElement, y: &CdElement| x.mul_oriented(y, o).expect("shared signature");
        match self {
            Law::Alternative => {
                let (x, y) = (&args[0], &args[1]);
                let xx = m(x, x);
                m(x, &m(x, y)) != m(&xx, y) || m(&m(y, x), x) != m(y, &xx)
            }
            Law::Flexible => {
                let (x, y) = (&args[0], &args[1]);
                m(x, &m(y, x)) != m(&m(x, y), x)
            }
            Law::Moufang => {
                let (x, y, z) = (&args[0], &args[1], &args[2]);
                m(z, &m(x, &m(z, y))) != m(&m(&m(z, x), z), y)
                    || m(x, &m(z, &m(y, z))) != m(&m(&m(x, z), y), z)
                    || m(&m(z, x), &m(y, z)) != m(&m(z, &m(x, y)), z)
            }
            Law::NormComposition => {
                let (x, y) = (&args[0], &args[1]);
                m(x, y).norm() != x.norm() * y.norm()
            }
            Law::Mnemonic => !mnemonic_check(&args[0], &args[1], o).expect("level >= 1").holds,
            Law::Adjugate => {
                let x = Mat2::new(args[0].clone(), args[1].clone(), args[2].clone(), args[3].clone())
                    .expect("shared signature");
                let adj = x.adjugate();
                adj.interlaced_oriented(&x, o).expect("shared signature") != Mat2::diagonal(&x.delta_left(o))
                    || x.interlaced_oriented(&adj, o).expect("shared signature") != Mat2::diagonal(&x.delta_right(o))
            }
            Law::Nucleus(which) => {
                let x = fixed.expect("membership law needs a fixed element");
                let (u, v) = (&args[0], &args[1]);
                match which {
                    Nucleus::Left => m(&m(x, u), v) != m(x, &m(u, v)),
                    Nucleus::Middle => m(&m(u, x), v) != m(u, &m(x, v)),
                    Nucleus::Right => m(&m(u, v), x) != m(u, &m(v, x)),
                }
            }
            Law::Commutes => {
                let x = fixed.expect("membership law needs a fixed element");
                m(x, &args[0]) != m(&args[0], x)
            }
        }
    }
}

/// How tuples are chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Every basis tuple, followed by `dense` random dense tuples for laws
    /// that are not multilinear.
    Exhaustive { dense: usize, seed: u64 },
    /// `count` random dense tuples.
    Random { count: usize, seed: u64 },
}

impl Default for Mode {
    fn default() -> Self {
        Mode::Exhaustive { dense: DEFAULT_SAMPLES, seed: DEFAULT_SEED }
    }
}

impl Mode {
    pub fn random(count: usize, seed: u64) -> Self {
        Mode::Random { count, seed }
    }

    /// Basis tuples only, no dense supplement.
    pub fn basis_only() -> Self {
        Mode::Exhaustive { dense: 0, seed: DEFAULT_SEED }
    }

    pub fn seed(&self) -> u64 {
        match *self {
            Mode::Exhaustive { seed, .. } | Mode::Random { seed, .. } => seed,
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Mode::Exhaustive { .. } => "exhaustive-basis",
            Mode::Random { .. } => "random",
        }
    }
}

impl Serialize for Mode {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

/// Verdict of one law over one sample.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LawReport {
    pub law: &'static str,
    pub level: usize,
    pub signs: Vec<Sign>,
    pub orientation: Orientation,
    pub mode: Mode,
    pub seed: u64,
    /// Number of tuples evaluated (up to and including a witness).
    pub tested: usize,
    /// Whether basis tuples alone decide the law (multilinear case).
    pub basis_sufficient: bool,
    pub holds: bool,
    /// Violating tuple, fixed element first for membership laws.
    pub witness: Vec<CdElement>,
    #[serde(skip)]
    kind: Law,
    #[serde(skip)]
    fixed: Option<CdElement>,
}

impl LawReport {
    pub fn kind(&self) -> Law {
        self.kind
    }

    /// Re-evaluates the witness; true if it still violates the law.
    pub fn revalidate(&self) -> bool {
        if self.holds {
            return false;
        }
        let args = if self.fixed.is_some() { &self.witness[1..] } else { &self.witness[..] };
        self.kind.violated(self.fixed.as_ref(), args, self.orientation)
    }
}

fn basis_tuple(sig: &Signature, arity: usize, mut index: usize) -> Vec<CdElement> {
    let dim = sig.dim();
    let mut out = vec![Element::zero(sig); arity];
    for slot in (0..arity).rev() {
        out[slot] = Element::basis(sig, index % dim).expect("index below dim");
        index /= dim;
    }
    out
}

fn dense_tuple(sig: &Signature, arity: usize, seed: u64, index: usize) -> Vec<CdElement> {
    let mut s = Sampler::for_item(seed, index);
    (0..arity).map(|_| s.element(sig)).collect()
}

/// Runs `law` over the tuples selected by `mode`.
pub fn check_law(law: Law, sig: &Signature, mode: Mode, o: Orientation) -> Result<LawReport, Error> {
    check_law_at(law, None, sig, mode, o)
}

fn check_law_at(
    law: Law,
    fixed: Option<&CdElement>,
    sig: &Signature,
    mode: Mode,
    o: Orientation,
) -> Result<LawReport, Error> {
    if sig.level() < law.min_level() {
        return Err(Error::LevelZero);
    }
    let arity = law.arity();
    let (basis_count, dense_count, seed) = match mode {
        Mode::Exhaustive { dense, seed } => {
            let extra = if law.multilinear() { 0 } else { dense };
            (sig.dim().pow(arity as u32), extra, seed)
        }
        Mode::Random { count, seed } => (0, count, seed),
    };
    let tuple = |i: usize| {
        if i < basis_count {
            basis_tuple(sig, arity, i)
        } else {
            dense_tuple(sig, arity, seed, i - basis_count)
        }
    };
    let total = basis_count + dense_count;
    let first_bad = (0..total).into_par_iter().find_first(|&i| law.violated(fixed, &tuple(i), o));
    let (holds, tested, witness) = match first_bad {
        None => (true, total, Vec::new()),
        Some(i) => {
            let mut w: Vec<CdElement> = fixed.into_iter().cloned().collect();
            w.extend(tuple(i));
            (false, i + 1, w)
        }
    };
    Ok(LawReport {
        law: law.name(),
        level: sig.level(),
        signs: sig.signs().to_vec(),
        orientation: o,
        mode,
        seed,
        tested,
        basis_sufficient: law.multilinear() && matches!(mode, Mode::Exhaustive { .. }),
        holds,
        witness,
        kind: law,
        fixed: fixed.cloned(),
    })
}

pub fn check_alternative(sig: &Signature, mode: Mode, o: Orientation) -> LawReport {
    check_law(Law::Alternative, sig, mode, o).expect("defined at every level")
}

pub fn check_flexible(sig: &Signature, mode: Mode, o: Orientation) -> LawReport {
    check_law(Law::Flexible, sig, mode, o).expect("defined at every level")
}

pub fn check_moufang(sig: &Signature, mode: Mode, o: Orientation) -> LawReport {
    check_law(Law::Moufang, sig, mode, o).expect("defined at every level")
}

pub fn check_norm_composition(sig: &Signature, mode: Mode, o: Orientation) -> LawReport {
    check_law(Law::NormComposition, sig, mode, o).expect("defined at every level")
}

/// Membership of `x` in a nucleus, decided over all basis pairs.
pub fn nucleus_membership(x: &CdElement, which: Nucleus, o: Orientation) -> LawReport {
    check_law_at(Law::Nucleus(which), Some(x), x.signature(), Mode::basis_only(), o).expect("defined at every level")
}

/// Centrality report: commutation with every basis element plus membership
/// in all three nuclei.
#[derive(Clone, Debug, Serialize)]
pub struct CenterReport {
    pub central: bool,
    pub commutes: LawReport,
    pub nuclei: Vec<LawReport>,
}

pub fn center_membership(x: &CdElement, o: Orientation) -> CenterReport {
    let commutes =
        check_law_at(Law::Commutes, Some(x), x.signature(), Mode::basis_only(), o).expect("defined at every level");
    let nuclei: Vec<_> =
        [Nucleus::Left, Nucleus::Middle, Nucleus::Right].into_iter().map(|n| nucleus_membership(x, n, o)).collect();
    CenterReport { central: commutes.holds && nuclei.iter().all(|r| r.holds), commutes, nuclei }
}

/// A pair with `x y = 0`, both nonzero.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZeroDivisorPair {
    pub x: CdElement,
    pub y: CdElement,
    pub product: CdElement,
}

#[derive(Clone, Debug, Serialize)]
pub struct ZeroDivisorSearch {
    pub level: usize,
    pub signs: Vec<Sign>,
    pub budget: usize,
    /// Candidates `x` examined, structured first, then random.
    pub examined: usize,
    pub pairs: Vec<ZeroDivisorPair>,
}

/// `(i, j, sign)` triples for `e_i ± e_j`, `i < j`, in search order.
fn basis_sums(dim: usize) -> impl Iterator<Item = (usize, usize, Sign)> {
    (0..dim).flat_map(move |i| (i + 1..dim).flat_map(move |j| [(i, j, Sign::Plus), (i, j, Sign::Minus)]))
}

fn basis_sum(sig: &Signature, (i, j, s): (usize, usize, Sign)) -> CdElement {
    let mut c = vec![Rational::zero(); sig.dim()];
    c[i] = Rational::from(1);
    c[j] = s.apply(Rational::from(1));
    Element::new(sig.clone(), c).expect("length matches")
}

/// Searches for zero divisors, spending at most `budget` candidates.
///
/// Candidates `x` run over `e_i ± e_j` and then random dense elements. For
/// each, the kernel of `y ↦ x y` is computed exactly; a nonzero kernel
/// gives a partner `y`, preferring one of the form `e_k ± e_l`.
pub fn find_zero_divisors(sig: &Signature, budget: usize, seed: u64, o: Orientation) -> ZeroDivisorSearch {
    let dim = sig.dim();
    let structured: Vec<_> = basis_sums(dim).take(budget).collect();
    let random_count = budget - structured.len();
    let candidate = |i: usize| {
        if i < structured.len() {
            basis_sum(sig, structured[i])
        } else {
            Sampler::for_item(seed, i - structured.len()).element(sig)
        }
    };
    let found: Vec<Option<ZeroDivisorPair>> = (0..structured.len() + random_count)
        .into_par_iter()
        .map(|i| {
            let x = candidate(i);
            partner(&x, o).map(|y| {
                let product = x.mul_oriented(&y, o).expect("shared signature");
                ZeroDivisorPair { x, y, product }
            })
        })
        .collect();
    let pairs: Vec<_> = found.into_iter().flatten().collect();
    debug_assert!(pairs.iter().all(|p| p.product.is_zero() && !p.x.is_zero() && !p.y.is_zero()));
    ZeroDivisorSearch {
        level: sig.level(),
        signs: sig.signs().to_vec(),
        budget,
        examined: structured.len() + random_count,
        pairs,
    }
}

/// A nonzero `y` with `x y = 0`, if one exists.
fn partner(x: &CdElement, o: Orientation) -> Option<CdElement> {
    if x.is_zero() {
        return None;
    }
    let sig = x.signature();
    let dim = sig.dim();
    let columns: Vec<CdElement> = (0..dim)
        .map(|k| x.mul_oriented(&Element::basis(sig, k).expect("in range"), o).expect("shared signature"))
        .collect();
    let kernel = kernel_basis(&columns, dim);
    if kernel.is_empty() {
        return None;
    }
    // x (e_k + s e_l) = col_k + s col_l
    for (k, l, s) in basis_sums(dim) {
        let combined = match s {
            Sign::Plus => &columns[k] + &columns[l],
            Sign::Minus => &columns[k] - &columns[l],
        };
        if combined.is_zero() {
            return Some(basis_sum(sig, (k, l, s)));
        }
    }
    Some(Element::new(sig.clone(), kernel.into_iter().next().expect("nonempty")).expect("length matches"))
}

/// Null space of the `dim × dim` matrix whose columns are `columns`.
fn kernel_basis(columns: &[CdElement], dim: usize) -> Vec<Vec<Rational>> {
    // rows[r][c] = coordinate r of column c
    let mut rows: Vec<Vec<Rational>> =
        (0..dim).map(|r| columns.iter().map(|col| col.coeff(r).clone()).collect()).collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..dim {
        let Some(p) = (rank..dim).find(|&r| !rows[r][col].is_zero()) else { continue };
        rows.swap(rank, p);
        let inv = rows[rank][col].inv().expect("nonzero pivot");
        rows[rank] = rows[rank].iter().map(|v| v * &inv).collect();
        for r in 0..dim {
            if r != rank && !rows[r][col].is_zero() {
                let factor = rows[r][col].clone();
                let pivot_row = rows[rank].clone();
                for (v, pv) in rows[r].iter_mut().zip(&pivot_row) {
                    *v = &*v - &(&factor * pv);
                }
            }
        }
        pivots.push(col);
        rank += 1;
    }
    (0..dim)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![Rational::zero(); dim];
            v[free] = Rational::from(1);
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -rows[r][free].clone();
            }
            v
        })
        .collect()
}
