//! Text expressions over basis symbols.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary ('*' unary)*
//! unary := '-' unary | atom
//! atom  := INT ('/' INT)? | 'e' INT | ('conj' | 'norm' | 'inv') '(' expr ')' | '(' expr ')'
//! ```
//!
//! Binary operators group to the left. Parentheses are kept in the tree as
//! [`Expr::Group`], so `e1*e2*e3` and `(e1*e2)*e3` evaluate identically but
//! only the first is flagged by [`reassociation_warnings`].

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use serde::Serialize;

use crate::algebra::{CdElement, Element, Orientation, Signature};
use crate::error::Error;
use crate::scalar::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Rational(Rational),
    Basis(usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Conj(Box<Expr>),
    Norm(Box<Expr>),
    Inv(Box<Expr>),
    /// Parenthesized subexpression.
    Group(Box<Expr>),
}

impl Expr {
    /// The same tree with every [`Expr::Group`] removed.
    pub fn without_groups(&self) -> Expr {
        use Expr::*;
        let b = |e: &Expr| Box::new(e.without_groups());
        match self {
            Rational(_) | Basis(_) => self.clone(),
            Neg(x) => Neg(b(x)),
            Add(x, y) => Add(b(x), b(y)),
            Sub(x, y) => Sub(b(x), b(y)),
            Mul(x, y) => Mul(b(x), b(y)),
            Conj(x) => Conj(b(x)),
            Norm(x) => Norm(b(x)),
            Inv(x) => Inv(b(x)),
            Group(x) => x.without_groups(),
        }
    }
}

/// Fully parenthesized canonical form.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Rational(r) if r.is_negative() => write!(f, "(-{})", -r.clone()),
            Expr::Rational(r) => write!(f, "{r}"),
            Expr::Basis(k) => write!(f, "e{k}"),
            Expr::Neg(x) => write!(f, "(-{x})"),
            Expr::Add(x, y) => write!(f, "({x} + {y})"),
            Expr::Sub(x, y) => write!(f, "({x} - {y})"),
            Expr::Mul(x, y) => write!(f, "({x} * {y})"),
            Expr::Conj(x) => write!(f, "conj({x})"),
            Expr::Norm(x) => write!(f, "norm({x})"),
            Expr::Inv(x) => write!(f, "inv({x})"),
            Expr::Group(x) => write!(f, "{x}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("syntax error at offset {offset}: {message}; expected one of {}", expected_list(.expected))]
pub struct ParseError {
    /// Byte offset into the input.
    pub offset: usize,
    pub message: String,
    pub expected: BTreeSet<&'static str>,
}

fn expected_list(set: &BTreeSet<&'static str>) -> String {
    set.iter().copied().collect::<Vec<_>>().join(", ")
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Basis(usize),
    Func(&'static str),
    Plus,
    Minus,
    Star,
    Slash,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(n) => format!("integer {n}"),
            Tok::Basis(k) => format!("e{k}"),
            Tok::Func(name) => (*name).to_string(),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Slash => "'/'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::End => "end of input".into(),
        }
    }
}

const ATOM_START: [&str; 7] = ["integer", "basis symbol", "conj", "norm", "inv", "'('", "'-'"];

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let err =
        |offset: usize, message: String| ParseError { offset, message, expected: ATOM_START.into_iter().collect() };
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((start, Tok::Int(src[start..i].parse().expect("digits"))));
                continue;
            }
            b'a'..=b'z' | b'A'..=b'Z' => {
                while i < bytes.len() && bytes[i].is_ascii_alphanumeric() {
                    i += 1;
                }
                let word = &src[start..i];
                let tok = match word {
                    "conj" => Tok::Func("conj"),
                    "norm" => Tok::Func("norm"),
                    "inv" => Tok::Func("inv"),
                    _ => match word.strip_prefix('e') {
                        Some(digits) if !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()) => Tok::Basis(
                            digits.parse().map_err(|_| err(start, format!("basis index in {word:?} is too large")))?,
                        ),
                        _ => return Err(err(start, format!("unknown identifier {word:?}"))),
                    },
                };
                out.push((start, tok));
                continue;
            }
            _ => {
                let ch = src[start..].chars().next().expect("in bounds");
                return Err(err(start, format!("unexpected character {ch:?}")));
            }
        };
        out.push((start, tok));
        i += 1;
    }
    out.push((src.len(), Tok::End));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    /// Offsets of currently open parentheses.
    open: Vec<usize>,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn fail(&self, expected: &[&'static str]) -> ParseError {
        let found = self.peek();
        let message = if *found == Tok::End && expected.contains(&"')'") {
            format!("unclosed parenthesis opened at offset {}", self.open.last().copied().unwrap_or(0))
        } else {
            format!("unexpected {}", found.describe())
        };
        ParseError { offset: self.offset(), message, expected: expected.iter().copied().collect() }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::Star {
            self.bump();
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.atom()
    }

    fn close(&mut self) -> Result<(), ParseError> {
        if *self.peek() != Tok::RParen {
            return Err(self.fail(&["')'", "'+'", "'-'", "'*'"]));
        }
        self.bump();
        self.open.pop();
        Ok(())
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                if *self.peek() != Tok::Slash {
                    return Ok(Expr::Rational(Rational::from_integer(n)));
                }
                self.bump();
                let at = self.offset();
                match self.bump() {
                    Tok::Int(d) => Rational::new(n, d).map(Expr::Rational).map_err(|_| ParseError {
                        offset: at,
                        message: "zero denominator".into(),
                        expected: ["nonzero integer"].into_iter().collect(),
                    }),
                    _ => Err(ParseError {
                        offset: at,
                        message: "denominator must be an integer".into(),
                        expected: ["integer"].into_iter().collect(),
                    }),
                }
            }
            Tok::Basis(k) => {
                self.bump();
                Ok(Expr::Basis(k))
            }
            Tok::Func(name) => {
                self.bump();
                if *self.peek() != Tok::LParen {
                    return Err(self.fail(&["'('"]));
                }
                self.open.push(self.offset());
                self.bump();
                let inner = Box::new(self.expr()?);
                self.close()?;
                Ok(match name {
                    "conj" => Expr::Conj(inner),
                    "norm" => Expr::Norm(inner),
                    _ => Expr::Inv(inner),
                })
            }
            Tok::LParen => {
                self.open.push(self.offset());
                self.bump();
                let inner = self.expr()?;
                self.close()?;
                Ok(Expr::Group(Box::new(inner)))
            }
            _ => Err(self.fail(&ATOM_START)),
        }
    }
}

/// Parses `src` into an expression tree.
pub fn parse(src: &str) -> Result<Expr, ParseError> {
    let mut p = Parser { toks: lex(src)?, pos: 0, open: Vec::new() };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        let expected: &[&'static str] =
            if p.open.is_empty() { &["'+'", "'-'", "'*'", "end of input"] } else { &["')'"] };
        return Err(p.fail(expected));
    }
    Ok(e)
}

/// Evaluates `expr` in the algebra `sig`, following its grouping exactly.
pub fn eval(expr: &Expr, sig: &Signature, o: Orientation) -> Result<CdElement, Error> {
    let ev = |e: &Expr| eval(e, sig, o);
    Ok(match expr {
        Expr::Rational(r) => Element::scalar(sig, r.clone()),
        Expr::Basis(k) => Element::basis(sig, *k)?,
        Expr::Neg(x) => -&ev(x)?,
        Expr::Add(x, y) => ev(x)?.try_add(&ev(y)?)?,
        Expr::Sub(x, y) => ev(x)?.try_sub(&ev(y)?)?,
        Expr::Mul(x, y) => ev(x)?.mul_oriented(&ev(y)?, o)?,
        Expr::Conj(x) => ev(x)?.conjugate(),
        Expr::Norm(x) => Element::scalar(sig, ev(x)?.norm()),
        Expr::Inv(x) => ev(x)?.inverse_oriented(o)?.value,
        Expr::Group(x) => ev(x)?,
    })
}

/// Parses and evaluates in one step.
pub fn eval_str(src: &str, sig: &Signature, o: Orientation) -> Result<CdElement, Error> {
    eval(&parse(src)?, sig, o)
}

/// Chains longer than this only compare the left- and right-nested forms.
pub const MAX_EXHAUSTIVE_CHAIN: usize = 8;

/// An unparenthesized product chain whose value depends on grouping.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReassociationWarning {
    /// The chain in canonical form, as grouped by the parser.
    pub chain: String,
    pub factors: usize,
    pub as_written: CdElement,
    pub alternative: String,
    pub alternative_value: CdElement,
}

impl fmt::Display for ReassociationWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "product chain {} depends on grouping: as written = {}, but {} = {}",
            self.chain, self.as_written, self.alternative, self.alternative_value
        )
    }
}

/// Flags product chains of three or more factors written without
/// parentheses whose groupings do not all agree.
pub fn reassociation_warnings(expr: &Expr, sig: &Signature, o: Orientation) -> Vec<ReassociationWarning> {
    let mut out = Vec::new();
    walk(expr, sig, o, &mut out);
    out
}

fn walk(expr: &Expr, sig: &Signature, o: Orientation, out: &mut Vec<ReassociationWarning>) {
    match expr {
        Expr::Mul(..) => {
            let mut factors = Vec::new();
            flatten(expr, &mut factors);
            if factors.len() >= 3 {
                if let Some(w) = chain_warning(expr, &factors, sig, o) {
                    out.push(w);
                }
            }
            for f in factors {
                walk(f, sig, o, out);
            }
        }
        Expr::Rational(_) | Expr::Basis(_) => {}
        Expr::Neg(x) | Expr::Conj(x) | Expr::Norm(x) | Expr::Inv(x) | Expr::Group(x) => walk(x, sig, o, out),
        Expr::Add(x, y) | Expr::Sub(x, y) => {
            walk(x, sig, o, out);
            walk(y, sig, o, out);
        }
    }
}

fn flatten<'a>(expr: &'a Expr, out: &mut Vec<&'a Expr>) {
    match expr {
        Expr::Mul(x, y) => {
            flatten(x, out);
            flatten(y, out);
        }
        other => out.push(other),
    }
}

fn chain_warning(chain: &Expr, factors: &[&Expr], sig: &Signature, o: Orientation) -> Option<ReassociationWarning> {
    let values: Vec<CdElement> = factors.iter().map(|f| eval(f, sig, o)).collect::<Result<_, _>>().ok()?;
    let labels: Vec<String> = factors.iter().map(|f| f.to_string()).collect();
    let as_written = eval(chain, sig, o).ok()?;
    let groupings = if factors.len() <= MAX_EXHAUSTIVE_CHAIN {
        all_groupings(&values, &labels, o)
    } else {
        vec![right_nested(&values, &labels, o)]
    };
    groupings.into_iter().find(|(_, v)| *v != as_written).map(|(label, value)| ReassociationWarning {
        chain: chain.to_string(),
        factors: factors.len(),
        as_written,
        alternative: label,
        alternative_value: value,
    })
}

fn all_groupings(values: &[CdElement], labels: &[String], o: Orientation) -> Vec<(String, CdElement)> {
    if values.len() == 1 {
        return vec![(labels[0].clone(), values[0].clone())];
    }
    let mut out = Vec::new();
    for split in 1..values.len() {
        let left = all_groupings(&values[..split], &labels[..split], o);
        let right = all_groupings(&values[split..], &labels[split..], o);
        for (ll, lv) in &left {
            for (rl, rv) in &right {
                out.push((format!("({ll} * {rl})"), lv.mul_oriented(rv, o).expect("shared signature")));
            }
        }
    }
    out
}

fn right_nested(values: &[CdElement], labels: &[String], o: Orientation) -> (String, CdElement) {
    let n = values.len();
    let mut label = labels[n - 1].clone();
    let mut value = values[n - 1].clone();
    for i in (0..n - 1).rev() {
        value = values[i].mul_oriented(&value, o).expect("shared signature");
        label = format!("({} * {label})", labels[i]);
    }
    (label, value)
}
