use thiserror::Error;

use crate::algebra::Signature;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("basis index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("operation needs level >= 1, got a level-0 element")]
    LevelZero,

    #[error("signature mismatch: {left} vs {right}")]
    SignatureMismatch { left: Signature, right: Signature },

    #[error("coefficient vector has length {got}, expected {expected}")]
    BadLength { got: usize, expected: usize },

    #[error("element is not invertible (norm {norm})")]
    NotInvertible { norm: String },

    #[error("level {level} exceeds the table bound {bound}")]
    LevelAboveBound { level: usize, bound: usize },

    #[error("matrix is not in the image of the embedding: {0}")]
    NotInImage(String),

    #[error("classical embeddings need division signs, got {0}")]
    NonDivisionSignature(Signature),

    #[error("basis product e{j}*e{k} is not a signed basis element")]
    NotSignedBasis { j: usize, k: usize },

    #[error("invalid sign pattern: {0}")]
    InvalidSigns(String),

    #[error("unknown orientation {0:?} (expected default or eq1-verbatim)")]
    InvalidOrientation(String),

    #[error(transparent)]
    Parse(#[from] crate::expr::ParseError),
}
