//! Cayley–Dickson algebras over exact rationals, the interlaced 2×2 matrix
//! model of their multiplication, and checks for the identities that hold
//! (or stop holding) along the tower.

pub mod algebra;
pub mod error;
pub mod expr;
pub mod identities;
pub mod matrix;
pub mod sample;
pub mod scalar;

pub use algebra::{CdElement, Element, MulTable, Orientation, PairView, Sign, Signature};
pub use error::Error;
pub use matrix::{EmbeddedMat, Mat2};
pub use scalar::{Rational, Scalar};
