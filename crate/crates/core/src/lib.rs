//! Toolkit for random finitely generated nilpotent groups.
//!
//! The crate covers exact integer linear algebra ([`zmatrix`]), free-group
//! words and Nielsen moves ([`words`]), Malcev arithmetic in the free
//! 2-step nilpotent group ([`nilpotent2`]), quotient presentations and their
//! word problem ([`presentation`]), random-walk experiments ([`randwalk`])
//! and the translation of integer equation systems into group equation
//! systems ([`diophantine`]).
//!
//! The algebra is written against the [`scalar::IntScalar`] trait so the
//! same code runs over machine integers (fast sampling and bounded search)
//! and over arbitrary-precision integers (normal forms, word problem). The
//! aliases below fix the arbitrary-precision instances.

pub mod diophantine;
pub mod error;
pub mod nilpotent2;
pub mod presentation;
pub mod randwalk;
pub mod scalar;
pub mod words;
pub mod zmatrix;

mod json;

pub use error::{Error, Result};
pub use num_bigint::BigInt;
pub use scalar::{IntScalar, Weight};

/// Exact integer matrix.
pub type IntMatrix = zmatrix::Matrix<BigInt>;
/// Smith decomposition over arbitrary-precision integers.
pub type SmithDecomposition = zmatrix::Smith<BigInt>;
/// Element of the free 2-step nilpotent group with exact coordinates.
pub type MalcevElement = nilpotent2::Malcev<BigInt>;
/// Machine-integer Malcev element, used by bounded searches.
pub type SmallMalcev = nilpotent2::Malcev<i64>;
/// Machine-integer matrix, used by Monte Carlo sampling.
pub type SmallMatrix = zmatrix::Matrix<i64>;
