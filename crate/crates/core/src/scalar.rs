use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::ops::{Add, Mul};

use num_integer::Integer;
use num_traits::{FromPrimitive, Signed, ToPrimitive, Zero};

/// Exact signed integer: matrix entries, Malcev coordinates, lattice vectors.
///
/// Implemented for `i32`, `i64`, `i128` and `BigInt`. Machine widths are
/// only safe where the caller bounds the magnitudes; normal forms on
/// untrusted input should use `BigInt`.
pub trait IntScalar:
    Integer
    + Signed
    + Clone
    + Debug
    + Display
    + Hash
    + FromPrimitive
    + ToPrimitive
    + Send
    + Sync
    + 'static
{
    fn of(v: i64) -> Self {
        <Self as FromPrimitive>::from_i64(v).expect("integer literal does not fit scalar type")
    }

    /// Converts between integer scalars; `None` if the value does not fit.
    fn cast<U: IntScalar>(&self) -> Option<U> {
        self.to_i128().and_then(U::from_i128)
    }
}

impl<T> IntScalar for T where
    T: Integer
        + Signed
        + Clone
        + Debug
        + Display
        + Hash
        + FromPrimitive
        + ToPrimitive
        + Send
        + Sync
        + 'static
{
}

/// Semiring used by path-counting convolutions: exact counts (`BigInt`,
/// `BigUint`) or floating probabilities (`f64`).
pub trait Weight: Zero + Clone + Add<Output = Self> + Mul<Output = Self> + Send + Sync {}

impl<T> Weight for T where T: Zero + Clone + Add<Output = T> + Mul<Output = T> + Send + Sync {}
