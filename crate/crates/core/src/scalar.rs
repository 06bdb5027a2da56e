//! Scalar abstraction shared by the polynomial, series and recurrence code.
//!
//! Everything that only needs field arithmetic is written against [`Scalar`],
//! so the same routines run on exact rationals (the default everywhere in
//! this crate) and on `f32`/`f64` for quick approximate work. Integers fit
//! too, as long as every division is by a unit.

use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, ToPrimitive};

/// Ring operations plus (possibly inexact or truncating) division.
pub trait Scalar: Clone + Debug + PartialEq + Num + Neg<Output = Self> {
    /// Whether arithmetic on this type is exact.
    const EXACT: bool;

    fn from_bigint(n: &BigInt) -> Self;

    fn from_i64(n: i64) -> Self {
        Self::from_bigint(&BigInt::from(n))
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_bigint(n: &BigInt) -> Self {
        BigRational::from_integer(n.clone())
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_bigint(n: &BigInt) -> Self {
        n.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {
    const EXACT: bool = false;

    fn from_bigint(n: &BigInt) -> Self {
        n.to_f32().unwrap_or(f32::NAN)
    }
}

impl Scalar for BigInt {
    const EXACT: bool = true;

    fn from_bigint(n: &BigInt) -> Self {
        n.clone()
    }
}
