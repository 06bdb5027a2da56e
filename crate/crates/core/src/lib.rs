//! Compact group automorphisms with prescribed growth of periodic points,
//! together with the exact number theory, toral Lehmer sequences and zeta
//! functions used to check them.
//!
//! Polynomial, series and recurrence code is generic over [`scalar::Scalar`];
//! the aliases below fix the instantiations used throughout.

pub mod construction;
pub mod error;
pub mod formats;
pub mod interval;
pub mod numtheory;
pub mod orbits;
pub mod poly;
pub mod scalar;
pub mod toral;
pub mod zeta;

use num_bigint::BigInt;
use num_rational::BigRational;

pub use error::{Error, Result};

/// Integer polynomials, as used for the Lehmer machinery and cyclotomics.
pub type IntPoly = poly::Poly<BigInt>;
/// Exact rational polynomials.
pub type RatPoly = poly::Poly<BigRational>;
/// Double-precision polynomials for approximate work.
pub type F64Poly = poly::Poly<f64>;
/// Exact zeta series, the default.
pub type ExactZeta = zeta::ZetaSeries<BigRational>;
/// Approximate zeta series.
pub type F64Zeta = zeta::ZetaSeries<f64>;
pub type F32Zeta = zeta::ZetaSeries<f32>;
