use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

/// The prescribed limit `C` of `(1/n) log F_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GrowthTarget {
    Zero,
    /// A positive rational rate.
    Finite(BigRational),
    Infinite,
}

impl GrowthTarget {
    pub fn finite(c: BigRational) -> Result<Self> {
        if !c.is_positive() {
            return Err(Error::Invalid(format!("finite target must be positive, got {c}")));
        }
        Ok(GrowthTarget::Finite(c))
    }

    pub fn kind(&self) -> &'static str {
        match self {
            GrowthTarget::Zero => "zero",
            GrowthTarget::Finite(_) => "finite",
            GrowthTarget::Infinite => "infinite",
        }
    }

    pub fn rate(&self) -> Option<&BigRational> {
        match self {
            GrowthTarget::Finite(c) => Some(c),
            _ => None,
        }
    }
}

impl fmt::Display for GrowthTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GrowthTarget::Finite(c) => write!(f, "{c}"),
            other => f.write_str(other.kind()),
        }
    }
}

impl FromStr for GrowthTarget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "zero" => Ok(GrowthTarget::Zero),
            "infinite" | "inf" | "infinity" => Ok(GrowthTarget::Infinite),
            other => {
                let c = parse_rational(other)?;
                if c.is_zero() {
                    Ok(GrowthTarget::Zero)
                } else {
                    GrowthTarget::finite(c)
                }
            }
        }
    }
}

/// Parses `a/b`, an integer, or a decimal literal such as `0.6931`, exactly.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: `{s}`"));
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| bad())?;
        let den: BigInt = den.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(Error::Parse(format!("zero denominator in `{s}`")));
        }
        return Ok(BigRational::new(num, den));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if (int_part.is_empty() && frac_part.is_empty())
        || !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let num: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().map_err(|_| bad())? };
    let den = num_traits::pow(BigInt::from(10), frac_part.len());
    let r = BigRational::new(num, den);
    Ok(if neg { -r } else { r })
}

/// How the exponents `K_n` (and primes `p_n`) of the product are chosen.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// `K_n = floor(n C / log p_n)`.
    Paper,
    /// `K_n = max(0, floor((n C - sum_{d | n, d < n} K_d log p_d) / log p_n))`,
    /// filled in ascending `n`.
    Compensated,
    /// `K_n = floor(n^gamma)` for a rational `gamma` in `(0, 1)`.
    Subexponential(BigRational),
    /// `K_n = 1` with `p_n` the least prime `= 1 mod n` above `n^n`.
    Infinite,
}

impl Strategy {
    pub fn name(&self) -> &'static str {
        match self {
            Strategy::Paper => "paper",
            Strategy::Compensated => "compensated",
            Strategy::Subexponential(_) => "subexponential",
            Strategy::Infinite => "infinite",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Strategy::Subexponential(g) => write!(f, "subexponential:{g}"),
            other => f.write_str(other.name()),
        }
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "paper" => return Ok(Strategy::Paper),
            "compensated" => return Ok(Strategy::Compensated),
            "infinite" => return Ok(Strategy::Infinite),
            _ => {}
        }
        if let Some(g) = s.strip_prefix("subexponential:") {
            let gamma = parse_rational(g)?;
            if !gamma.is_positive() || gamma >= BigRational::from_integer(1.into()) {
                return Err(Error::Invalid(format!("gamma must lie in (0, 1), got {gamma}")));
            }
            return Ok(Strategy::Subexponential(gamma));
        }
        Err(Error::Parse(format!(
            "unknown strategy `{s}` (expected paper, compensated, subexponential:<gamma>, infinite)"
        )))
    }
}
