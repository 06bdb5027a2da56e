//! Dyadic interval arithmetic with outward rounding.
//!
//! An [`Interval`] is a closed interval `[lo, hi] * 2^-prec` whose endpoints
//! are arbitrary-precision integers. Every operation rounds the lower
//! endpoint down and the upper endpoint up, so the true value is always
//! enclosed. Logarithms of integers and rationals are computed from the
//! `atanh` series with a rigorous tail bound.
//!
//! [`decide_floor`] escalates precision until an enclosure pins down the
//! floor of an irrational quantity.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Guard bits carried internally by the logarithm before rounding back.
const LN_GUARD: u32 = 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    lo: BigInt,
    hi: BigInt,
    prec: u32,
}

fn floor_div(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_floor(b)
}

fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    -((-a).div_floor(b))
}

fn shr_floor(a: &BigInt, bits: u32) -> BigInt {
    floor_div(a, &(BigInt::one() << bits))
}

fn shr_ceil(a: &BigInt, bits: u32) -> BigInt {
    ceil_div(a, &(BigInt::one() << bits))
}

impl Interval {
    /// Builds `[lo, hi] * 2^-prec`. Panics if `lo > hi`.
    pub fn from_raw(lo: BigInt, hi: BigInt, prec: u32) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        Interval { lo, hi, prec }
    }

    pub fn zero(prec: u32) -> Self {
        Interval::from_raw(BigInt::zero(), BigInt::zero(), prec)
    }

    pub fn from_integer(n: &BigInt, prec: u32) -> Self {
        let v = n << prec;
        Interval::from_raw(v.clone(), v, prec)
    }

    pub fn from_rational(r: &BigRational, prec: u32) -> Self {
        let scaled = r.numer() << prec;
        Interval::from_raw(
            floor_div(&scaled, r.denom()),
            ceil_div(&scaled, r.denom()),
            prec,
        )
    }

    pub fn from_f64_exact(x: f64, prec: u32) -> Self {
        let r = BigRational::from_float(x).expect("finite float");
        Interval::from_rational(&r, prec)
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn lo_raw(&self) -> &BigInt {
        &self.lo
    }

    pub fn hi_raw(&self) -> &BigInt {
        &self.hi
    }

    pub fn lo(&self) -> BigRational {
        BigRational::new(self.lo.clone(), BigInt::one() << self.prec)
    }

    pub fn hi(&self) -> BigRational {
        BigRational::new(self.hi.clone(), BigInt::one() << self.prec)
    }

    pub fn width(&self) -> BigRational {
        BigRational::new(&self.hi - &self.lo, BigInt::one() << self.prec)
    }

    pub fn lo_f64(&self) -> f64 {
        self.lo().to_f64().unwrap_or(f64::NEG_INFINITY)
    }

    pub fn hi_f64(&self) -> f64 {
        self.hi().to_f64().unwrap_or(f64::INFINITY)
    }

    pub fn mid_f64(&self) -> f64 {
        BigRational::new(&self.lo + &self.hi, BigInt::one() << (self.prec + 1))
            .to_f64()
            .unwrap_or(f64::NAN)
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        self.lo() <= *x && *x <= self.hi()
    }

    /// Re-expresses the interval at another precision, rounding outward.
    pub fn with_prec(&self, prec: u32) -> Self {
        match prec.cmp(&self.prec) {
            Ordering::Equal => self.clone(),
            Ordering::Greater => {
                let s = prec - self.prec;
                Interval::from_raw(&self.lo << s, &self.hi << s, prec)
            }
            Ordering::Less => {
                let s = self.prec - prec;
                Interval::from_raw(shr_floor(&self.lo, s), shr_ceil(&self.hi, s), prec)
            }
        }
    }

    fn aligned(&self, other: &Interval) -> (Interval, Interval) {
        let p = self.prec.max(other.prec);
        (self.with_prec(p), other.with_prec(p))
    }

    pub fn add(&self, other: &Interval) -> Interval {
        let (a, b) = self.aligned(other);
        Interval::from_raw(a.lo + b.lo, a.hi + b.hi, a.prec)
    }

    pub fn sub(&self, other: &Interval) -> Interval {
        let (a, b) = self.aligned(other);
        Interval::from_raw(a.lo - b.hi, a.hi - b.lo, a.prec)
    }

    pub fn neg(&self) -> Interval {
        Interval::from_raw(-&self.hi, -&self.lo, self.prec)
    }

    /// Exact scaling by an integer.
    pub fn mul_int(&self, k: &BigInt) -> Interval {
        let a = &self.lo * k;
        let b = &self.hi * k;
        if k.is_negative() {
            Interval::from_raw(b, a, self.prec)
        } else {
            Interval::from_raw(a, b, self.prec)
        }
    }

    /// Division by a positive integer, rounding outward.
    pub fn div_int(&self, k: u64) -> Interval {
        assert!(k > 0, "division by zero");
        let k = BigInt::from(k);
        Interval::from_raw(floor_div(&self.lo, &k), ceil_div(&self.hi, &k), self.prec)
    }

    pub fn mul(&self, other: &Interval) -> Interval {
        let (a, b) = self.aligned(other);
        let p = a.prec;
        let products = [&a.lo * &b.lo, &a.lo * &b.hi, &a.hi * &b.lo, &a.hi * &b.hi];
        let min = products.iter().min().unwrap();
        let max = products.iter().max().unwrap();
        Interval::from_raw(shr_floor(min, p), shr_ceil(max, p), p)
    }

    /// Division; the divisor must not contain zero.
    pub fn div(&self, other: &Interval) -> Result<Interval> {
        let (a, b) = self.aligned(other);
        if b.lo.sign() != b.hi.sign() || b.lo.is_zero() || b.hi.is_zero() {
            return Err(Error::Invalid("interval division by a range containing 0".into()));
        }
        let p = a.prec;
        let mut lo: Option<BigInt> = None;
        let mut hi: Option<BigInt> = None;
        for x in [&a.lo, &a.hi] {
            for y in [&b.lo, &b.hi] {
                let num = x << p;
                let (f, c) = if y.is_negative() {
                    (floor_div(&-&num, &-y), ceil_div(&-&num, &-y))
                } else {
                    (floor_div(&num, y), ceil_div(&num, y))
                };
                lo = Some(lo.map_or(f.clone(), |l| l.min(f)));
                hi = Some(hi.map_or(c.clone(), |h| h.max(c)));
            }
        }
        Ok(Interval::from_raw(lo.unwrap(), hi.unwrap(), p))
    }

    /// Union hull of two enclosures.
    pub fn hull(&self, other: &Interval) -> Interval {
        let (a, b) = self.aligned(other);
        Interval::from_raw(a.lo.min(b.lo), a.hi.max(b.hi), a.prec)
    }

    /// Enclosure of `min(x, y)` for `x` in `self`, `y` in `other`.
    pub fn min(&self, other: &Interval) -> Interval {
        let (a, b) = self.aligned(other);
        Interval::from_raw(a.lo.min(b.lo), a.hi.min(b.hi), a.prec)
    }

    /// Enclosure of `max(x, y)` for `x` in `self`, `y` in `other`.
    pub fn max(&self, other: &Interval) -> Interval {
        let (a, b) = self.aligned(other);
        Interval::from_raw(a.lo.max(b.lo), a.hi.max(b.hi), a.prec)
    }

    /// Enclosure of `|x|`.
    pub fn abs(&self) -> Interval {
        if self.is_nonnegative() {
            self.clone()
        } else if self.is_negative() || self.hi.is_zero() {
            self.neg()
        } else {
            Interval::from_raw(BigInt::zero(), self.hi.clone().max(-&self.lo), self.prec)
        }
    }

    /// `max(x, 0)` applied to every point of the interval.
    pub fn clamp_nonnegative(&self) -> Interval {
        let zero = BigInt::zero();
        Interval::from_raw(
            self.lo.clone().max(zero.clone()),
            self.hi.clone().max(zero),
            self.prec,
        )
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_nonnegative(&self) -> bool {
        !self.lo.is_negative()
    }

    pub fn is_negative(&self) -> bool {
        self.hi.is_negative()
    }

    /// True if every point of `self` is strictly below every point of `other`.
    pub fn certainly_lt(&self, other: &Interval) -> bool {
        let (a, b) = self.aligned(other);
        a.hi < b.lo
    }

    /// True if every point of `self` is at most every point of `other`.
    pub fn certainly_le(&self, other: &Interval) -> bool {
        let (a, b) = self.aligned(other);
        a.hi <= b.lo
    }

    pub fn overlaps(&self, other: &Interval) -> bool {
        let (a, b) = self.aligned(other);
        a.lo <= b.hi && b.lo <= a.hi
    }

    /// The common floor of every point in the interval, if there is one.
    pub fn floor_if_decided(&self) -> Option<BigInt> {
        let f_lo = shr_floor(&self.lo, self.prec);
        let f_hi = shr_floor(&self.hi, self.prec);
        (f_lo == f_hi).then_some(f_lo)
    }

    /// Midpoint written in decimal with `digits` fractional digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        let mid = BigRational::new(&self.lo + &self.hi, BigInt::one() << (self.prec + 1));
        rational_to_decimal(&mid, digits)
    }

    /// Enclosure of `ln(n)` for `n >= 1`.
    pub fn ln_natural(n: &BigUint, prec: u32) -> Interval {
        assert!(!n.is_zero(), "ln(0) is undefined");
        if n.is_one() {
            return Interval::zero(prec);
        }
        let bits = n.bits();
        let exp = bits - 1;
        let work = prec + LN_GUARD + (64 - bits.leading_zeros());
        // n / 2^exp lies in [1, 2); bracket it with work-bit fixed point values.
        let n_int = BigInt::from(n.clone());
        let (y_lo, y_hi) = if exp >= u64::from(work) {
            let s = (exp - u64::from(work)) as u32;
            let lo = shr_floor(&n_int, s);
            let hi = shr_ceil(&n_int, s);
            (lo, hi)
        } else {
            let v = n_int << (u64::from(work) - exp);
            (v.clone(), v)
        };
        let ln_mant = ln_mantissa(&y_lo, &y_hi, work);
        let ln2 = ln2_fixed(work);
        let e = BigInt::from(exp);
        let total = ln_mant.add(&ln2.mul_int(&e));
        total.with_prec(prec)
    }

    /// Enclosure of `ln(r)` for a positive rational `r`.
    pub fn ln_rational(r: &BigRational, prec: u32) -> Interval {
        assert!(r.is_positive(), "ln of a non-positive rational");
        let num = r.numer().magnitude();
        let den = r.denom().magnitude();
        let p = prec + 2;
        Interval::ln_natural(num, p)
            .sub(&Interval::ln_natural(den, p))
            .with_prec(prec)
    }

    /// Enclosure of `ln(x)` over a positive interval `x`.
    pub fn ln(&self) -> Result<Interval> {
        if !self.is_positive() {
            return Err(Error::Invalid("ln of an interval reaching 0".into()));
        }
        let lo = Interval::ln_rational(&self.lo(), self.prec);
        let hi = Interval::ln_rational(&self.hi(), self.prec);
        Ok(Interval::from_raw(lo.lo, hi.hi, self.prec))
    }

    /// Enclosure of `ln 2`.
    pub fn ln2(prec: u32) -> Interval {
        ln2_fixed(prec + LN_GUARD).with_prec(prec)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = ((f64::from(self.prec) * std::f64::consts::LOG10_2) as usize).clamp(1, 40);
        write!(
            f,
            "[{}, {}]",
            rational_to_decimal(&self.lo(), digits),
            rational_to_decimal(&self.hi(), digits)
        )
    }
}

/// `sum_{j>=0} t^(2j+1)/(2j+1)` for `t = tee * 2^-work`, rounded down or up.
fn atanh_series(tee: &BigInt, work: u32, round_up: bool) -> BigInt {
    let sh = |x: &BigInt| {
        if round_up {
            shr_ceil(x, work)
        } else {
            shr_floor(x, work)
        }
    };
    let dv = |x: &BigInt, k: u64| {
        let k = BigInt::from(k);
        if round_up {
            ceil_div(x, &k)
        } else {
            floor_div(x, &k)
        }
    };
    let t2 = sh(&(tee * tee));
    let mut power = tee.clone();
    let mut sum = BigInt::zero();
    let mut k = 1u64;
    loop {
        if round_up {
            if power <= BigInt::one() || k > 8 * u64::from(work) {
                // t <= 1/3, so the remaining tail is at most power * 9/8 < 2 * power.
                sum += power * 2;
                return sum;
            }
        } else if power.is_zero() {
            return sum;
        }
        sum += dv(&power, k);
        power = sh(&(&power * &t2));
        k += 2;
    }
}

/// `ln 2 = 2 atanh(1/3)` at `work` fractional bits.
fn ln2_fixed(work: u32) -> Interval {
    let one = BigInt::one() << work;
    let t_lo = floor_div(&one, &BigInt::from(3));
    let t_hi = ceil_div(&one, &BigInt::from(3));
    let lo = atanh_series(&t_lo, work, false) * 2;
    let hi = atanh_series(&t_hi, work, true) * 2;
    Interval::from_raw(lo, hi, work)
}

/// `ln y` for `y in [y_lo, y_hi] * 2^-work`, with `1 <= y < 2` (up to rounding).
fn ln_mantissa(y_lo: &BigInt, y_hi: &BigInt, work: u32) -> Interval {
    let one = BigInt::one() << work;
    // t = (y - 1) / (y + 1) is increasing in y.
    let t_lo = floor_div(&((y_lo - &one) << work), &(y_lo + &one)).max(BigInt::zero());
    let t_hi = ceil_div(&((y_hi - &one) << work), &(y_hi + &one)).max(BigInt::zero());
    let lo = atanh_series(&t_lo, work, false) * 2;
    let hi = atanh_series(&t_hi, work, true) * 2;
    Interval::from_raw(lo, hi, work)
}

/// Rounds a rational to `digits` fractional decimal digits (half away from zero).
pub fn rational_to_decimal(r: &BigRational, digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = r * BigRational::from_integer(scale.clone());
    let neg = scaled.is_negative();
    let mag = scaled.abs();
    let rounded = (mag + BigRational::new(BigInt::one(), BigInt::from(2))).floor().to_integer();
    let (int_part, frac_part) = rounded.div_rem(&scale);
    let sign = if neg && !rounded.is_zero() { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int_part}")
    } else {
        let frac = frac_part.to_string();
        format!("{sign}{int_part}.{}{frac}", "0".repeat(digits - frac.len()))
    }
}

/// Number of fractional decimal digits implied by a binary precision.
pub fn decimal_digits(prec_bits: u32) -> usize {
    ((f64::from(prec_bits) * std::f64::consts::LOG10_2).floor() as usize).saturating_sub(2).max(1)
}

/// Smallest precision the escalation loop starts from.
pub const START_PREC: u32 = 64;

/// Largest precision tried before giving up.
pub const MAX_PREC: u32 = 1 << 16;

/// Floor of a quantity known to be irrational, given a way to enclose it at
/// any precision. Precision doubles until the enclosure excludes integers.
pub fn decide_floor<F>(mut enclose: F) -> Result<BigInt>
where
    F: FnMut(u32) -> Result<Interval>,
{
    let mut prec = START_PREC;
    while prec <= MAX_PREC {
        if let Some(f) = enclose(prec)?.floor_if_decided() {
            return Ok(f);
        }
        prec *= 2;
    }
    Err(Error::PrecisionExhausted(MAX_PREC))
}

/// `ln(n)` as a signed-magnitude helper used by callers holding `BigInt`s.
pub fn ln_bigint(n: &BigInt, prec: u32) -> Result<Interval> {
    match n.sign() {
        Sign::Plus => Ok(Interval::ln_natural(n.magnitude(), prec)),
        _ => Err(Error::Invalid(format!("ln of non-positive integer {n}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn ln2_matches_known_digits() {
        let l = Interval::ln2(200);
        // ln 2 = 0.693147180559945309417232121458176568...
        let approx = q(693_147_180_559_945_309, 1_000_000_000_000_000_000);
        assert!(l.lo() < approx + q(1, 1_000_000_000_000_000_000));
        assert!(l.hi() > q(693_147_180_559_945_309, 1_000_000_000_000_000_000));
        assert!(l.width() < q(1, 1 << 40));
        assert_eq!(&l.to_decimal(30)[..20], "0.693147180559945309");
    }

    #[test]
    fn ln_small_integers_enclose_f64() {
        for n in 1u64..200 {
            let l = Interval::ln_natural(&BigUint::from(n), 80);
            let f = (n as f64).ln();
            assert!(l.lo_f64() <= f + 1e-15 && f - 1e-15 <= l.hi_f64(), "n={n}");
            assert!(l.hi_f64() - l.lo_f64() < 1e-18);
        }
    }

    #[test]
    fn ln_of_huge_power_is_additive() {
        let n = BigUint::from(3u32).pow(5000);
        let l = Interval::ln_natural(&n, 100);
        let l3 = Interval::ln_natural(&BigUint::from(3u32), 100).mul_int(&BigInt::from(5000));
        assert!(l.overlaps(&l3));
        assert!(l.width() < q(1, 1 << 60));
    }

    #[test]
    fn floor_is_decided_for_rational_over_log() {
        // 6 * (6931/10000) / ln 7 = 2.137...
        let c = q(6931 * 6, 10000);
        let f = decide_floor(|p| {
            Interval::from_rational(&c, p).div(&Interval::ln_natural(&BigUint::from(7u32), p))
        })
        .unwrap();
        assert_eq!(f, BigInt::from(2));
        // 6931/10000 / ln 2 = 0.99993...
        let f1 = decide_floor(|p| {
            Interval::from_rational(&q(6931, 10000), p).div(&Interval::ln2(p))
        })
        .unwrap();
        assert_eq!(f1, BigInt::zero());
    }

    #[test]
    fn arithmetic_encloses() {
        let a = Interval::from_rational(&q(1, 3), 40);
        let b = Interval::from_rational(&q(-2, 7), 40);
        assert!(a.mul(&b).contains(&q(-2, 21)));
        assert!(a.div(&b).unwrap().contains(&q(-7, 6)));
        assert!(a.sub(&b).contains(&q(13, 21)));
        assert!(b.div(&Interval::zero(40)).is_err());
    }

    #[test]
    fn decimal_rounding() {
        assert_eq!(rational_to_decimal(&q(-1, 8), 2), "-0.13");
        assert_eq!(rational_to_decimal(&q(1, 400), 2), "0.00");
        assert_eq!(rational_to_decimal(&q(7, 2), 0), "4");
        assert_eq!(rational_to_decimal(&q(1, 20), 3), "0.050");
    }
}
