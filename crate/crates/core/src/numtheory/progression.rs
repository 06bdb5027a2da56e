use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use super::{is_prime, is_prime_u64};
use crate::error::{Error, Result};

/// Exponent in the Heath-Brown form `B n^5.5` of Linnik's bound.
pub const HEATH_BROWN_EXPONENT: f64 = 5.5;

/// The constant `B` used for empirical bound checks. The true constant is
/// not known explicitly; `1` is enough at the scales checked here.
pub const HEATH_BROWN_CONSTANT: f64 = 1.0;

/// Limits for the progression scan.
#[derive(Clone, Debug)]
pub struct ScanConfig {
    /// Number of candidates `k n + 1` examined before giving up.
    pub max_candidates: u64,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            max_candidates: 1 << 40,
        }
    }
}

/// The least prime `p > search_floor` with `p = 1 mod modulus`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimeInProgression {
    pub modulus: u64,
    pub p: BigUint,
    pub search_floor: BigUint,
}

impl PrimeInProgression {
    /// `p / (B n^5.5)`, computed in floating point from logarithms.
    pub fn heath_brown_ratio(&self) -> f64 {
        let ln_p = ln_biguint_f64(&self.p);
        let ln_n = (self.modulus as f64).ln();
        (ln_p - HEATH_BROWN_EXPONENT * ln_n).exp() / HEATH_BROWN_CONSTANT
    }
}

fn ln_biguint_f64(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    (n >> shift).to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

/// [`least_prime_congruent_one_with`] using the default scan ceiling.
pub fn least_prime_congruent_one(modulus: u64, search_floor: &BigUint) -> Result<PrimeInProgression> {
    least_prime_congruent_one_with(modulus, search_floor, &ScanConfig::default())
}

/// Scans `k n + 1` upward from just above `search_floor` and returns the
/// first prime.
pub fn least_prime_congruent_one_with(
    modulus: u64,
    search_floor: &BigUint,
    cfg: &ScanConfig,
) -> Result<PrimeInProgression> {
    if modulus == 0 {
        return Err(Error::Invalid("modulus must be positive".into()));
    }
    let n = BigUint::from(modulus);
    // Smallest k >= 1 with k n + 1 > floor, i.e. k >= ceil(floor / n).
    let k0 = Integer::div_ceil(search_floor, &n).max(BigUint::one());
    let found = |p: BigUint| PrimeInProgression {
        modulus,
        p,
        search_floor: search_floor.clone(),
    };

    // Fast path while every candidate stays within u64.
    if let Some(k0) = k0.to_u64() {
        let last_k = k0.checked_add(cfg.max_candidates);
        let fits = last_k
            .and_then(|k| k.checked_mul(modulus))
            .and_then(|v| v.checked_add(1))
            .is_some();
        if fits {
            for k in k0..last_k.unwrap() {
                let p = k * modulus + 1;
                if is_prime_u64(p) {
                    return Ok(found(BigUint::from(p)));
                }
            }
            return Err(Error::ScanCeiling {
                modulus: n,
                floor: search_floor.clone(),
                candidates: cfg.max_candidates,
            });
        }
    }

    let mut p = &k0 * &n + 1u32;
    for _ in 0..cfg.max_candidates {
        if is_prime(&p) {
            return Ok(found(p));
        }
        p += &n;
    }
    Err(Error::ScanCeiling {
        modulus: n,
        floor: search_floor.clone(),
        candidates: cfg.max_candidates,
    })
}

/// Summary of least primes `p_n = 1 mod n` over a range of moduli.
#[derive(Clone, Debug, Serialize)]
pub struct LinnikSweep {
    pub rows: Vec<PrimeInProgression>,
    /// Largest observed `p_n / n^5.5` and the modulus attaining it.
    pub max_ratio: f64,
    pub argmax: u64,
    /// Moduli with `p_n >= n^5.5`, checked exactly.
    pub violations: Vec<u64>,
}

/// Least primes `= 1 mod n` for `n` in `from..=to`, checked exactly against
/// `n^5.5` (as `p^2 < n^11`).
pub fn linnik_sweep(from: u64, to: u64) -> Result<LinnikSweep> {
    let mut rows = Vec::new();
    let mut max_ratio = 0.0f64;
    let mut argmax = from;
    let mut violations = Vec::new();
    for n in from..=to {
        let row = least_prime_congruent_one(n, &BigUint::zero())?;
        let ratio = row.heath_brown_ratio();
        if ratio > max_ratio {
            max_ratio = ratio;
            argmax = n;
        }
        let bound_sq = BigUint::from(n).pow(11);
        if &row.p * &row.p >= bound_sq {
            violations.push(n);
        }
        rows.push(row);
    }
    Ok(LinnikSweep {
        rows,
        max_ratio,
        argmax,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(n: u64, floor: u64) -> u64 {
        least_prime_congruent_one(n, &BigUint::from(floor))
            .unwrap()
            .p
            .to_u64()
            .unwrap()
    }

    fn brute(n: u64, floor: u64) -> u64 {
        let is_p = |m: u64| m >= 2 && (2..).take_while(|d| d * d <= m).all(|d| !m.is_multiple_of(d));
        (floor + 1..).find(|&m| m % n == 1 % n && is_p(m)).unwrap()
    }

    #[test]
    fn reference_values() {
        assert_eq!(lp(1, 0), 2);
        assert_eq!(lp(6, 0), 7);
        assert_eq!(lp(24, 0), 73);
        assert_eq!(lp(3, 27), 31);
    }

    #[test]
    fn matches_brute_force_scan() {
        for n in 1..200 {
            for floor in [0, 1, 2, 50, 1000] {
                assert_eq!(lp(n, floor), brute(n, floor), "n={n} floor={floor}");
            }
        }
    }

    #[test]
    fn floor_above_u64_uses_big_path() {
        let floor = BigUint::from(u64::MAX);
        let r = least_prime_congruent_one(10, &floor).unwrap();
        assert!(r.p > floor);
        assert_eq!(&r.p % 10u32, BigUint::one());
        assert!(is_prime(&r.p));
        // minimality: nothing in between
        let mut q = (&floor / 10u32) * 10u32 + 1u32;
        while q < r.p {
            if q > floor {
                assert!(!is_prime(&q));
            }
            q += 10u32;
        }
    }

    #[test]
    fn ceiling_is_reported() {
        let cfg = ScanConfig { max_candidates: 1 };
        // 8 * 1 + 1 = 9 is composite.
        let err = least_prime_congruent_one_with(8, &BigUint::zero(), &cfg).unwrap_err();
        assert!(err.is_budget());
    }

    #[test]
    fn small_sweep_respects_bound() {
        let s = linnik_sweep(2, 300).unwrap();
        assert!(s.violations.is_empty());
        assert!(s.max_ratio < 1.0);
        assert_eq!(s.argmax, 2);
    }
}
