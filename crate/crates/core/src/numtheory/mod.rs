//! Exact integer number theory: primality, primes in the progression
//! `1 mod n`, primitive roots, divisors and the Möbius function.

mod factor;
mod primality;
mod progression;
mod roots;

pub use factor::{factorize, FactorConfig};
pub use primality::{is_prime, is_prime_u64, DETERMINISTIC_BOUND};
pub use progression::{
    least_prime_congruent_one, least_prime_congruent_one_with, linnik_sweep, LinnikSweep,
    PrimeInProgression, ScanConfig, HEATH_BROWN_CONSTANT, HEATH_BROWN_EXPONENT,
};
pub use roots::{element_of_order, primitive_root, primitive_root_with, PrimitiveRootCert};

/// All positive divisors of `n`, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    assert!(n >= 1, "divisors of 0");
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Möbius function.
pub fn mobius(n: u64) -> i8 {
    assert!(n >= 1, "mobius of 0");
    let mut m = n;
    let mut sign = 1i8;
    let mut p = 2u64;
    while p * p <= m {
        if m.is_multiple_of(p) {
            m /= p;
            if m.is_multiple_of(p) {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if m > 1 {
        sign = -sign;
    }
    sign
}

/// Sum of divisors.
pub fn sigma(n: u64) -> u64 {
    divisors(n).iter().sum()
}

/// Euler's totient.
pub fn totient(n: u64) -> u64 {
    assert!(n >= 1, "totient of 0");
    let mut m = n;
    let mut out = n;
    let mut p = 2u64;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            out -= out / p;
        }
        p += 1;
    }
    if m > 1 {
        out -= out / m;
    }
    out
}

pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((u128::from(a) * u128::from(b)) % u128::from(m)) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}
