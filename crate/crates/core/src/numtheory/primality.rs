use num_bigint::{BigInt, BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{mul_mod, pow_mod};

/// Strong-pseudoprime bases that decide primality for every `n` below
/// [`DETERMINISTIC_BOUND`] (the first thirteen primes).
const BASES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

/// `psi_13`: the least composite that is a strong pseudoprime to all of
/// [`BASES`]; everything below it is decided exactly.
pub const DETERMINISTIC_BOUND: u128 = 3_317_044_064_679_887_385_961_981;

/// Extra random strong-pseudoprime rounds above the deterministic range.
const RANDOM_ROUNDS: usize = 64;

const SMALL_PRIMES: [u64; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

fn strong_probable_prime_u64(n: u64, base: u64) -> bool {
    let a = base % n;
    if a == 0 {
        return true;
    }
    let mut d = n - 1;
    let s = d.trailing_zeros();
    d >>= s;
    let mut x = pow_mod(a, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = mul_mod(x, x, n);
        if x == n - 1 {
            return true;
        }
    }
    false
}

/// Deterministic primality test for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &SMALL_PRIMES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    if n < 97 * 97 {
        return true;
    }
    BASES.iter().all(|&b| strong_probable_prime_u64(n, b))
}

fn strong_probable_prime(n: &BigUint, base: &BigUint) -> bool {
    let one = BigUint::one();
    let n_minus_one = n - &one;
    let a = base % n;
    if a.is_zero() {
        return true;
    }
    let s = n_minus_one.trailing_zeros().unwrap_or(0);
    let d = &n_minus_one >> s;
    let mut x = a.modpow(&d, n);
    if x == one || x == n_minus_one {
        return true;
    }
    for _ in 1..s {
        x = &x * &x % n;
        if x == n_minus_one {
            return true;
        }
    }
    false
}

fn jacobi(a: &BigInt, n: &BigInt) -> i32 {
    let mut a = a.mod_floor(n);
    let mut n = n.clone();
    let mut result = 1;
    let three = BigInt::from(3);
    let five = BigInt::from(5);
    let eight = BigInt::from(8);
    let four = BigInt::from(4);
    while !a.is_zero() {
        while a.is_even() {
            a >>= 1;
            let r = n.mod_floor(&eight);
            if r == three || r == five {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a.mod_floor(&four) == three && n.mod_floor(&four) == three {
            result = -result;
        }
        a = a.mod_floor(&n);
    }
    if n.is_one() {
        result
    } else {
        0
    }
}

fn half_mod(x: BigInt, n: &BigInt) -> BigInt {
    let x = if x.is_odd() { x + n } else { x };
    let h: BigInt = x >> 1u32;
    h.mod_floor(n)
}

/// Strong Lucas probable-prime test with Selfridge parameters.
fn strong_lucas_probable_prime(n: &BigUint) -> bool {
    let r = n.sqrt();
    if &r * &r == *n {
        return false;
    }
    let nn = BigInt::from(n.clone());
    let mut d = BigInt::from(5);
    loop {
        match jacobi(&d, &nn) {
            -1 => break,
            0 if d.abs() != nn => return false,
            _ => {}
        }
        d = if d.is_positive() { -(d + 2i32) } else { -(d - 2i32) };
    }
    let p = BigInt::one();
    let q: BigInt = (BigInt::one() - &d) / 4i32;
    let q = q.mod_floor(&nn);
    let delta: BigInt = &nn + 1u32;
    let s = delta.trailing_zeros().unwrap_or(0);
    let k = &delta >> s;

    let mut u = BigInt::one();
    let mut v = p.clone();
    let mut qk = q.clone();
    let bits = k.bits();
    for i in (0..bits - 1).rev() {
        u = (&u * &v).mod_floor(&nn);
        v = (&v * &v - (&qk << 1u32)).mod_floor(&nn);
        qk = (&qk * &qk).mod_floor(&nn);
        if k.bit(i) {
            let nu = half_mod(&p * &u + &v, &nn);
            let nv = half_mod(&d * &u + &p * &v, &nn);
            u = nu;
            v = nv;
            qk = (&qk * &q).mod_floor(&nn);
        }
    }
    if u.is_zero() || v.is_zero() {
        return true;
    }
    for _ in 1..s {
        v = (&v * &v - (&qk << 1u32)).mod_floor(&nn);
        if v.is_zero() {
            return true;
        }
        qk = (&qk * &qk).mod_floor(&nn);
    }
    false
}

/// Primality test for arbitrary-precision integers.
///
/// Exact below [`DETERMINISTIC_BOUND`]. Above it the answer comes from a
/// Baillie-PSW test followed by 64 strong-pseudoprime rounds with bases drawn
/// from a generator seeded by `n` itself, so a composite is reported prime
/// with probability below `4^-64` and the result is reproducible.
pub fn is_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    for &p in &SMALL_PRIMES {
        if (n % p).is_zero() {
            return false;
        }
    }
    let deterministic = n.to_u128().is_some_and(|v| v < DETERMINISTIC_BOUND);
    if deterministic {
        return BASES
            .iter()
            .all(|&b| strong_probable_prime(n, &BigUint::from(b)));
    }
    if !strong_probable_prime(n, &BigUint::from(2u32)) || !strong_lucas_probable_prime(n) {
        return false;
    }
    let seed = n.iter_u64_digits().fold(0x9e37_79b9_7f4a_7c15u64, |h, w| {
        (h ^ w).wrapping_mul(0x1000_0000_01b3)
    });
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let two = BigUint::from(2u32);
    let upper = n - 1u32;
    (0..RANDOM_ROUNDS).all(|_| {
        let a = rng.gen_biguint_range(&two, &upper);
        strong_probable_prime(n, &a)
    })
}
