use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use super::{factorize, is_prime, FactorConfig};
use crate::error::{Error, Result};

/// A primitive root `g` modulo the prime `p`, together with the
/// factorization of `p - 1` that certifies it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimitiveRootCert {
    pub p: BigUint,
    pub g: BigUint,
    pub factorization: Vec<(BigUint, u32)>,
}

impl PrimitiveRootCert {
    /// Re-checks the certificate from scratch.
    pub fn verify(&self) -> bool {
        let one = BigUint::one();
        if self.p < BigUint::from(2u32) || self.g.is_zero() || self.g >= self.p {
            return false;
        }
        let pm1 = &self.p - &one;
        let prod = self
            .factorization
            .iter()
            .fold(BigUint::one(), |acc, (q, e)| acc * q.pow(*e));
        prod == pm1
            && self.g.modpow(&pm1, &self.p) == one
            && self
                .factorization
                .iter()
                .all(|(q, _)| self.g.modpow(&(&pm1 / q), &self.p) != one)
    }
}

/// Smallest primitive root modulo the prime `p`.
pub fn primitive_root(p: &BigUint) -> Result<PrimitiveRootCert> {
    primitive_root_with(p, &FactorConfig::default())
}

pub fn primitive_root_with(p: &BigUint, cfg: &FactorConfig) -> Result<PrimitiveRootCert> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p.clone()));
    }
    let one = BigUint::one();
    let pm1 = p - &one;
    let factorization = factorize(&pm1, cfg)?;
    let cofactors: Vec<BigUint> = factorization.iter().map(|(q, _)| &pm1 / q).collect();
    let mut g = BigUint::one();
    loop {
        if cofactors.iter().all(|c| g.modpow(c, p) != one) {
            return Ok(PrimitiveRootCert {
                p: p.clone(),
                g,
                factorization,
            });
        }
        g += 1u32;
    }
}

/// `g^((p-1)/n) mod p`, an element of multiplicative order exactly `n`.
pub fn element_of_order(p: &BigUint, g: &BigUint, n: u64) -> Result<BigUint> {
    let pm1 = p - 1u32;
    let n_big = BigUint::from(n);
    if n == 0 || !pm1.is_multiple_of(&n_big) {
        return Err(Error::OrderNotDividing {
            order: n,
            p_minus_one: pm1,
        });
    }
    Ok(g.modpow(&(&pm1 / &n_big), p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numtheory::{least_prime_congruent_one, pow_mod};

    fn root(p: u64) -> u64 {
        let c = primitive_root(&BigUint::from(p)).unwrap();
        assert!(c.verify());
        c.g.try_into().unwrap()
    }

    fn order_brute(x: u64, p: u64) -> u64 {
        (1..p).find(|&k| pow_mod(x, k, p) == 1).unwrap()
    }

    #[test]
    fn reference_values() {
        assert_eq!(root(2), 1);
        assert_eq!(root(7), 3);
        assert_eq!(root(11), 2);
        let p7 = BigUint::from(7u32);
        assert_eq!(element_of_order(&p7, &3u32.into(), 3).unwrap(), 2u32.into());
        assert_eq!(element_of_order(&5u32.into(), &2u32.into(), 4).unwrap(), 2u32.into());
        assert_eq!(element_of_order(&p7, &3u32.into(), 1).unwrap(), 1u32.into());
        assert!(element_of_order(&p7, &3u32.into(), 4).is_err());
    }

    #[test]
    fn smallest_root_matches_brute_force() {
        for p in (2u64..2000).filter(|&p| crate::numtheory::is_prime_u64(p)) {
            let brute = (1..p.max(2)).find(|&g| order_brute(g, p) == p - 1).unwrap();
            assert_eq!(root(p), brute, "p={p}");
        }
    }

    #[test]
    fn element_order_is_exact() {
        for n in 1..=60u64 {
            let p = least_prime_congruent_one(n, &BigUint::zero()).unwrap().p;
            let cert = primitive_root(&p).unwrap();
            let m = element_of_order(&p, &cert.g, n).unwrap();
            for j in 1..=4 * n {
                let is_one = m.modpow(&BigUint::from(j), &p).is_one();
                assert_eq!(is_one, j % n == 0, "n={n} j={j}");
            }
        }
    }

    #[test]
    fn rejects_composites() {
        assert!(matches!(primitive_root(&BigUint::from(561u32)), Err(Error::NotPrime(_))));
    }

    #[test]
    fn large_prime_root() {
        // 12^12 range prime from the infinite-target schedule.
        let floor = BigUint::from(12u64).pow(12);
        let p = least_prime_congruent_one(12, &floor).unwrap().p;
        let cert = primitive_root(&p).unwrap();
        assert!(cert.verify());
    }
}
