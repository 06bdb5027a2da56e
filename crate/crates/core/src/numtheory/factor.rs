use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::{is_prime, is_prime_u64, mul_mod};
use crate::error::{Error, Result};

/// Limits for [`factorize`].
#[derive(Clone, Debug)]
pub struct FactorConfig {
    /// Trial division runs up to this bound (or the square root, if smaller).
    pub trial_limit: u64,
    /// Pollard rho steps per polynomial `x^2 + c`.
    pub rho_steps: u64,
    /// Number of polynomials `c = 1, 2, ...` tried before giving up.
    pub rho_attempts: u64,
}

impl Default for FactorConfig {
    fn default() -> Self {
        FactorConfig {
            trial_limit: 1_000_000,
            rho_steps: 1 << 24,
            rho_attempts: 32,
        }
    }
}

fn rho_u64(n: u64, c: u64, steps: u64) -> Option<u64> {
    // Brent's variant with batched gcds.
    let f = |x: u64| (mul_mod(x, x, n) + c) % n;
    let mut y = 2u64;
    let mut r = 1u64;
    let mut q = 1u64;
    let mut spent = 0u64;
    let mut x;
    let mut ys;
    let mut g;
    loop {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        loop {
            ys = y;
            let batch = 128.min(r - k);
            for _ in 0..batch {
                y = f(y);
                q = mul_mod(q, x.abs_diff(y), n);
            }
            g = q.gcd(&n);
            k += batch;
            spent += batch;
            if k >= r || g != 1 {
                break;
            }
        }
        r *= 2;
        if g != 1 || spent > steps {
            break;
        }
    }
    if g == n {
        loop {
            ys = f(ys);
            g = x.abs_diff(ys).gcd(&n);
            if g != 1 {
                break;
            }
        }
    }
    (g != 1 && g != n).then_some(g)
}

fn rho_big(n: &BigUint, c: u64, steps: u64) -> Option<BigUint> {
    let c = BigUint::from(c);
    let f = |x: &BigUint| (x * x + &c) % n;
    let mut x = BigUint::from(2u32);
    let mut y = x.clone();
    let mut spent = 0;
    while spent < steps {
        let mut q = BigUint::one();
        let (xs, ys) = (x.clone(), y.clone());
        for _ in 0..64 {
            x = f(&x);
            y = f(&f(&y));
            let diff = if x > y { &x - &y } else { &y - &x };
            q = q * diff % n;
        }
        spent += 64;
        let g = q.gcd(n);
        if g.is_one() {
            continue;
        }
        if &g != n {
            return Some(g);
        }
        // Overshot inside the batch: replay one step at a time.
        let (mut x, mut y) = (xs, ys);
        for _ in 0..64 {
            x = f(&x);
            y = f(&f(&y));
            let diff = if x > y { &x - &y } else { &y - &x };
            let g = diff.gcd(n);
            if !g.is_one() {
                return (&g != n).then_some(g);
            }
        }
        return None;
    }
    None
}

fn split(n: &BigUint, cfg: &FactorConfig) -> Result<BigUint> {
    for c in 1..=cfg.rho_attempts {
        let found = match n.to_u64() {
            Some(small) => rho_u64(small, c, cfg.rho_steps).map(BigUint::from),
            None => rho_big(n, c, cfg.rho_steps),
        };
        if let Some(d) = found {
            return Ok(d);
        }
    }
    Err(Error::FactorBudget(n.clone()))
}

fn push_prime_power(out: &mut Vec<(BigUint, u32)>, p: BigUint, e: u32) {
    if let Some(entry) = out.iter_mut().find(|(q, _)| *q == p) {
        entry.1 += e;
    } else {
        out.push((p, e));
    }
}

/// Prime factorization as sorted `(prime, exponent)` pairs; `1` maps to `[]`.
///
/// Trial division up to `cfg.trial_limit`, then Pollard rho with the
/// deterministic sequence of polynomials `x^2 + 1, x^2 + 2, ...`.
pub fn factorize(n: &BigUint, cfg: &FactorConfig) -> Result<Vec<(BigUint, u32)>> {
    if n.is_zero() {
        return Err(Error::Invalid("cannot factor 0".into()));
    }
    let mut out = Vec::new();
    let mut m = n.clone();
    let mut d = 2u64;
    while d <= cfg.trial_limit {
        let dd = BigUint::from(d);
        if &dd * &dd > m {
            break;
        }
        let mut e = 0;
        while (&m % d).is_zero() {
            m /= d;
            e += 1;
        }
        if e > 0 {
            out.push((dd, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    let mut stack = vec![m];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        let prime = match m.to_u64() {
            Some(s) => is_prime_u64(s),
            None => is_prime(&m),
        };
        if prime {
            push_prime_power(&mut out, m, 1);
            continue;
        }
        let f = split(&m, cfg)?;
        let cofactor = &m / &f;
        stack.push(f);
        stack.push(cofactor);
    }
    out.sort();
    Ok(out)
}
