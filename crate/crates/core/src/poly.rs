//! Dense univariate polynomials over a [`Scalar`], low-to-high coefficients.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::numtheory::divisors;
use crate::scalar::Scalar;

/// `c_0 + c_1 x + ... + c_d x^d` with `c_d != 0`; the zero polynomial has
/// no coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(T::one())
    }

    pub fn constant(c: T) -> Self {
        Poly::new(vec![c])
    }

    /// `c x^k`.
    pub fn monomial(c: T, k: usize) -> Self {
        let mut v = vec![T::zero(); k + 1];
        v[k] = c;
        Poly::new(v)
    }

    pub fn from_i64s(cs: &[i64]) -> Self {
        Poly::new(cs.iter().map(|&c| T::from_i64(c)).collect())
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn lead(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) - other.coeff(k)).collect())
    }

    pub fn neg(&self) -> Self {
        Poly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }

    pub fn scale(&self, c: &T) -> Self {
        Poly::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }

    /// Truncates to terms of degree `< n`.
    pub fn truncate(&self, n: usize) -> Self {
        Poly::new(self.coeffs.iter().take(n).cloned().collect())
    }

    pub fn derivative(&self) -> Self {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.clone() * T::from_i64(k as i64))
                .collect(),
        )
    }

    /// Quotient and remainder. Division by the leading coefficient of
    /// `divisor` must be exact in `T` (always true over a field, and over
    /// the integers for a monic divisor).
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.lead().unwrap().clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![T::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd].clone() / lead.clone();
            if c.is_zero() {
                continue;
            }
            for (j, b) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = rem[k + j].clone() - c.clone() * b.clone();
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.div_rem(divisor).1
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> Self {
        match self.lead() {
            Some(l) => {
                let inv = T::one() / l.clone();
                self.scale(&inv)
            }
            None => Poly::zero(),
        }
    }

    /// `x^n mod self` by repeated squaring.
    pub fn pow_x_mod(&self, n: u64) -> Self {
        let x = Poly::monomial(T::one(), 1).rem(self);
        let mut result = Poly::one().rem(self);
        let mut base = x;
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base).rem(self);
            }
            base = base.mul(&base).rem(self);
            e >>= 1;
        }
        result
    }

    /// Resultant `Res(self, other) = lc(self)^deg(other) prod other(alpha)`
    /// over the roots `alpha` of `self`, by the Euclidean remainder sequence.
    pub fn resultant(&self, other: &Self) -> T {
        let (Some(m), Some(n)) = (self.degree(), other.degree()) else {
            return T::zero();
        };
        if n == 0 {
            return pow(other.coeffs[0].clone(), m);
        }
        if m == 0 {
            return pow(self.coeffs[0].clone(), n);
        }
        // Res(f, g) = (-1)^{mn} Res(g, f) = (-1)^{mn} lc(g)^{m - deg r} Res(g, r).
        let r = self.rem(other);
        let Some(k) = r.degree() else {
            return T::zero();
        };
        let sign = if m * n % 2 == 1 { -T::one() } else { T::one() };
        sign * pow(other.lead().unwrap().clone(), m - k) * other.resultant(&r)
    }
}

fn pow<T: Scalar>(base: T, e: usize) -> T {
    (0..e).fold(T::one(), |acc, _| acc * base.clone())
}

impl Poly<BigRational> {
    /// Monic greatest common divisor over the rationals.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Yun's square-free decomposition: `f = lc * prod_i g_i^i` with each
    /// `g_i` monic, square-free and pairwise coprime. Returns `(i, g_i)` for
    /// nonconstant `g_i`.
    pub fn squarefree_decomposition(&self) -> Vec<(usize, Poly<BigRational>)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let a = f.gcd(&df);
        let mut b = f.div_rem(&a).0;
        let c = df.div_rem(&a).0;
        let mut d = c.sub(&b.derivative());
        let mut i = 1;
        while b.degree().unwrap_or(0) > 0 {
            let g = b.gcd(&d);
            if g.degree().unwrap_or(0) > 0 {
                out.push((i, g.clone()));
            }
            b = b.div_rem(&g).0;
            let c = d.div_rem(&g).0;
            d = c.sub(&b.derivative());
            i += 1;
        }
        out
    }

    /// Clears denominators and content, with a positive leading coefficient.
    pub fn primitive_integer(&self) -> Poly<BigInt> {
        use num_integer::Integer;
        if self.is_zero() {
            return Poly { coeffs: Vec::new() };
        }
        let l = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * BigRational::from_integer(l.clone())).to_integer())
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let sign = if ints.last().unwrap().is_negative() { -BigInt::one() } else { BigInt::one() };
        Poly {
            coeffs: ints.into_iter().map(|c| c / &g * &sign).collect(),
        }
    }
}

impl Poly<BigInt> {
    pub fn to_rational(&self) -> Poly<BigRational> {
        Poly::new(
            self.coeffs
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        )
    }
}

/// The `k`-th cyclotomic polynomial, from `x^k - 1 = prod_{d | k} Phi_d`.
pub fn cyclotomic(k: u64) -> Poly<BigInt> {
    assert!(k >= 1);
    let mut num = Poly::<BigInt>::monomial(BigInt::one(), k as usize);
    num = num.sub(&Poly::one());
    for d in divisors(k).into_iter().filter(|&d| d < k) {
        num = num.div_rem(&cyclotomic(d)).0;
    }
    num
}

impl<T: Scalar + fmt::Display> fmt::Display for Poly<T> {
    /// Coefficients low-to-high, comma separated.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type QPoly = Poly<BigRational>;
    type ZPoly = Poly<BigInt>;

    fn z(cs: &[i64]) -> ZPoly {
        Poly::from_i64s(cs)
    }

    fn q(cs: &[i64]) -> QPoly {
        Poly::from_i64s(cs)
    }

    #[test]
    fn arithmetic() {
        let a = z(&[1, 1]);
        let b = z(&[-1, 1]);
        assert_eq!(a.mul(&b), z(&[-1, 0, 1]));
        assert_eq!(a.add(&b), z(&[0, 2]));
        assert_eq!(a.sub(&a), ZPoly::zero());
        assert_eq!(z(&[1, 2, 3]).derivative(), z(&[2, 6]));
        assert_eq!(z(&[1, 2, 3]).eval(&BigInt::from(2)), BigInt::from(17));
    }

    #[test]
    fn division() {
        let f = z(&[-1, 0, 0, 1]);
        let (qq, r) = f.div_rem(&z(&[-1, 1]));
        assert_eq!(qq, z(&[1, 1, 1]));
        assert!(r.is_zero());
        let (qq, r) = q(&[1, 0, 1]).div_rem(&q(&[0, 2]));
        assert_eq!(qq.coeffs(), &[BigRational::zero(), BigRational::new(1.into(), 2.into())]);
        assert_eq!(r, q(&[1]));
    }

    #[test]
    fn float_instantiation() {
        let p: Poly<f64> = Poly::from_i64s(&[-2, 0, 1]);
        assert!((p.eval(&std::f64::consts::SQRT_2)).abs() < 1e-12);
        let p32: Poly<f32> = Poly::from_i64s(&[1, 1]);
        assert_eq!(p32.mul(&p32).coeffs(), &[1.0, 2.0, 1.0]);
    }

    #[test]
    fn gcd_and_squarefree() {
        let g = q(&[-1, 0, 1]).gcd(&q(&[-1, 1]).mul(&q(&[2, 1])));
        assert_eq!(g, q(&[-1, 1]));
        // (x - 1)^2 (x + 2)^3 x
        let f = q(&[-1, 1])
            .mul(&q(&[-1, 1]))
            .mul(&q(&[2, 1]).mul(&q(&[2, 1])).mul(&q(&[2, 1])))
            .mul(&q(&[0, 1]));
        let dec = f.squarefree_decomposition();
        assert_eq!(dec, vec![(1, q(&[0, 1])), (2, q(&[-1, 1])), (3, q(&[2, 1]))]);
        assert_eq!(q(&[-1, -1, 1]).squarefree_decomposition(), vec![(1, q(&[-1, -1, 1]))]);
    }

    #[test]
    fn cyclotomics() {
        assert_eq!(cyclotomic(1), z(&[-1, 1]));
        assert_eq!(cyclotomic(4), z(&[1, 0, 1]));
        assert_eq!(cyclotomic(6), z(&[1, -1, 1]));
        assert_eq!(cyclotomic(12), z(&[1, 0, -1, 0, 1]));
        assert_eq!(cyclotomic(15).degree(), Some(8));
    }

    #[test]
    fn resultants() {
        // Res(x - a, g) = g(a).
        let g = q(&[3, 0, 1]);
        assert_eq!(q(&[-2, 1]).resultant(&g), BigRational::from_integer(7.into()));
        // Res(x^2 - x - 1, x^4 - 1) = (a^4 - 1)(b^4 - 1) = 5.
        let f = q(&[-1, -1, 1]);
        let r = f.resultant(&q(&[-1, 0, 0, 0, 1]));
        assert_eq!(r.abs(), BigRational::from_integer(5.into()));
        assert!(q(&[-1, 1]).resultant(&q(&[-1, 0, 1])).is_zero());
    }

    #[test]
    fn x_power_mod() {
        let f = z(&[-1, -1, 1]);
        // x^5 = 5x + 3 mod x^2 - x - 1.
        assert_eq!(f.pow_x_mod(5), z(&[3, 5]));
        assert_eq!(f.pow_x_mod(0), z(&[1]));
    }

    #[test]
    fn primitive_part() {
        let p = Poly::new(vec![
            BigRational::new(1.into(), 2.into()),
            BigRational::new((-3).into(), 4.into()),
        ]);
        assert_eq!(p.neg().primitive_integer(), z(&[-2, 3]));
    }
}
