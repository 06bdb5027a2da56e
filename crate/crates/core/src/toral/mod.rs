//! Lehmer sequences `Delta_n(f) = prod |alpha_i^n - 1|` and Mahler measures
//! of monic integer polynomials, i.e. period counts and entropy of the
//! associated toral automorphisms.

mod growth;
mod mahler;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::numtheory::totient;
use crate::orbits::CountSequence;
use crate::poly::{cyclotomic, Poly};

pub use growth::{lehmer_growth_check, LehmerReport};
pub use mahler::{aberth_roots, mahler_measure, MahlerResult, RootEnclosure};

/// A monic integer polynomial of degree at least one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerPolynomial {
    poly: Poly<BigInt>,
}

impl IntegerPolynomial {
    /// From coefficients `c_0, ..., c_d` with `c_d = 1`.
    pub fn new(coeffs: Vec<BigInt>) -> Result<Self> {
        let poly = Poly::new(coeffs);
        match (poly.degree(), poly.lead()) {
            (Some(d), Some(l)) if d >= 1 && l.is_one() => Ok(IntegerPolynomial { poly }),
            (Some(d), _) if d >= 1 => Err(Error::Invalid(format!("polynomial `{poly}` is not monic"))),
            _ => Err(Error::Invalid(format!("polynomial `{poly}` has degree < 1"))),
        }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Result<Self> {
        IntegerPolynomial::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn degree(&self) -> usize {
        self.poly.degree().unwrap()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        self.poly.coeffs()
    }

    pub fn as_poly(&self) -> &Poly<BigInt> {
        &self.poly
    }

    pub fn mul(&self, other: &Self) -> Self {
        IntegerPolynomial {
            poly: self.poly.mul(&other.poly),
        }
    }

    /// Companion matrix: ones on the subdiagonal, `-c_0, ..., -c_{d-1}` in
    /// the last column.
    pub fn companion(&self) -> Vec<Vec<BigInt>> {
        let d = self.degree();
        let mut m = vec![vec![BigInt::zero(); d]; d];
        for i in 1..d {
            m[i][i - 1] = BigInt::one();
        }
        for (i, row) in m.iter_mut().enumerate() {
            row[d - 1] = -self.poly.coeff(i);
        }
        m
    }
}

impl FromStr for IntegerPolynomial {
    type Err = Error;

    /// `c0,c1,...,cd`, low-to-high.
    fn from_str(s: &str) -> Result<Self> {
        let coeffs = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<BigInt>()
                    .map_err(|_| Error::Parse(format!("bad coefficient `{}` in `{s}`", t.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        IntegerPolynomial::new(coeffs)
    }
}

impl fmt::Display for IntegerPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.poly.fmt(f)
    }
}

/// Smallest `k` with `gcd(f, Phi_k) != 1`, if any. Only `k` with
/// `phi(k) <= deg f` can occur, and those satisfy `k <= 2 (deg f)^2 + 6`.
pub fn cyclotomic_index(f: &IntegerPolynomial) -> Option<u64> {
    let d = f.degree() as u64;
    let fq = f.poly.to_rational();
    (1..=2 * d * d + 6)
        .filter(|&k| totient(k) <= d)
        .find(|&k| fq.gcd(&cyclotomic(k).to_rational()).degree().unwrap_or(0) > 0)
}

/// Whether `f` vanishes at a root of unity, so that some `Delta_n(f) = 0`.
pub fn degeneracy_check(f: &IntegerPolynomial) -> bool {
    cyclotomic_index(f).is_some()
}

fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let d = a.len();
    let mut out = vec![vec![BigInt::zero(); d]; d];
    for i in 0..d {
        for k in 0..d {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..d {
                out[i][j] += &a[i][k] * &b[k][j];
            }
        }
    }
    out
}

fn mat_pow(m: &[Vec<BigInt>], mut e: u64) -> Vec<Vec<BigInt>> {
    let d = m.len();
    let mut acc: Vec<Vec<BigInt>> = (0..d)
        .map(|i| (0..d).map(|j| BigInt::from(u8::from(i == j))).collect())
        .collect();
    let mut base = m.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            acc = mat_mul(&acc, &base);
        }
        e >>= 1;
        if e > 0 {
            base = mat_mul(&base, &base);
        }
    }
    acc
}

/// Fraction-free (Bareiss) elimination; every division is exact.
pub fn bareiss_determinant(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

fn det_minus_identity(mut m: Vec<Vec<BigInt>>) -> BigInt {
    for (i, row) in m.iter_mut().enumerate() {
        row[i] -= 1;
    }
    bareiss_determinant(m).abs()
}

/// `|det(M^n - I)|` with `M` the companion matrix of `f`.
pub fn delta_n(f: &IntegerPolynomial, n: u64) -> BigInt {
    assert!(n >= 1);
    det_minus_identity(mat_pow(&f.companion(), n))
}

/// `|Res(f, x^n - 1)|`, reducing `x^n - 1` modulo `f` first and then running
/// the Euclidean resultant over the rationals.
pub fn delta_n_resultant(f: &IntegerPolynomial, n: u64) -> BigInt {
    assert!(n >= 1);
    let r = f.poly.pow_x_mod(n).sub(&Poly::one());
    // f is monic, so Res(f, x^n - 1) = prod (alpha^n - 1) = Res(f, r).
    let res = f.poly.to_rational().resultant(&r.to_rational());
    assert!(res.is_integer(), "resultant of integer polynomials is an integer");
    res.to_integer().abs()
}

/// `Delta_1, ..., Delta_N`, the period counts of the toral automorphism.
pub fn toral_fix_sequence(f: &IntegerPolynomial, n_max: usize) -> Result<CountSequence> {
    if let Some(k) = cyclotomic_index(f) {
        return Err(Error::Degenerate(k));
    }
    let m = f.companion();
    let mut power = m.clone();
    let mut values = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        if n > 1 {
            power = mat_mul(&power, &m);
        }
        values.push(det_minus_identity(power.clone()));
    }
    Ok(CountSequence::fixed(values))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(cs: &[i64]) -> IntegerPolynomial {
        IntegerPolynomial::from_i64s(cs).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn parsing() {
        assert_eq!("-2,1".parse::<IntegerPolynomial>().unwrap(), poly(&[-2, 1]));
        assert_eq!(" -1, -1, 1 ".parse::<IntegerPolynomial>().unwrap(), poly(&[-1, -1, 1]));
        assert!("1,2".parse::<IntegerPolynomial>().is_err());
        assert!("5".parse::<IntegerPolynomial>().is_err());
        assert!("1,x".parse::<IntegerPolynomial>().is_err());
        assert!("1,1,0".parse::<IntegerPolynomial>().is_ok());
    }

    #[test]
    fn degeneracy_examples() {
        assert_eq!(cyclotomic_index(&poly(&[-1, 1])), Some(1));
        assert_eq!(cyclotomic_index(&poly(&[-1, -1, 1])), None);
        assert_eq!(cyclotomic_index(&poly(&[1, 0, 1])), Some(4));
        assert_eq!(cyclotomic_index(&poly(&[1, 1, 1]).mul(&poly(&[-2, 1]))), Some(3));
        assert!(!degeneracy_check(&poly(&[1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1])));
    }

    #[test]
    fn delta_examples() {
        assert_eq!(delta_n(&poly(&[-2, 1]), 5), BigInt::from(31));
        let gm = poly(&[-1, -1, 1]);
        let d: Vec<BigInt> = (1..=5).map(|n| delta_n(&gm, n)).collect();
        assert_eq!(d, ints(&[1, 1, 4, 5, 11]));
        assert_eq!(delta_n_resultant(&gm, 4), BigInt::from(5));
        let r: Vec<BigInt> = (1..=5).map(|n| delta_n_resultant(&gm, n)).collect();
        assert_eq!(r, d);
    }

    #[test]
    fn fix_sequences() {
        assert_eq!(toral_fix_sequence(&poly(&[-2, 1]), 4).unwrap().values(), ints(&[1, 3, 7, 15]));
        assert_eq!(
            toral_fix_sequence(&poly(&[-1, -1, 1]), 5).unwrap().values(),
            ints(&[1, 1, 4, 5, 11])
        );
        assert_eq!(toral_fix_sequence(&poly(&[1, -3, 1]), 3).unwrap().values(), ints(&[1, 5, 16]));
        assert!(matches!(toral_fix_sequence(&poly(&[1, 0, 1]), 3), Err(Error::Degenerate(4))));
    }

    #[test]
    fn bareiss_small() {
        let m = vec![ints(&[2, -1, 0]), ints(&[-1, 2, -1]), ints(&[0, -1, 2])];
        assert_eq!(bareiss_determinant(m), BigInt::from(4));
        let m = vec![ints(&[0, 1]), ints(&[1, 0])];
        assert_eq!(bareiss_determinant(m), BigInt::from(-1));
        let m = vec![ints(&[1, 2]), ints(&[2, 4])];
        assert!(bareiss_determinant(m).is_zero());
    }

    #[test]
    fn degenerate_delta_vanishes() {
        // x^2 + 1 has roots of order 4.
        let f = poly(&[1, 0, 1]);
        assert!(delta_n(&f, 4).is_zero());
        assert!(delta_n_resultant(&f, 4).is_zero());
        assert_eq!(delta_n(&f, 1), BigInt::from(2));
    }
}
