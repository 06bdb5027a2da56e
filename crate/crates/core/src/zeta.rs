//! Truncated dynamical zeta functions `exp(sum_n F_n z^n / n)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::formats::ser_display_vec;
use crate::orbits::{realizability_check, CountSequence, SequenceKind};
use crate::poly::Poly;
use crate::scalar::Scalar;

/// Coefficients `c_0, ..., c_M` of the zeta function of a count sequence.
#[derive(Clone, Debug, PartialEq)]
pub struct ZetaSeries<T> {
    coeffs: Vec<T>,
    source: CountSequence,
}

impl<T: Scalar> ZetaSeries<T> {
    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// The truncation order `M`.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// The `F` sequence the series was built from.
    pub fn source(&self) -> &CountSequence {
        &self.source
    }

    /// Checks `m c_m = sum_{k=1}^{m} F_k c_{m-k}` for `1 <= m <= M`.
    pub fn satisfies_recurrence(&self) -> bool {
        self.coeffs[0] == T::one()
            && (1..=self.order()).all(|m| {
                let rhs = (1..=m).fold(T::zero(), |acc, k| {
                    acc + T::from_bigint(self.source.get(k)) * self.coeffs[m - k].clone()
                });
                T::from_i64(m as i64) * self.coeffs[m].clone() == rhs
            })
    }
}

fn check_source(fixed: &CountSequence, order: usize) -> Result<()> {
    if fixed.kind() != SequenceKind::Fixed {
        return Err(Error::Invalid("zeta needs a fixed-point count sequence".into()));
    }
    if order > fixed.horizon() {
        return Err(Error::Invalid(format!(
            "order {order} exceeds the sequence horizon {}",
            fixed.horizon()
        )));
    }
    Ok(())
}

/// `c_0 = 1`, `c_m = (1/m) sum_{k=1}^{m} F_k c_{m-k}`.
pub fn zeta_truncate<T: Scalar>(fixed: &CountSequence, order: usize) -> Result<ZetaSeries<T>> {
    check_source(fixed, order)?;
    let f: Vec<T> = fixed.values()[..order].iter().map(T::from_bigint).collect();
    let mut c = Vec::with_capacity(order + 1);
    c.push(T::one());
    for m in 1..=order {
        let s = (1..=m).fold(T::zero(), |acc, k| acc + f[k - 1].clone() * c[m - k].clone());
        c.push(s / T::from_i64(m as i64));
    }
    Ok(ZetaSeries {
        coeffs: c,
        source: fixed.truncated(order),
    })
}

/// Recovers `F_1, ..., F_M` from the coefficients via
/// `F_m = m c_m - sum_{k=1}^{m-1} F_k c_{m-k}`.
pub fn fixed_from_zeta<T: Scalar>(coeffs: &[T]) -> Result<Vec<T>> {
    if coeffs.first() != Some(&T::one()) {
        return Err(Error::Invalid("zeta series must start with 1".into()));
    }
    let mut f: Vec<T> = Vec::with_capacity(coeffs.len().saturating_sub(1));
    for m in 1..coeffs.len() {
        let s = (1..m).fold(T::zero(), |acc, k| acc + f[k - 1].clone() * coeffs[m - k].clone());
        f.push(T::from_i64(m as i64) * coeffs[m].clone() - s);
    }
    Ok(f)
}

/// Euler product `prod_n (1 - z^n)^{-L_n / n}` through `z^M`, computed on
/// integers from the orbit counts `O_n = L_n / n`.
pub fn orbit_product_form<T: Scalar>(fixed: &CountSequence, order: usize) -> Result<ZetaSeries<T>> {
    check_source(fixed, order)?;
    let report = realizability_check(&fixed.truncated(order))?;
    if let Some(bad) = report.first_failure() {
        let reason = if bad.nonnegative {
            format!("L_{} = {} is not divisible by {}", bad.n, bad.least, bad.n)
        } else {
            format!("L_{} = {} is negative", bad.n, bad.least)
        };
        return Err(Error::NotRealizable { n: bad.n, reason });
    }
    let mut c = vec![BigInt::zero(); order + 1];
    c[0] = BigInt::one();
    for row in &report.rows {
        let n = row.n;
        let orbits = &row.least / BigInt::from(n);
        if orbits.is_zero() {
            continue;
        }
        // (1 - z^n)^{-O} = sum_k binom(O + k - 1, k) z^{nk}.
        let mut factor = vec![BigInt::zero(); order / n + 1];
        factor[0] = BigInt::one();
        for k in 1..factor.len() {
            factor[k] = &factor[k - 1] * (&orbits + BigInt::from(k - 1)) / BigInt::from(k);
        }
        let mut next = vec![BigInt::zero(); order + 1];
        for (i, ci) in c.iter().enumerate() {
            if ci.is_zero() {
                continue;
            }
            for (k, b) in factor.iter().enumerate() {
                let j = i + n * k;
                if j > order {
                    break;
                }
                next[j] += ci * b;
            }
        }
        c = next;
    }
    Ok(ZetaSeries {
        coeffs: c.iter().map(T::from_bigint).collect(),
        source: fixed.truncated(order),
    })
}

/// Outcome of the rationality probe. Finite data can only ever be
/// consistent with a rational function, never prove one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict")]
pub enum ProbeVerdict {
    #[serde(rename = "consistent-with-rational")]
    ConsistentWithRational {
        deg_num: usize,
        deg_den: usize,
        /// Numerator, low-to-high, with `D(0) = 1` normalization.
        #[serde(serialize_with = "ser_display_vec")]
        num_coeffs: Vec<BigRational>,
        #[serde(serialize_with = "ser_display_vec")]
        den_coeffs: Vec<BigRational>,
    },
    #[serde(rename = "no-low-order-recurrence")]
    NoLowOrderRecurrence,
}

impl ProbeVerdict {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("verdict serializes")
    }
}

/// Berlekamp-Massey over the rationals: the connection polynomial
/// `C(z) = 1 + c_1 z + ... ` and the register length `L`.
pub fn berlekamp_massey(s: &[BigRational]) -> (Poly<BigRational>, usize) {
    let mut c = Poly::one();
    let mut b = Poly::one();
    let mut len = 0usize;
    let mut shift = 1usize;
    let mut last = BigRational::one();
    for n in 0..s.len() {
        let disc = (1..=len).fold(s[n].clone(), |acc, i| acc + c.coeff(i) * &s[n - i]);
        if disc.is_zero() {
            shift += 1;
            continue;
        }
        let adj = Poly::monomial(&disc / &last, shift).mul(&b);
        if 2 * len <= n {
            let prev = c.clone();
            c = c.sub(&adj);
            len = n + 1 - len;
            b = prev;
            last = disc;
            shift = 1;
        } else {
            c = c.sub(&adj);
            shift += 1;
        }
    }
    (c, len)
}

/// Searches for `S(z) = N(z) / D(z)` with a linear recurrence of length at
/// most `floor(M/2) - 1`, so that at least `q + 1` terms past the fit
/// confirm it.
pub fn rationality_probe(series: &ZetaSeries<BigRational>) -> Result<ProbeVerdict> {
    let m = series.order();
    if m < 8 {
        return Err(Error::Invalid(format!("probe needs M >= 8, got {m}")));
    }
    let s = series.coeffs();
    let (conn, len) = berlekamp_massey(s);
    if len > m / 2 - 1 {
        return Ok(ProbeVerdict::NoLowOrderRecurrence);
    }
    let sp = Poly::new(s.to_vec());
    let product = sp.mul(&conn).truncate(m + 1);
    let num = product.truncate(len);
    // The recurrence makes every term of degree len..=M vanish.
    if product != num {
        return Ok(ProbeVerdict::NoLowOrderRecurrence);
    }
    let g = num.gcd(&conn);
    let (mut num, mut den) = (num.div_rem(&g).0, conn.div_rem(&g).0);
    let d0 = den.coeff(0);
    let inv = BigRational::one() / d0;
    num = num.scale(&inv);
    den = den.scale(&inv);
    debug_assert!(sp.mul(&den).truncate(m + 1) == num.truncate(m + 1));
    Ok(ProbeVerdict::ConsistentWithRational {
        deg_num: num.degree().unwrap_or(0),
        deg_den: den.degree().unwrap_or(0),
        num_coeffs: num.coeffs().to_vec(),
        den_coeffs: den.coeffs().to_vec(),
    })
}

/// Whether every coefficient is a nonnegative integer.
pub fn has_nonnegative_integer_coeffs(series: &ZetaSeries<BigRational>) -> bool {
    series
        .coeffs()
        .iter()
        .all(|c| c.is_integer() && !c.is_negative())
}

/// Least common multiple of the coefficient denominators.
pub fn common_denominator(series: &ZetaSeries<BigRational>) -> BigInt {
    series
        .coeffs()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    fn qs(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| q(x, 1)).collect()
    }

    fn mersenne(n: u32) -> CountSequence {
        CountSequence::fixed((1..=n).map(|k| (BigInt::from(1) << k) - 1))
    }

    fn golden(n: usize) -> CountSequence {
        // Lucas_n - 1 - (-1)^n
        let mut lucas = vec![BigInt::from(2), BigInt::from(1)];
        for k in 2..=n {
            let next = &lucas[k - 1] + &lucas[k - 2];
            lucas.push(next);
        }
        CountSequence::fixed((1..=n).map(|k| {
            let sign = if k % 2 == 0 { 1 } else { -1 };
            &lucas[k] - 1 - sign
        }))
    }

    #[test]
    fn truncate_examples() {
        let z: ZetaSeries<BigRational> = zeta_truncate(&mersenne(5), 5).unwrap();
        assert_eq!(z.coeffs(), qs(&[1, 1, 2, 4, 8, 16]));
        assert!(z.satisfies_recurrence());
        let z: ZetaSeries<BigRational> = zeta_truncate(&CountSequence::fixed([1; 4]), 4).unwrap();
        assert_eq!(z.coeffs(), qs(&[1, 1, 1, 1, 1]));
        let z: ZetaSeries<BigRational> = zeta_truncate(&CountSequence::fixed([1, 0, 0]), 3).unwrap();
        assert_eq!(z.coeffs(), &[q(1, 1), q(1, 1), q(1, 2), q(1, 6)]);
        assert!(zeta_truncate::<BigRational>(&mersenne(3), 4).is_err());
        assert!(zeta_truncate::<BigRational>(&CountSequence::least([1]), 1).is_err());
    }

    #[test]
    fn float_series_tracks_exact() {
        let z: ZetaSeries<f64> = zeta_truncate(&mersenne(10), 10).unwrap();
        for (m, c) in z.coeffs().iter().enumerate().skip(1) {
            assert!((c - 2f64.powi(m as i32 - 1)).abs() < 1e-9);
        }
    }

    #[test]
    fn golden_mean_sequence() {
        assert_eq!(golden(5).values(), CountSequence::fixed([1, 1, 4, 5, 11]).values());
    }

    #[test]
    fn inverse_recovers_fixed_counts() {
        let z: ZetaSeries<BigRational> = zeta_truncate(&golden(20), 20).unwrap();
        let f = fixed_from_zeta(z.coeffs()).unwrap();
        let expect: Vec<BigRational> = golden(20).values().iter().map(|v| BigRational::from_integer(v.clone())).collect();
        assert_eq!(f, expect);
    }

    #[test]
    fn product_form_examples() {
        let z: ZetaSeries<BigRational> = orbit_product_form(&mersenne(5), 5).unwrap();
        assert_eq!(z.coeffs(), qs(&[1, 1, 2, 4, 8, 16]));
        let z: ZetaSeries<BigRational> = orbit_product_form(&CountSequence::fixed([1; 4]), 4).unwrap();
        assert_eq!(z.coeffs(), qs(&[1; 5]));
        let e = orbit_product_form::<BigRational>(&CountSequence::fixed([1, 2]), 2).unwrap_err();
        assert!(matches!(e, Error::NotRealizable { n: 2, .. }));
        let g = golden(30);
        assert_eq!(
            orbit_product_form::<BigRational>(&g, 30).unwrap().coeffs(),
            zeta_truncate::<BigRational>(&g, 30).unwrap().coeffs()
        );
    }

    #[test]
    fn probe_mersenne() {
        let z = zeta_truncate(&mersenne(32), 32).unwrap();
        let v = rationality_probe(&z).unwrap();
        assert_eq!(
            v,
            ProbeVerdict::ConsistentWithRational {
                deg_num: 1,
                deg_den: 1,
                num_coeffs: qs(&[1, -1]),
                den_coeffs: qs(&[1, -2]),
            }
        );
        assert_eq!(
            v.to_json(),
            r#"{"verdict":"consistent-with-rational","deg_num":1,"deg_den":1,"num_coeffs":["1","-1"],"den_coeffs":["1","-2"]}"#
        );
    }

    #[test]
    fn probe_constant_and_golden() {
        let z = zeta_truncate(&CountSequence::fixed([1; 12]), 12).unwrap();
        let ProbeVerdict::ConsistentWithRational { num_coeffs, den_coeffs, .. } = rationality_probe(&z).unwrap() else {
            panic!("expected rational");
        };
        assert_eq!((num_coeffs, den_coeffs), (qs(&[1]), qs(&[1, -1])));
        let z = zeta_truncate(&golden(32), 32).unwrap();
        let ProbeVerdict::ConsistentWithRational { num_coeffs, den_coeffs, .. } = rationality_probe(&z).unwrap() else {
            panic!("expected rational");
        };
        assert_eq!((num_coeffs, den_coeffs), (qs(&[1, 0, -1]), qs(&[1, -1, -1])));
    }

    #[test]
    fn probe_rejects_fast_growth() {
        // F_n = n^n has no low-order recurrence.
        let f = CountSequence::fixed((1..=16u32).map(|n| BigInt::from(n).pow(n)));
        let z = zeta_truncate(&f, 16).unwrap();
        assert_eq!(rationality_probe(&z).unwrap(), ProbeVerdict::NoLowOrderRecurrence);
        assert_eq!(
            ProbeVerdict::NoLowOrderRecurrence.to_json(),
            r#"{"verdict":"no-low-order-recurrence"}"#
        );
        let short = zeta_truncate(&mersenne(5), 5).unwrap();
        assert!(rationality_probe(&short).is_err());
    }

    #[test]
    fn berlekamp_massey_fibonacci() {
        let (c, l) = berlekamp_massey(&qs(&[0, 1, 1, 2, 3, 5, 8, 13]));
        assert_eq!(l, 2);
        assert_eq!(c, Poly::from_i64s(&[1, -1, -1]));
    }

    #[test]
    fn integrality_helpers() {
        let z = zeta_truncate(&mersenne(8), 8).unwrap();
        assert!(has_nonnegative_integer_coeffs(&z));
        assert_eq!(common_denominator(&z), BigInt::one());
        let z = zeta_truncate(&CountSequence::fixed([1, 0, 0]), 3).unwrap();
        assert!(!has_nonnegative_integer_coeffs(&z));
        assert_eq!(common_denominator(&z), BigInt::from(6));
    }
}
