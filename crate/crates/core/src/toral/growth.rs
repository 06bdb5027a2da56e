use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::mahler::{mahler_measure, MahlerResult};
use super::{cyclotomic_index, delta_n, IntegerPolynomial};
use crate::error::{Error, Result};
use crate::interval::Interval;

/// `(1/N) log Delta_N(f)` against `m(f)`, which is also the topological
/// entropy of the toral automorphism.
#[derive(Clone, Debug)]
pub struct LehmerReport {
    pub n: u64,
    pub delta: BigInt,
    pub rate: Interval,
    pub mahler: MahlerResult,
    /// `|rate - m(f)|`.
    pub gap: Interval,
    pub tolerance: f64,
    /// The gap is certified below the tolerance.
    pub within_tolerance: bool,
    /// `d (log 2 + log(1 / (1 - e^-delta))) / N` when every root is at
    /// log-distance at least `delta > 0` from the unit circle.
    pub envelope: Option<f64>,
}

impl LehmerReport {
    pub fn entropy(&self) -> &Interval {
        &self.mahler.measure
    }

    /// The gap is certified below the envelope, when there is one.
    pub fn within_envelope(&self) -> Option<bool> {
        self.envelope.map(|e| self.gap.hi_f64() <= e)
    }
}

pub fn lehmer_growth_check(
    f: &IntegerPolynomial,
    n: u64,
    tolerance: f64,
    precision_bits: u32,
) -> Result<LehmerReport> {
    if n == 0 {
        return Err(Error::Invalid("N must be positive".into()));
    }
    if let Some(k) = cyclotomic_index(f) {
        return Err(Error::Degenerate(k));
    }
    let delta = delta_n(f, n);
    debug_assert!(!delta.is_zero());
    let rate = Interval::ln_natural(delta.magnitude(), precision_bits).div_int(n);
    let mahler = mahler_measure(f, precision_bits)?;
    let gap = rate.sub(&mahler.measure.with_prec(precision_bits)).abs();
    let within_tolerance = gap.hi_f64() <= tolerance;
    let d = f.degree() as f64;
    let envelope = mahler.unit_margin().filter(|m| *m > 0.0).map(|margin| {
        let tail = -(-(-margin).exp()).ln_1p();
        d * (std::f64::consts::LN_2 + tail) / n as f64
    });
    Ok(LehmerReport {
        n,
        delta: delta.abs(),
        rate,
        mahler,
        gap,
        tolerance,
        within_tolerance,
        envelope,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(cs: &[i64]) -> IntegerPolynomial {
        IntegerPolynomial::from_i64s(cs).unwrap()
    }

    #[test]
    fn doubling_map_converges() {
        let r = lehmer_growth_check(&poly(&[-2, 1]), 100, 1e-3, 128).unwrap();
        assert!(r.within_tolerance);
        assert_eq!(r.within_envelope(), Some(true));
    }

    #[test]
    fn golden_mean_converges() {
        let r = lehmer_growth_check(&poly(&[-1, -1, 1]), 1000, 1e-3, 128).unwrap();
        assert!(r.within_tolerance);
        assert_eq!(r.within_envelope(), Some(true));
        assert!((r.entropy().mid_f64() - 0.481212).abs() < 1e-6);
    }

    #[test]
    fn first_term_gap_is_reported() {
        let r = lehmer_growth_check(&poly(&[-2, 1]), 1, 1e-3, 128).unwrap();
        assert!(!r.within_tolerance);
        assert!((r.gap.mid_f64() - std::f64::consts::LN_2).abs() < 1e-15);
        assert_eq!(r.delta, BigInt::from(1));
        assert_eq!(r.within_envelope(), Some(true));
    }

    #[test]
    fn degenerate_is_rejected() {
        assert!(matches!(
            lehmer_growth_check(&poly(&[1, 1, 1]), 5, 1e-3, 64),
            Err(Error::Degenerate(3))
        ));
    }
}
