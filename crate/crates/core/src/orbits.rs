//! Period counts `F_n` (points fixed by `T^n`) and least-period counts `L_n`.
//!
//! The two are tied by `F_n = sum_{d | n} L_d`; Möbius inversion goes the
//! other way. Everything here is exact, apart from the logarithmic growth
//! diagnostics, which use certified intervals.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::construction::GrowthTarget;
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::numtheory::{divisors, mobius};

/// Default fractional bits for logarithms in the diagnostics.
pub const DEFAULT_PRECISION_BITS: u32 = 128;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SequenceKind {
    /// `F_n`, points of period `n`.
    Fixed,
    /// `L_n`, points of least period `n`.
    Least,
}

/// A finite prefix `S_1, ..., S_N` of a count sequence.
///
/// Values are signed so that inverting a non-realizable `F` can report
/// negative "least period counts" instead of hiding them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountSequence {
    kind: SequenceKind,
    values: Vec<BigInt>,
}

impl CountSequence {
    pub fn new(kind: SequenceKind, values: Vec<BigInt>) -> Self {
        CountSequence { kind, values }
    }

    pub fn fixed<I, T>(values: I) -> Self
    where
        I: IntoIterator<Item = T>,
        T: Into<BigInt>,
    {
        CountSequence::new(SequenceKind::Fixed, values.into_iter().map(Into::into).collect())
    }

    pub fn least<I, T>(values: I) -> Self
    where
        I: IntoIterator<Item = T>,
        T: Into<BigInt>,
    {
        CountSequence::new(SequenceKind::Least, values.into_iter().map(Into::into).collect())
    }

    pub fn kind(&self) -> SequenceKind {
        self.kind
    }

    /// The horizon `N`.
    pub fn horizon(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[BigInt] {
        &self.values
    }

    /// `S_n` for `1 <= n <= N`.
    pub fn get(&self, n: usize) -> &BigInt {
        &self.values[n - 1]
    }

    pub fn truncated(&self, horizon: usize) -> CountSequence {
        CountSequence::new(self.kind, self.values[..horizon.min(self.values.len())].to_vec())
    }

    fn expect_kind(&self, kind: SequenceKind) -> Result<()> {
        if self.kind == kind {
            Ok(())
        } else {
            Err(Error::Invalid(format!(
                "expected a {kind:?} sequence, got {:?}",
                self.kind
            )))
        }
    }
}

fn divisor_indices(n: usize) -> Vec<usize> {
    divisors(n as u64).into_iter().map(|d| d as usize).collect()
}

/// `F_n = sum_{d | n} L_d`.
pub fn fixed_from_least(least: &CountSequence) -> Result<CountSequence> {
    least.expect_kind(SequenceKind::Least)?;
    let n_max = least.horizon();
    let mut out = vec![BigInt::zero(); n_max];
    // Scatter each L_d into its multiples.
    for d in 1..=n_max {
        let l = least.get(d);
        if l.is_zero() {
            continue;
        }
        for m in (d..=n_max).step_by(d) {
            out[m - 1] += l;
        }
    }
    Ok(CountSequence::new(SequenceKind::Fixed, out))
}

/// `L_n = sum_{d | n} mu(n / d) F_d`.
pub fn least_from_fixed(fixed: &CountSequence) -> Result<CountSequence> {
    fixed.expect_kind(SequenceKind::Fixed)?;
    let out = (1..=fixed.horizon())
        .map(|n| {
            divisor_indices(n).into_iter().fold(BigInt::zero(), |acc, d| {
                match mobius((n / d) as u64) {
                    1 => acc + fixed.get(d),
                    -1 => acc - fixed.get(d),
                    _ => acc,
                }
            })
        })
        .collect();
    Ok(CountSequence::new(SequenceKind::Least, out))
}

#[derive(Clone, Debug, Serialize)]
pub struct RealizabilityRow {
    pub n: usize,
    #[serde(serialize_with = "crate::formats::ser_display")]
    pub least: BigInt,
    pub nonnegative: bool,
    pub divisible: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct RealizabilityReport {
    pub rows: Vec<RealizabilityRow>,
    pub realizable: bool,
}

impl RealizabilityReport {
    /// First index where `L_n < 0` or `n` does not divide `L_n`.
    pub fn first_failure(&self) -> Option<&RealizabilityRow> {
        self.rows.iter().find(|r| !(r.nonnegative && r.divisible))
    }
}

/// Checks the two necessary conditions for `F` to count periodic points of
/// an actual map: `L_n >= 0` and `n | L_n` (orbits of least period `n` have
/// exactly `n` points).
pub fn realizability_check(fixed: &CountSequence) -> Result<RealizabilityReport> {
    let least = least_from_fixed(fixed)?;
    let rows: Vec<RealizabilityRow> = least
        .values()
        .iter()
        .enumerate()
        .map(|(i, l)| {
            let n = i + 1;
            RealizabilityRow {
                n,
                least: l.clone(),
                nonnegative: !l.is_negative(),
                divisible: l.is_multiple_of(&BigInt::from(n)),
            }
        })
        .collect();
    let realizable = rows.iter().all(|r| r.nonnegative && r.divisible);
    Ok(RealizabilityReport { rows, realizable })
}

/// One sample `(n, log S_n, log S_n / n)` of the growth diagnostics.
#[derive(Clone, Debug)]
pub struct RatePoint {
    pub n: usize,
    pub log_count: Interval,
    pub rate: Interval,
}

/// Logarithmic growth of a count sequence, compared with a target rate.
#[derive(Clone, Debug)]
pub struct GrowthDiagnostics {
    pub per_n: Vec<RatePoint>,
    /// Indices with `S_n = 0`, which have no logarithm and are skipped.
    pub zeros: Vec<usize>,
    pub window_len: usize,
    /// Enclosures of the infimum and supremum of the rate over the last
    /// `window_len` samples.
    pub window_inf: Interval,
    pub window_sup: Interval,
    pub target: GrowthTarget,
    /// For a finite target: enclosure of `max |rate - C|` over the window.
    pub window_distance: Option<Interval>,
    pub precision_bits: u32,
}

impl GrowthDiagnostics {
    pub fn last(&self) -> &RatePoint {
        self.per_n.last().expect("diagnostics are never empty")
    }

    pub fn rate_at(&self, n: usize) -> Option<&RatePoint> {
        self.per_n.iter().find(|p| p.n == n)
    }
}

/// Computes `(1/n) log S_n` for every positive entry, with windowed extrema
/// over the last `window_len` positive entries.
pub fn growth_diagnostics(
    seq: &CountSequence,
    target: &GrowthTarget,
    window_len: usize,
    precision_bits: u32,
) -> Result<GrowthDiagnostics> {
    if window_len == 0 {
        return Err(Error::Invalid("window length must be positive".into()));
    }
    let mut per_n = Vec::with_capacity(seq.horizon());
    let mut zeros = Vec::new();
    for (i, v) in seq.values().iter().enumerate() {
        let n = i + 1;
        if v.is_negative() {
            return Err(Error::Invalid(format!("negative count at n = {n}")));
        }
        if v.is_zero() {
            zeros.push(n);
            continue;
        }
        let log_count = Interval::ln_natural(v.magnitude(), precision_bits);
        let rate = log_count.div_int(n as u64);
        per_n.push(RatePoint { n, log_count, rate });
    }
    if per_n.is_empty() {
        return Err(Error::AllZero);
    }
    let start = per_n.len().saturating_sub(window_len);
    let window = &per_n[start..];
    let mut window_inf = window[0].rate.clone();
    let mut window_sup = window[0].rate.clone();
    for p in &window[1..] {
        window_inf = window_inf.min(&p.rate);
        window_sup = window_sup.max(&p.rate);
    }
    let window_distance = match target {
        GrowthTarget::Finite(c) => {
            let c = Interval::from_rational(c, precision_bits);
            Some(
                window
                    .iter()
                    .map(|p| p.rate.sub(&c).abs())
                    .reduce(|a, b| a.max(&b))
                    .unwrap(),
            )
        }
        GrowthTarget::Zero => Some(window_sup.abs()),
        GrowthTarget::Infinite => None,
    };
    Ok(GrowthDiagnostics {
        per_n,
        zeros,
        window_len,
        window_inf,
        window_sup,
        target: target.clone(),
        window_distance,
        precision_bits,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SandwichRow {
    pub r: usize,
    /// `L_r <= F_r`.
    pub upper: bool,
    /// `L_r >= F_r - sum_{d | r, d < r} F_d`.
    pub lower: bool,
    #[serde(serialize_with = "crate::formats::ser_display")]
    pub proper_divisor_sum: BigInt,
}

#[derive(Clone, Debug, Serialize)]
pub struct SandwichReport {
    pub rows: Vec<SandwichRow>,
    pub violations: Vec<usize>,
}

impl SandwichReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `F_r - sum_{d | r, d < r} F_d <= L_r <= F_r` for every `r`.
pub fn lemma_sandwich_check(fixed: &CountSequence, least: &CountSequence) -> Result<SandwichReport> {
    fixed.expect_kind(SequenceKind::Fixed)?;
    least.expect_kind(SequenceKind::Least)?;
    if fixed.horizon() != least.horizon() {
        return Err(Error::Invalid("sequences have different horizons".into()));
    }
    let mut rows = Vec::with_capacity(fixed.horizon());
    let mut violations = Vec::new();
    for r in 1..=fixed.horizon() {
        let proper: BigInt = divisor_indices(r)
            .into_iter()
            .filter(|&d| d < r)
            .map(|d| fixed.get(d).clone())
            .sum();
        let f = fixed.get(r);
        let l = least.get(r);
        let upper = l <= f;
        let lower = *l >= f - &proper;
        if !(upper && lower) {
            violations.push(r);
        }
        rows.push(SandwichRow {
            r,
            upper,
            lower,
            proper_divisor_sum: proper,
        });
    }
    Ok(SandwichReport { rows, violations })
}

/// Finite-horizon comparison of the growth rates of `F` and `L`.
#[derive(Clone, Debug)]
pub struct RateGap {
    /// Per `n` in the window: `(1/n) log F_n - (1/n) log L_n`.
    pub gaps: Vec<(usize, Interval)>,
    /// Tolerance at each `n`: `max(log N / N, (1/n) log(F_n / (F_n - S_n)))`
    /// with `S_n` the proper-divisor sum of `F`.
    pub tolerances: Vec<(usize, Interval)>,
    /// Indices in the window where the gap is not certified below tolerance
    /// (including those where `L_n = 0` or `F_n <= S_n`).
    pub exceptions: Vec<usize>,
}

/// Compares the windowed rates of `F` and its inversion `L`.
pub fn rate_gap(fixed: &CountSequence, window_len: usize, precision_bits: u32) -> Result<RateGap> {
    let least = least_from_fixed(fixed)?;
    let n_max = fixed.horizon();
    let floor = Interval::ln_natural(&BigUint::from(n_max.max(1)), precision_bits)
        .div_int(n_max.max(1) as u64);
    let mut gaps = Vec::new();
    let mut tolerances = Vec::new();
    let mut exceptions = Vec::new();
    for n in n_max.saturating_sub(window_len) + 1..=n_max {
        let f = fixed.get(n);
        let l = least.get(n);
        let proper: BigInt = divisor_indices(n)
            .into_iter()
            .filter(|&d| d < n)
            .map(|d| fixed.get(d).clone())
            .sum();
        if !l.is_positive() || f <= &proper {
            exceptions.push(n);
            continue;
        }
        let lf = Interval::ln_natural(f.magnitude(), precision_bits);
        let ll = Interval::ln_natural(l.magnitude(), precision_bits);
        let gap = lf.sub(&ll).div_int(n as u64);
        let tail = Interval::ln_rational(
            &BigRational::new(f.clone(), f - &proper),
            precision_bits,
        )
        .div_int(n as u64);
        let tol = tail.max(&floor);
        if !gap.certainly_le(&tol) {
            exceptions.push(n);
        }
        gaps.push((n, gap));
        tolerances.push((n, tol));
    }
    Ok(RateGap {
        gaps,
        tolerances,
        exceptions,
    })
}

/// Growth rate of `S_n` as an `f64`, for quick inspection.
pub fn rate_f64(value: &BigInt, n: usize) -> Option<f64> {
    if !value.is_positive() {
        return None;
    }
    let bits = value.bits();
    let ln = if bits < 1000 {
        value.to_f64()?.ln()
    } else {
        let shift = bits - 64;
        (value >> shift).to_f64()?.ln() + shift as f64 * std::f64::consts::LN_2
    };
    Some(ln / n as f64)
}
