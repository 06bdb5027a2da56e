use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::One;
use serde::Serialize;

use super::plan::ConstructionPlan;
use crate::error::{Error, Result};
use crate::formats::ser_display;
use crate::interval::Interval;
use crate::numtheory::divisors;
use crate::orbits::{least_from_fixed, CountSequence};

/// A positive integer as sorted `(prime, exponent)` pairs.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FactoredNatural {
    factors: Vec<(BigUint, u64)>,
}

impl FactoredNatural {
    pub fn one() -> Self {
        FactoredNatural::default()
    }

    /// Multiplies in `p^e`, merging with an existing power of `p`.
    pub fn mul_prime_power(&mut self, p: &BigUint, e: u64) {
        if e == 0 {
            return;
        }
        match self.factors.binary_search_by(|(q, _)| q.cmp(p)) {
            Ok(i) => self.factors[i].1 += e,
            Err(i) => self.factors.insert(i, (p.clone(), e)),
        }
    }

    pub fn factors(&self) -> &[(BigUint, u64)] {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn value(&self) -> BigUint {
        self.factors
            .iter()
            .fold(BigUint::one(), |acc, (p, e)| acc * p.pow(*e as u32))
    }

    /// Enclosure of the natural logarithm, `sum e log p`.
    pub fn ln(&self, prec: u32) -> Interval {
        self.factors.iter().fold(Interval::zero(prec), |acc, (p, e)| {
            acc.add(&Interval::ln_natural(p, prec).mul_int(&BigInt::from(*e)))
        })
    }
}

impl fmt::Display for FactoredNatural {
    /// `p1^e1*p2^e2*...`, or `1` for the empty product.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        for (i, (p, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            write!(f, "{p}^{e}")?;
        }
        Ok(())
    }
}

impl ConstructionPlan {
    fn check_index(&self, n: usize) -> Result<()> {
        if n == 0 || n > self.horizon() {
            return Err(Error::Invalid(format!(
                "n = {n} outside the plan horizon 1..={}",
                self.horizon()
            )));
        }
        Ok(())
    }

    /// `F_n(T) = prod_{d | n} p_d^{K_d}`, in factored form.
    pub fn fixed_count(&self, n: usize) -> Result<FactoredNatural> {
        self.check_index(n)?;
        self.fixed_count_truncated(n, self.horizon())
    }

    /// `F_n` of the truncated product over components `d <= limit`. Any
    /// `n >= 1` is allowed since larger components never contribute.
    pub fn fixed_count_truncated(&self, n: usize, limit: usize) -> Result<FactoredNatural> {
        if n == 0 || limit > self.horizon() {
            return Err(Error::Invalid(format!(
                "need n >= 1 and limit <= {}, got n = {n}, limit = {limit}",
                self.horizon()
            )));
        }
        let mut out = FactoredNatural::one();
        for d in divisors(n as u64).into_iter().map(|d| d as usize) {
            if d > limit {
                break;
            }
            let c = self.component(d);
            out.mul_prime_power(&c.p, c.k);
        }
        Ok(out)
    }

    /// Exact `F_1, ..., F_{n_max}` as integers.
    pub fn fixed_sequence(&self, n_max: usize) -> Result<CountSequence> {
        self.check_index(n_max)?;
        let values = (1..=n_max)
            .map(|n| self.fixed_count(n).map(|f| BigInt::from(f.value())))
            .collect::<Result<Vec<_>>>()?;
        Ok(CountSequence::fixed(values))
    }

    /// Exact `L_n = sum_{d | n} mu(n/d) F_d`.
    pub fn least_count_exact(&self, n: usize) -> Result<BigUint> {
        self.check_index(n)?;
        let seq = self.fixed_sequence(n)?;
        let least = least_from_fixed(&seq)?;
        Ok(least
            .get(n)
            .to_biguint()
            .expect("least-period counts of a plan are nonnegative"))
    }

    /// The closed form `p_n^{K_n} - 1`, which is `0` when `K_n = 0`.
    pub fn least_count_claimed(&self, n: usize) -> Result<BigUint> {
        self.check_index(n)?;
        Ok(self.component(n).order() - 1u32)
    }

    /// Whether `prod_{d | n, d < n} p_d^{K_d} = 1`.
    pub fn proper_divisors_trivial(&self, n: usize) -> bool {
        divisors(n as u64)
            .into_iter()
            .filter(|&d| (d as usize) < n)
            .all(|d| self.component(d as usize).k == 0)
    }

    /// Compares the closed form with the exact least-period count for
    /// `n = 1..=n_max`.
    pub fn claimed_vs_exact_report(&self, n_max: usize) -> Result<ClaimedReport> {
        self.check_index(n_max)?;
        let fixed = self.fixed_sequence(n_max)?;
        let least = least_from_fixed(&fixed)?;
        let mut rows = Vec::with_capacity(n_max);
        for n in 1..=n_max {
            let exact = least.get(n).clone();
            let claimed = BigInt::from(self.least_count_claimed(n)?);
            rows.push(ClaimedRow {
                n,
                difference: &exact - &claimed,
                differ: exact != claimed,
                proper_divisors_trivial: self.proper_divisors_trivial(n),
                claimed,
                exact,
            });
        }
        Ok(ClaimedReport { rows })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClaimedRow {
    pub n: usize,
    #[serde(serialize_with = "ser_display")]
    pub claimed: BigInt,
    #[serde(serialize_with = "ser_display")]
    pub exact: BigInt,
    #[serde(serialize_with = "ser_display")]
    pub difference: BigInt,
    pub differ: bool,
    /// `prod_{d | n, d < n} p_d^{K_d} = 1`.
    pub proper_divisors_trivial: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClaimedReport {
    pub rows: Vec<ClaimedRow>,
}

impl ClaimedReport {
    /// `exact >= claimed` at every `n`.
    pub fn lower_bound_holds(&self) -> bool {
        self.rows.iter().all(|r| r.exact >= r.claimed)
    }

    /// Indices `n >= 2` where equality and the proper-divisor predicate
    /// disagree.
    pub fn characterization_failures(&self) -> Vec<usize> {
        self.rows
            .iter()
            .filter(|r| r.n >= 2 && r.differ == r.proper_divisors_trivial)
            .map(|r| r.n)
            .collect()
    }

    pub fn discrepancies(&self) -> usize {
        self.rows.iter().filter(|r| r.differ).count()
    }

    pub fn row(&self, n: usize) -> &ClaimedRow {
        &self.rows[n - 1]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::{build_plan, GrowthTarget, Strategy};
    use num_rational::BigRational;
    use num_traits::{ToPrimitive, Zero};

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    fn log2_plan() -> ConstructionPlan {
        // Smallest four-digit decimal above ln 2; reproduces the K_1 = 1 plan.
        build_plan(GrowthTarget::Finite(q(6932, 10000)), Strategy::Paper, 6).unwrap()
    }

    #[test]
    fn factored_display_and_value() {
        let plan = log2_plan();
        let f6 = plan.fixed_count(6).unwrap();
        assert_eq!(f6.to_string(), "2^1*3^1*7^3");
        assert_eq!(f6.value(), BigUint::from(2058u32));
        assert_eq!(plan.fixed_count(5).unwrap().value(), BigUint::from(22u32));
        assert!((f6.ln(64).mid_f64() - 2058f64.ln()).abs() < 1e-12);
        assert_eq!(FactoredNatural::one().to_string(), "1");
    }

    #[test]
    fn exact_and_claimed_least_counts() {
        let plan = log2_plan();
        assert_eq!(plan.least_count_exact(2).unwrap(), BigUint::from(4u32));
        assert_eq!(plan.least_count_exact(6).unwrap(), BigUint::from(2040u32));
        assert_eq!(plan.least_count_claimed(6).unwrap(), BigUint::from(48u32));
        assert_eq!(plan.least_count_claimed(2).unwrap(), BigUint::from(2u32));
        let f: Vec<u64> = plan
            .fixed_sequence(6)
            .unwrap()
            .values()
            .iter()
            .map(|v| v.to_u64().unwrap())
            .collect();
        assert_eq!(f, vec![2, 6, 14, 30, 22, 2058]);
    }

    #[test]
    fn literal_6931_plan_counts() {
        let plan = build_plan(GrowthTarget::Finite(q(6931, 10000)), Strategy::Paper, 6).unwrap();
        assert_eq!(plan.fixed_count(6).unwrap().to_string(), "3^1*7^3");
        assert_eq!(plan.least_count_exact(6).unwrap(), BigUint::from(1020u32));
        assert_eq!(plan.least_count_claimed(6).unwrap(), BigUint::from(48u32));
    }

    #[test]
    fn zero_plan_counts() {
        let plan = build_plan(GrowthTarget::Zero, Strategy::Paper, 5).unwrap();
        for n in 1..=5 {
            assert!(plan.fixed_count(n).unwrap().is_one());
            let l = plan.least_count_exact(n).unwrap();
            assert_eq!(l, BigUint::from(u32::from(n == 1)));
            assert!(plan.least_count_claimed(n).unwrap().is_zero());
        }
    }

    #[test]
    fn claimed_report_half() {
        let plan = build_plan(GrowthTarget::Finite(q(1, 2)), Strategy::Paper, 4).unwrap();
        let ks: Vec<u64> = plan.components.iter().map(|c| c.k).collect();
        assert_eq!(ks, vec![0, 0, 0, 1]);
        let rep = plan.claimed_vs_exact_report(4).unwrap();
        let r4 = rep.row(4);
        assert_eq!(r4.claimed, BigInt::from(4));
        assert_eq!(r4.exact, BigInt::from(4));
        assert!(!r4.differ);
        assert!(rep.lower_bound_holds());
        assert!(rep.characterization_failures().is_empty());
    }

    #[test]
    fn claimed_report_log2() {
        let rep = log2_plan().claimed_vs_exact_report(6).unwrap();
        let r6 = rep.row(6);
        assert_eq!((r6.claimed.clone(), r6.exact.clone()), (48.into(), 2040.into()));
        assert!(r6.differ && !r6.proper_divisors_trivial);
        assert!(rep.lower_bound_holds());
        assert!(rep.characterization_failures().is_empty());
        // n = 1 always differs by the fixed zero point.
        assert_eq!(rep.row(1).difference, BigInt::from(1));
    }

    #[test]
    fn zero_plan_report() {
        let plan = build_plan(GrowthTarget::Zero, Strategy::Paper, 4).unwrap();
        let rep = plan.claimed_vs_exact_report(4).unwrap();
        assert_eq!(rep.row(1).exact, BigInt::from(1));
        assert_eq!(rep.row(1).claimed, BigInt::zero());
        for n in 2..=4 {
            assert!(rep.row(n).exact.is_zero() && rep.row(n).claimed.is_zero());
        }
    }

    #[test]
    fn out_of_horizon() {
        let plan = log2_plan();
        assert!(plan.fixed_count(7).is_err());
        assert!(plan.least_count_exact(0).is_err());
        assert!(plan.fixed_sequence(7).is_err());
    }

    #[test]
    fn merges_equal_primes() {
        let mut f = FactoredNatural::one();
        f.mul_prime_power(&BigUint::from(7u32), 1);
        f.mul_prime_power(&BigUint::from(2u32), 1);
        f.mul_prime_power(&BigUint::from(7u32), 2);
        f.mul_prime_power(&BigUint::from(5u32), 0);
        assert_eq!(f.to_string(), "2^1*7^3");
    }
}
