//! Finite-horizon certificates for the growth behaviour of a plan.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::One;

use super::plan::{compensated_budget, ConstructionPlan};
use super::target::{GrowthTarget, Strategy};
use crate::error::{Error, Result};
use crate::interval::{Interval, MAX_PREC};
use crate::numtheory::{divisors, sigma};

/// `log p_n` enclosures for every component with `K_n > 0`.
fn component_logs(plan: &ConstructionPlan, prec: u32) -> Vec<Option<Interval>> {
    plan.components
        .iter()
        .map(|c| (c.k > 0).then(|| Interval::ln_natural(&c.p, prec)))
        .collect()
}

/// Enclosures of `log F_1, ..., log F_N`, accumulated from the factored form.
pub fn log_fixed_counts(plan: &ConstructionPlan, prec: u32) -> Vec<Interval> {
    let n_max = plan.horizon();
    let logs = component_logs(plan, prec);
    let mut out = vec![Interval::zero(prec); n_max];
    for d in 1..=n_max {
        if let Some(lp) = &logs[d - 1] {
            let term = lp.mul_int(&BigInt::from(plan.component(d).k));
            for m in (d..=n_max).step_by(d) {
                out[m - 1] = out[m - 1].add(&term);
            }
        }
    }
    out
}

fn finite_rate(plan: &ConstructionPlan) -> Result<&BigRational> {
    plan.target
        .rate()
        .ok_or_else(|| Error::Invalid(format!("needs a finite target, got {}", plan.target.kind())))
}

#[derive(Clone, Debug)]
pub struct EnvelopeRow {
    pub n: usize,
    /// `n C - sum_{d | n, d < n} K_d log p_d`.
    pub budget: Interval,
    /// `D_n = n C - log F_n`.
    pub deficit: Interval,
    pub log_p: Interval,
    /// `0 <= D_n < log p_n`, certified. Only meaningful for nonnegative budgets.
    pub certified: bool,
}

#[derive(Clone, Debug)]
pub struct EnvelopeReport {
    pub rows: Vec<EnvelopeRow>,
    /// Indices whose running budget is negative.
    pub negative_budget: Vec<usize>,
    /// Indices with a nonnegative budget where the bound could not be
    /// certified.
    pub unverified: Vec<usize>,
    pub precision_bits: u32,
}

impl EnvelopeReport {
    pub fn holds(&self) -> bool {
        self.unverified.is_empty()
    }

    /// Largest `|(1/n) log F_n - C|` upper bound over the certified rows.
    pub fn max_rate_error(&self) -> f64 {
        self.rows
            .iter()
            .filter(|r| r.certified)
            .map(|r| r.deficit.abs().hi_f64() / r.n as f64)
            .fold(0.0, f64::max)
    }
}

/// Checks `0 <= n C - log F_n < log p_n` at every `n` whose running budget
/// is nonnegative. Uncertain rows are retried at doubled precision.
pub fn compensated_envelope(plan: &ConstructionPlan, precision_bits: u32) -> Result<EnvelopeReport> {
    let c = finite_rate(plan)?;
    let n_max = plan.horizon();
    let ks: Vec<u64> = plan.components.iter().map(|c| c.k).collect();
    let mut logs: Vec<Option<Interval>> = vec![None; n_max];
    let mut log_p = |d: usize, prec: u32| -> Interval {
        match &logs[d - 1] {
            Some(iv) if iv.prec() >= prec => iv.with_prec(prec),
            _ => {
                let iv = Interval::ln_natural(&plan.component(d).p, prec);
                logs[d - 1] = Some(iv.clone());
                iv
            }
        }
    };

    let mut rows = Vec::with_capacity(n_max);
    let mut negative_budget = Vec::new();
    let mut unverified = Vec::new();
    for n in 1..=n_max {
        let k = BigInt::from(ks[n - 1]);
        let mut prec = precision_bits;
        loop {
            let budget = compensated_budget(c, n, &ks, &mut log_p, prec);
            let lp = log_p(n, prec);
            let deficit = budget.sub(&lp.mul_int(&k));
            let certified = budget.is_nonnegative() && deficit.is_nonnegative() && deficit.certainly_lt(&lp);
            let negative = budget.is_negative();
            if certified || negative || prec >= MAX_PREC {
                if negative {
                    negative_budget.push(n);
                } else if !certified {
                    unverified.push(n);
                }
                rows.push(EnvelopeRow {
                    n,
                    budget,
                    deficit,
                    log_p: lp,
                    certified,
                });
                break;
            }
            prec *= 2;
        }
    }
    Ok(EnvelopeReport {
        rows,
        negative_budget,
        unverified,
        precision_bits,
    })
}

#[derive(Clone, Debug)]
pub struct RateRow {
    pub n: usize,
    /// `(1/n) log F_n`.
    pub rate: Interval,
    /// `C sigma(n) / n`, the rate if every divisor used its full budget.
    pub sigma_rate: Option<BigRational>,
}

#[derive(Clone, Debug)]
pub struct RateTable {
    pub rows: Vec<RateRow>,
    /// Index of the largest rate (by upper endpoint).
    pub argmax: usize,
}

impl RateTable {
    pub fn max_rate(&self) -> &Interval {
        &self.rows[self.argmax - 1].rate
    }
}

/// `(1/n) log F_n` for `n = 1..=N`, next to `C sigma(n)/n` for finite targets.
pub fn rate_table(plan: &ConstructionPlan, precision_bits: u32) -> Result<RateTable> {
    if plan.horizon() == 0 {
        return Err(Error::Invalid("empty plan".into()));
    }
    let logs = log_fixed_counts(plan, precision_bits);
    let c = plan.target.rate();
    let rows: Vec<RateRow> = logs
        .into_iter()
        .enumerate()
        .map(|(i, lf)| {
            let n = i + 1;
            RateRow {
                n,
                rate: lf.div_int(n as u64),
                sigma_rate: c.map(|c| c * BigRational::new(sigma(n as u64).into(), n.into())),
            }
        })
        .collect();
    let argmax = rows
        .iter()
        .max_by(|a, b| a.rate.hi().cmp(&b.rate.hi()))
        .map(|r| r.n)
        .unwrap();
    Ok(RateTable { rows, argmax })
}

#[derive(Clone, Debug)]
pub struct InfiniteRow {
    pub n: usize,
    /// `p_n > n^n`, exactly.
    pub prime_above_floor: bool,
    /// `(1/n) log p_n - log n`, certified nonnegative when `holds`.
    pub log_margin: Interval,
    pub fixed_count: BigUint,
    pub holds: bool,
}

/// Checks `p_n > n^n`, `(1/n) log p_n >= log n` and `1 <= F_n < infinity`.
pub fn infinite_certificate(plan: &ConstructionPlan, precision_bits: u32) -> Result<Vec<InfiniteRow>> {
    if plan.strategy != Strategy::Infinite || plan.target != GrowthTarget::Infinite {
        return Err(Error::StrategyMismatch {
            strategy: plan.strategy.name(),
            target: plan.target.kind(),
        });
    }
    (1..=plan.horizon())
        .map(|n| {
            let c = plan.component(n);
            let floor = BigUint::from(n).pow(n as u32);
            let prime_above_floor = c.p > floor;
            let log_margin = Interval::ln_natural(&c.p, precision_bits)
                .div_int(n as u64)
                .sub(&Interval::ln_natural(&BigUint::from(n), precision_bits));
            let fixed_count = plan.fixed_count(n)?.value();
            let holds = prime_above_floor && log_margin.is_nonnegative() && fixed_count >= BigUint::one();
            Ok(InfiniteRow {
                n,
                prime_above_floor,
                log_margin,
                fixed_count,
                holds,
            })
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct SubexponentialRow {
    pub n: usize,
    pub k: u64,
    /// `F_n >= p_n^{K_n} >= (n + 1)^{K_n}`, checked on exact integers.
    pub holds: bool,
}

/// Witness for super-polynomial growth: `log F_n >= K_n log(n + 1)`.
pub fn subexponential_witness(plan: &ConstructionPlan) -> Result<Vec<SubexponentialRow>> {
    if !matches!(plan.strategy, Strategy::Subexponential(_)) {
        return Err(Error::Invalid(format!(
            "expected a subexponential plan, got {}",
            plan.strategy
        )));
    }
    (1..=plan.horizon())
        .map(|n| {
            let c = plan.component(n);
            let f = plan.fixed_count(n)?.value();
            let pk = c.order();
            let base = BigUint::from(n + 1).pow(c.k as u32);
            Ok(SubexponentialRow {
                n,
                k: c.k,
                holds: f >= pk && pk >= base,
            })
        })
        .collect()
}

/// Proper divisors of `n` whose component is nontrivial.
pub fn active_proper_divisors(plan: &ConstructionPlan, n: usize) -> Vec<usize> {
    divisors(n as u64)
        .into_iter()
        .map(|d| d as usize)
        .filter(|&d| d < n && plan.component(d).k > 0)
        .collect()
}
