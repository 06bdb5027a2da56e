//! Brute-force orbit enumeration on a truncated product group.
//!
//! The group `X_M = prod_{i <= M} (F_{p_i})^{K_i}` is materialized point by
//! point, `T` is applied coordinate-wise until the point returns, and the
//! resulting least periods are tallied. Nothing here uses the closed forms
//! for `F_n` or `L_n`, so the tallies serve as an independent check on them.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::plan::ConstructionPlan;
use crate::error::{Error, Result};
use crate::orbits::CountSequence;

/// Default cap on `|X_M|`.
pub const DEFAULT_ENUMERATION_BUDGET: u64 = 10_000_000;

#[derive(Clone, Debug)]
pub struct OracleResult {
    /// `F_n` counted as `#{x : period(x) | n}`.
    pub fixed: CountSequence,
    /// `L_n` counted as `#{x : period(x) = n}`.
    pub least: CountSequence,
    pub group_order: u64,
    /// Number of points with each least period.
    pub period_histogram: BTreeMap<u64, u64>,
    /// Whether every simulated period equals `lcm{i : block i nonzero}`.
    pub lcm_rule_holds: bool,
}

struct Block {
    index: u64,
    p: u64,
    multiplier: u64,
    width: usize,
}

/// Enumerates `X_M` for `M = component_limit` and tallies `F_n`, `L_n` for
/// `n <= n_max`.
pub fn enumerate_oracle(
    plan: &ConstructionPlan,
    component_limit: usize,
    n_max: usize,
    budget: u64,
) -> Result<OracleResult> {
    if component_limit > plan.horizon() {
        return Err(Error::Invalid(format!(
            "component limit {component_limit} exceeds plan horizon {}",
            plan.horizon()
        )));
    }
    let components = &plan.components[..component_limit];
    let order: BigUint = components.iter().map(|c| c.order()).product();
    let group_order = order
        .to_u64()
        .filter(|&o| o <= budget)
        .ok_or_else(|| Error::EnumerationBudget {
            size: order.clone(),
            budget,
        })?;

    let blocks: Vec<Block> = components
        .iter()
        .filter(|c| c.k > 0)
        .map(|c| Block {
            index: c.n,
            // Enumeration budget keeps p below 10^7.
            p: c.p.to_u64().expect("p fits u64 within budget"),
            multiplier: c.multiplier.to_u64().expect("multiplier fits u64"),
            width: c.k as usize,
        })
        .collect();
    // Coordinate layout: block b owns coords[offset_b .. offset_b + width_b].
    let mut owner = Vec::new();
    for (b, block) in blocks.iter().enumerate() {
        owner.extend(std::iter::repeat_n(b, block.width));
    }
    let dim = owner.len();
    let moduli: Vec<u64> = owner.iter().map(|&b| blocks[b].p).collect();
    let mults: Vec<u64> = owner.iter().map(|&b| blocks[b].multiplier).collect();

    let max_period: u64 = blocks.iter().fold(1, |acc, b| acc.lcm(&b.index));
    let mut histogram: BTreeMap<u64, u64> = BTreeMap::new();
    let mut lcm_rule_holds = true;
    let mut point = vec![0u64; dim];
    let mut image = vec![0u64; dim];
    for _ in 0..group_order {
        // Least period by iterating T until the point comes back.
        image.copy_from_slice(&point);
        let mut period = 0u64;
        loop {
            for i in 0..dim {
                image[i] = image[i] * mults[i] % moduli[i];
            }
            period += 1;
            if image == point {
                break;
            }
            if period > max_period {
                return Err(Error::Invalid(format!(
                    "point did not return within {max_period} steps"
                )));
            }
        }
        *histogram.entry(period).or_insert(0) += 1;

        let rule = point
            .iter()
            .zip(&owner)
            .filter(|(x, _)| **x != 0)
            .fold(1u64, |acc, (_, &b)| acc.lcm(&blocks[b].index));
        lcm_rule_holds &= rule == period;

        // Next point in mixed radix.
        for i in 0..dim {
            point[i] += 1;
            if point[i] < moduli[i] {
                break;
            }
            point[i] = 0;
        }
    }

    let mut fixed = vec![BigInt::from(0); n_max];
    let mut least = vec![BigInt::from(0); n_max];
    for (&period, &count) in &histogram {
        let p = period as usize;
        if p <= n_max {
            least[p - 1] += count;
            for m in (p..=n_max).step_by(p) {
                fixed[m - 1] += count;
            }
        }
    }
    Ok(OracleResult {
        fixed: CountSequence::fixed(fixed),
        least: CountSequence::least(least),
        group_order,
        period_histogram: histogram,
        lcm_rule_holds,
    })
}
