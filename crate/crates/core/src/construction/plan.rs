use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::target::{parse_rational, GrowthTarget, Strategy};
use crate::error::{Error, Result};
use crate::interval::{decide_floor, Interval};
use crate::numtheory::{
    divisors, element_of_order, is_prime, least_prime_congruent_one_with, primitive_root_with,
    FactorConfig, ScanConfig,
};

/// One factor `T_n` of the product automorphism: multiplication by an
/// element of order `n` on `(F_p)^K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentSpec {
    pub n: u64,
    pub p: BigUint,
    pub g: BigUint,
    pub k: u64,
    pub multiplier: BigUint,
}

impl ComponentSpec {
    /// `p^K`, the order of the component group.
    pub fn order(&self) -> BigUint {
        self.p.pow(self.k as u32)
    }

    pub fn is_trivial(&self) -> bool {
        self.k == 0
    }
}

/// The automorphism `T = prod_n T_n` of `X = prod_n (F_{p_n})^{K_n}`,
/// truncated to components `n = 1..=N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructionPlan {
    pub target: GrowthTarget,
    pub strategy: Strategy,
    pub components: Vec<ComponentSpec>,
}

/// Search budgets used while building a plan.
#[derive(Clone, Debug, Default)]
pub struct PlanConfig {
    pub scan: ScanConfig,
    pub factor: FactorConfig,
}

impl ConstructionPlan {
    /// The horizon `N`.
    pub fn horizon(&self) -> usize {
        self.components.len()
    }

    /// Component `n`, for `1 <= n <= N`.
    pub fn component(&self, n: usize) -> &ComponentSpec {
        &self.components[n - 1]
    }

    /// Checks the structural invariants of every component.
    pub fn validate(&self) -> Result<()> {
        for (i, c) in self.components.iter().enumerate() {
            let bad = |why: &str| Err(Error::Invalid(format!("component n = {}: {why}", c.n)));
            if c.n != i as u64 + 1 {
                return bad("components must be listed for n = 1, 2, ... without gaps");
            }
            if !is_prime(&c.p) {
                return bad("p is not prime");
            }
            if !(&c.p - 1u32).is_multiple_of(&BigUint::from(c.n)) {
                return bad("n does not divide p - 1");
            }
            if c.g.is_zero() || c.g >= c.p {
                return bad("g out of range");
            }
            if element_of_order(&c.p, &c.g, c.n)? != c.multiplier {
                return bad("multiplier is not g^((p-1)/n)");
            }
        }
        if let GrowthTarget::Zero = self.target {
            if self.components.iter().any(|c| c.k != 0) {
                return Err(Error::Invalid("zero target requires every K = 0".into()));
            }
        }
        Ok(())
    }
}

/// Interval enclosures of `log p_n`, recomputed per precision on demand.
struct LogTable<'a> {
    primes: &'a [BigUint],
    cache: Vec<Option<Interval>>,
}

impl<'a> LogTable<'a> {
    fn new(primes: &'a [BigUint]) -> Self {
        LogTable {
            primes,
            cache: vec![None; primes.len()],
        }
    }

    fn get(&mut self, n: usize, prec: u32) -> Interval {
        match &self.cache[n - 1] {
            Some(iv) if iv.prec() >= prec => iv.with_prec(prec),
            _ => {
                let iv = Interval::ln_natural(&self.primes[n - 1], prec);
                self.cache[n - 1] = Some(iv.clone());
                iv
            }
        }
    }
}

fn check_compatible(target: &GrowthTarget, strategy: &Strategy) -> Result<()> {
    let ok = match (target, strategy) {
        (GrowthTarget::Zero, _) => true,
        (GrowthTarget::Finite(_), Strategy::Infinite) => false,
        (GrowthTarget::Finite(_), _) => true,
        (GrowthTarget::Infinite, Strategy::Infinite) => true,
        (GrowthTarget::Infinite, _) => false,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::StrategyMismatch {
            strategy: strategy.name(),
            target: target.kind(),
        })
    }
}

/// `floor(n^gamma)` for rational `gamma = a/b`, exactly.
fn floor_power(n: u64, gamma: &BigRational) -> u64 {
    let a = gamma.numer().to_u32().expect("gamma numerator fits u32");
    let b = gamma.denom().to_u32().expect("gamma denominator fits u32");
    BigUint::from(n).pow(a).nth_root(b).to_u64().expect("floor(n^gamma) fits u64")
}

/// [`build_plan_with`] with default search budgets.
pub fn build_plan(target: GrowthTarget, strategy: Strategy, horizon: usize) -> Result<ConstructionPlan> {
    build_plan_with(target, strategy, horizon, &PlanConfig::default())
}

/// Builds components `n = 1..=horizon`.
///
/// `p_n` is the least prime `= 1 mod n` (above `n^n` for the infinite
/// strategy), `g_n` the smallest primitive root, and `K_n` follows the
/// strategy. Floors of `n C / log p` are irrational quantities and are
/// decided by escalating interval precision.
pub fn build_plan_with(
    target: GrowthTarget,
    strategy: Strategy,
    horizon: usize,
    cfg: &PlanConfig,
) -> Result<ConstructionPlan> {
    check_compatible(&target, &strategy)?;
    let mut primes = Vec::with_capacity(horizon);
    let mut roots = Vec::with_capacity(horizon);
    for n in 1..=horizon as u64 {
        let floor = match strategy {
            Strategy::Infinite => BigUint::from(n).pow(n as u32),
            _ => BigUint::zero(),
        };
        let p = least_prime_congruent_one_with(n, &floor, &cfg.scan)?.p;
        let cert = primitive_root_with(&p, &cfg.factor)?;
        primes.push(p);
        roots.push(cert.g);
    }

    let ks = match (&target, &strategy) {
        (GrowthTarget::Zero, _) => vec![0; horizon],
        (GrowthTarget::Finite(c), Strategy::Paper) => paper_exponents(c, &primes)?,
        (GrowthTarget::Finite(c), Strategy::Compensated) => compensated_exponents(c, &primes)?,
        (_, Strategy::Subexponential(gamma)) => {
            (1..=horizon as u64).map(|n| floor_power(n, gamma)).collect()
        }
        (_, Strategy::Infinite) => vec![1; horizon],
        _ => unreachable!("compatibility checked above"),
    };

    let mut components = Vec::with_capacity(horizon);
    for (i, ((p, g), k)) in primes.into_iter().zip(roots).zip(ks).enumerate() {
        let n = i as u64 + 1;
        let multiplier = element_of_order(&p, &g, n)?;
        components.push(ComponentSpec {
            n,
            p,
            g,
            k,
            multiplier,
        });
    }
    Ok(ConstructionPlan {
        target,
        strategy,
        components,
    })
}

fn floor_to_u64(f: BigInt) -> u64 {
    f.to_u64().unwrap_or(0)
}

fn paper_exponents(c: &BigRational, primes: &[BigUint]) -> Result<Vec<u64>> {
    let mut logs = LogTable::new(primes);
    (1..=primes.len())
        .map(|n| {
            let nc = c * BigRational::from_integer(n.into());
            let f = decide_floor(|prec| {
                Interval::from_rational(&nc, prec).div(&logs.get(n, prec))
            })?;
            Ok(floor_to_u64(f))
        })
        .collect()
}

/// Running budget `n C - sum_{d | n, d < n} K_d log p_d` as an interval.
pub(crate) fn compensated_budget(
    c: &BigRational,
    n: usize,
    ks: &[u64],
    log_p: &mut dyn FnMut(usize, u32) -> Interval,
    prec: u32,
) -> Interval {
    let nc = Interval::from_rational(&(c * BigRational::from_integer(n.into())), prec);
    divisors(n as u64)
        .into_iter()
        .map(|d| d as usize)
        .filter(|&d| d < n && ks[d - 1] > 0)
        .fold(nc, |acc, d| acc.sub(&log_p(d, prec).mul_int(&BigInt::from(ks[d - 1]))))
}

fn compensated_exponents(c: &BigRational, primes: &[BigUint]) -> Result<Vec<u64>> {
    let mut logs = LogTable::new(primes);
    let mut ks: Vec<u64> = Vec::with_capacity(primes.len());
    for n in 1..=primes.len() {
        let f = decide_floor(|prec| {
            let budget = compensated_budget(c, n, &ks, &mut |d, p| logs.get(d, p), prec);
            budget.div(&logs.get(n, prec))
        })?;
        // Negative budgets give a negative floor, clamped to K = 0.
        ks.push(floor_to_u64(f.max(BigInt::zero())));
    }
    Ok(ks)
}

#[derive(Serialize, Deserialize)]
struct TargetFile {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    value: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct ComponentFile {
    n: String,
    p: String,
    g: String,
    #[serde(rename = "K")]
    k: String,
    multiplier: String,
}

#[derive(Serialize, Deserialize)]
struct PlanFile {
    target: TargetFile,
    strategy: String,
    #[serde(rename = "N")]
    horizon: String,
    components: Vec<ComponentFile>,
}

impl ConstructionPlan {
    /// Serializes to the plan JSON format; every integer is a decimal string.
    pub fn to_json(&self) -> String {
        let file = PlanFile {
            target: TargetFile {
                kind: self.target.kind().to_string(),
                value: self.target.rate().map(|c| c.to_string()),
            },
            strategy: self.strategy.to_string(),
            horizon: self.horizon().to_string(),
            components: self
                .components
                .iter()
                .map(|c| ComponentFile {
                    n: c.n.to_string(),
                    p: c.p.to_string(),
                    g: c.g.to_string(),
                    k: c.k.to_string(),
                    multiplier: c.multiplier.to_string(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("plan serializes")
    }

    /// Parses and validates a plan JSON document.
    pub fn from_json(text: &str) -> Result<ConstructionPlan> {
        let file: PlanFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("plan JSON: {e}")))?;
        let target = match (file.target.kind.as_str(), file.target.value) {
            ("zero", _) => GrowthTarget::Zero,
            ("infinite", _) => GrowthTarget::Infinite,
            ("finite", Some(v)) => GrowthTarget::finite(parse_rational(&v)?)?,
            (kind, _) => return Err(Error::Parse(format!("bad target kind `{kind}`"))),
        };
        let strategy: Strategy = file.strategy.parse()?;
        let int = |s: &str, what: &str| -> Result<BigUint> {
            s.trim()
                .parse()
                .map_err(|_| Error::Parse(format!("{what} is not a decimal integer: `{s}`")))
        };
        let small = |s: &str, what: &str| -> Result<u64> {
            int(s, what)?
                .to_u64()
                .ok_or_else(|| Error::Parse(format!("{what} out of range: `{s}`")))
        };
        let components = file
            .components
            .iter()
            .map(|c| {
                Ok(ComponentSpec {
                    n: small(&c.n, "n")?,
                    p: int(&c.p, "p")?,
                    g: int(&c.g, "g")?,
                    k: small(&c.k, "K")?,
                    multiplier: int(&c.multiplier, "multiplier")?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let horizon = small(&file.horizon, "N")?;
        if horizon != components.len() as u64 {
            return Err(Error::Parse(format!(
                "N = {horizon} but {} components listed",
                components.len()
            )));
        }
        check_compatible(&target, &strategy)?;
        let plan = ConstructionPlan {
            target,
            strategy,
            components,
        };
        plan.validate()?;
        Ok(plan)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    fn pk(plan: &ConstructionPlan) -> Vec<(u64, u64)> {
        plan.components
            .iter()
            .map(|c| (c.p.to_u64().unwrap(), c.k))
            .collect()
    }

    /// Floor of `n c / ln p` in plain floating point, for values far from
    /// an integer.
    fn float_floor(n: u64, c: f64, p: u64) -> u64 {
        (n as f64 * c / (p as f64).ln()).floor() as u64
    }

    #[test]
    fn paper_strategy_for_6931_over_10000() {
        let plan = build_plan(GrowthTarget::Finite(q(6931, 10000)), Strategy::Paper, 6).unwrap();
        // 6931/10000 sits just below ln 2, so K_1 = floor(0.99993...) = 0.
        assert_eq!(pk(&plan), vec![(2, 0), (3, 1), (7, 1), (5, 1), (11, 1), (7, 2)]);
        for c in &plan.components {
            if c.n > 1 {
                assert_eq!(c.k, float_floor(c.n, 6931.0 / 10000.0, c.p.to_u64().unwrap()));
            }
        }
        plan.validate().unwrap();
    }

    #[test]
    fn paper_strategy_just_above_ln2() {
        let plan = build_plan(GrowthTarget::Finite(q(6932, 10000)), Strategy::Paper, 6).unwrap();
        assert_eq!(pk(&plan), vec![(2, 1), (3, 1), (7, 1), (5, 1), (11, 1), (7, 2)]);
        let g: Vec<u64> = plan.components.iter().map(|c| c.g.to_u64().unwrap()).collect();
        assert_eq!(g, vec![1, 2, 3, 2, 2, 3]);
        let m: Vec<u64> = plan.components.iter().map(|c| c.multiplier.to_u64().unwrap()).collect();
        // multiplier = g^((p-1)/n) mod p
        assert_eq!(m, vec![1, 2, 2, 2, 4, 3]);
    }

    #[test]
    fn compensated_strategy() {
        let plan =
            build_plan(GrowthTarget::Finite(q(6932, 10000)), Strategy::Compensated, 6).unwrap();
        let ks: Vec<u64> = plan.components.iter().map(|c| c.k).collect();
        assert_eq!(ks, vec![1, 0, 0, 1, 1, 1]);
        let plan =
            build_plan(GrowthTarget::Finite(q(6931, 10000)), Strategy::Compensated, 6).unwrap();
        let ks: Vec<u64> = plan.components.iter().map(|c| c.k).collect();
        assert_eq!(ks, vec![0, 1, 1, 1, 1, 0]);
    }

    #[test]
    fn zero_target_is_trivial() {
        for s in [Strategy::Paper, Strategy::Compensated, Strategy::Infinite] {
            let plan = build_plan(GrowthTarget::Zero, s, 5).unwrap();
            assert!(plan.components.iter().all(|c| c.k == 0));
        }
    }

    #[test]
    fn infinite_strategy_primes() {
        let plan = build_plan(GrowthTarget::Infinite, Strategy::Infinite, 3).unwrap();
        assert_eq!(pk(&plan), vec![(2, 1), (5, 1), (31, 1)]);
    }

    #[test]
    fn subexponential_exponents() {
        let plan = build_plan(
            GrowthTarget::Finite(q(1, 1)),
            Strategy::Subexponential(q(1, 2)),
            10,
        )
        .unwrap();
        let ks: Vec<u64> = plan.components.iter().map(|c| c.k).collect();
        assert_eq!(ks, vec![1, 1, 1, 2, 2, 2, 2, 2, 3, 3]);
        assert_eq!(floor_power(27, &q(2, 3)), 9);
        assert_eq!(floor_power(26, &q(2, 3)), 8);
    }

    #[test]
    fn mismatched_strategies_are_rejected() {
        let e = build_plan(GrowthTarget::Infinite, Strategy::Paper, 3).unwrap_err();
        assert!(matches!(e, Error::StrategyMismatch { .. }));
        let e = build_plan(GrowthTarget::Finite(q(1, 1)), Strategy::Infinite, 3).unwrap_err();
        assert!(matches!(e, Error::StrategyMismatch { .. }));
    }

    #[test]
    fn paper_exponents_match_float_away_from_integers() {
        let c = q(3, 2);
        let plan = build_plan(GrowthTarget::Finite(c), Strategy::Paper, 200).unwrap();
        for comp in &plan.components {
            let x = comp.n as f64 * 1.5 / comp.p.to_f64().unwrap().ln();
            if (x - x.round()).abs() > 1e-9 {
                assert_eq!(comp.k, x.floor() as u64, "n={}", comp.n);
            }
        }
    }

    #[test]
    fn json_round_trip_and_validation() {
        let plan = build_plan(GrowthTarget::Finite(q(6931, 10000)), Strategy::Paper, 6).unwrap();
        let text = plan.to_json();
        assert!(text.contains("\"K\": \"2\""));
        assert!(text.contains("\"N\": \"6\""));
        assert_eq!(ConstructionPlan::from_json(&text).unwrap(), plan);

        let broken = text.replacen("\"multiplier\": \"2\"", "\"multiplier\": \"5\"", 1);
        assert!(ConstructionPlan::from_json(&broken).is_err());
        assert!(ConstructionPlan::from_json("{}").is_err());
    }
}
