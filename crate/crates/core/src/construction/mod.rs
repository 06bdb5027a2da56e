//! The product automorphism with prescribed growth of `F_n`, its exact
//! period counts, and the checks around them.

mod counts;
mod oracle;
mod plan;
mod report;
mod target;

pub use counts::{ClaimedReport, ClaimedRow, FactoredNatural};
pub use oracle::{enumerate_oracle, OracleResult, DEFAULT_ENUMERATION_BUDGET};
pub use plan::{build_plan, build_plan_with, ComponentSpec, ConstructionPlan, PlanConfig};
pub use report::{
    active_proper_divisors, compensated_envelope, infinite_certificate, log_fixed_counts,
    rate_table, subexponential_witness, EnvelopeReport, EnvelopeRow, InfiniteRow, RateRow,
    RateTable, SubexponentialRow,
};
pub use target::{parse_rational, GrowthTarget, Strategy};
