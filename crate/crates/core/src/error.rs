use num_bigint::BigUint;
use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// The progression scan hit its candidate ceiling without finding a prime.
    #[error("no prime = 1 mod {modulus} above {floor} within {candidates} candidates")]
    ScanCeiling {
        modulus: BigUint,
        floor: BigUint,
        candidates: u64,
    },

    #[error("could not factor {0} within the configured budget")]
    FactorBudget(BigUint),

    #[error("{order} does not divide p - 1 = {p_minus_one}")]
    OrderNotDividing { order: u64, p_minus_one: BigUint },

    #[error("{0} is not prime")]
    NotPrime(BigUint),

    #[error("strategy `{strategy}` cannot realize a {target} target")]
    StrategyMismatch {
        strategy: &'static str,
        target: &'static str,
    },

    #[error("polynomial vanishes on a primitive {0}-th root of unity")]
    Degenerate(u64),

    #[error("sequence is not realizable at n = {n}: {reason}")]
    NotRealizable { n: usize, reason: String },

    #[error("group of order {size} exceeds the enumeration budget {budget}")]
    EnumerationBudget { size: BigUint, budget: u64 },

    /// Root isolation did not certify every root; the partial enclosures are
    /// kept as `(center re, center im, radius)` approximations.
    #[error("root isolation did not converge after {iterations} refinements")]
    NonConvergence {
        iterations: usize,
        partial: Vec<(f64, f64, f64)>,
    },

    #[error("precision budget of {0} bits exhausted before the value was decided")]
    PrecisionExhausted(u32),

    #[error("sequence has no positive entries")]
    AllZero,

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Whether the error comes from a computation budget rather than bad input.
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            Error::ScanCeiling { .. }
                | Error::FactorBudget(_)
                | Error::EnumerationBudget { .. }
                | Error::NonConvergence { .. }
                | Error::PrecisionExhausted(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
