use thiserror::Error;

/// Errors raised by ideal arithmetic, the checks, and the literal parsers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("all generators are zero")]
    AllGeneratorsZero,

    #[error("invalid order Z[sqrt({d})]: {reason}")]
    InvalidOrder { d: i64, reason: String },

    #[error("invalid value group: {0}")]
    InvalidValueGroup(String),

    #[error("ideal {0} is not integral")]
    NotIntegral(String),

    #[error("norm {norm} needs {lattices} candidate lattices, above the budget of {budget}")]
    NormBoundExceeded {
        norm: String,
        lattices: u64,
        budget: u64,
    },

    #[error("{0} is not an invertible prime")]
    NonInvertiblePrime(String),

    #[error("enumerated universe has {size} members, above the limit of {limit}")]
    BudgetExceeded { size: usize, limit: usize },

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("domain is not pseudo-Dedekind on this budget (witness {0}); the unit-closure restriction is not conclusive")]
    NotPseudoDedekind(String),

    #[error("parse error at position {pos} in `{input}`: {msg}")]
    Parse {
        input: String,
        pos: usize,
        msg: String,
    },

    #[error("validation error: {0}")]
    Validation(String),

    #[error("{0}")]
    Usage(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
