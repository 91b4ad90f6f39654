use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{what} = {requested} exceeds the configured budget of {limit}")]
    BudgetExceeded {
        what: &'static str,
        requested: u128,
        limit: u128,
    },

    #[error("{0} is not a fundamental discriminant")]
    NotFundamental(i64),

    #[error("gcd({a}, {q}) = {gcd} > 1")]
    NotCoprime { a: u64, q: u64, gcd: u64 },

    #[error("congruences #{first} (mod {first_modulus}) and #{second} (mod {second_modulus}) are inconsistent")]
    InconsistentCongruences {
        first: usize,
        second: usize,
        first_modulus: String,
        second_modulus: String,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
