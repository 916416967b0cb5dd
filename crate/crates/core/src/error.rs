//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Model or sample parameters violate a documented precondition.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An input lies outside the domain of the requested operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A tuning inequality was violated. `constraint` names the inequality
    /// exactly as stated, e.g. `"beta < gamma0/2"`.
    #[error("constraint violated: {constraint} ({detail})")]
    Constraint {
        constraint: &'static str,
        detail: String,
    },

    /// A numerical routine (quadrature, special function) failed to converge.
    #[error("numerical error: {0}")]
    Numerical(String),

    /// An aggregate was requested over an empty input.
    #[error("empty input: {0}")]
    EmptyInput(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
