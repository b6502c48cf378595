use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of a mathematical function.
    #[error("domain error in {function}: {detail}")]
    Domain { function: &'static str, detail: String },

    /// A system or quadrature configuration violates one of its invariants.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// An operation was called on a configuration it does not support.
    #[error("misuse: {0}")]
    Misuse(String),

    /// No blocklength satisfies the requested constraints.
    #[error("infeasible: {0}")]
    Infeasible(String),

    /// An iterative routine did not reach its tolerance.
    #[error("{routine} did not converge: {detail}")]
    NoConvergence { routine: &'static str, detail: String },

    /// Internal consistency check failed.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain(function: &'static str, detail: impl Into<String>) -> Error {
    Error::Domain {
        function,
        detail: detail.into(),
    }
}
