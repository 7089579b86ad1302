use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Malformed or out-of-domain input.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// An adaptive procedure ran out of refinement budget before reaching its
    /// tolerance. `estimate` is the best value seen, `achieved` the last
    /// successive-difference error estimate.
    #[error("accuracy target {target:e} not reached ({context}): best estimate {estimate}, achieved {achieved:e}")]
    Accuracy {
        context: String,
        estimate: f64,
        achieved: f64,
        target: f64,
    },

    /// An improper integral did not settle.
    #[error("integral diverges or fails to converge: {0}")]
    Divergence(String),

    /// The symbol carries no tail model strong enough for the request.
    #[error("refused: {reason}")]
    Refused {
        reason: String,
        /// Smallest truncation that would satisfy the request, when one exists.
        required: Option<usize>,
    },

    /// Parameter combination the construction does not cover (e.g. odd dimension).
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// An iterative eigensolver failed to converge.
    #[error("eigensolver did not converge after {0} iterations")]
    NoConvergence(usize),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// True for budget/accuracy style failures (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Accuracy { .. } | Error::Divergence(_) | Error::NoConvergence(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
