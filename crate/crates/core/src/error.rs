use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("context mismatch: {0}")]
    ContextMismatch(String),

    #[error("{0} is not an odd prime below 2^31")]
    BadCharacteristic(u64),

    #[error("invalid ring: {0}")]
    InvalidRing(String),

    #[error("computation limit exceeded: {what} (limit {limit})")]
    ComputationLimit { what: &'static str, limit: usize },

    /// `B ⊆ A` was required for a length `λ(A/B)` but does not hold.
    #[error("containment violated in {term}: sub-ideal is not contained in the ambient ideal")]
    Containment { term: String },

    /// Two computational routes to the same number disagree.
    #[error("cross-check failed: {0}")]
    CrossCheck(String),

    #[error("exact division failed while computing {0}")]
    Division(&'static str),

    #[error("value did not stabilize: {0}")]
    NonStabilized(String),

    #[error("infinite length in {0}")]
    InfiniteLength(String),

    #[error("input is not polynomial of degree <= {degree}")]
    NotPolynomial { degree: usize },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("no reduction found after {attempts} sampling attempts")]
    RetriesExhausted { attempts: usize },
}
