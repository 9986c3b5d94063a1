//! Shared error type for operations that can exhaust budgets or detect
//! modeling inconsistencies.

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("resource limit exceeded during {what} (budget {budget})")]
    ResourceLimit { what: String, budget: usize },

    #[error("construction inconsistent: {0}")]
    ConstructionInconsistent(String),

    #[error("construction failure: {0}")]
    ConstructionFailure(String),

    #[error("operation not applicable: {0}")]
    NotApplicable(String),

    #[error("the given edges do not bound a singular geodesic segment")]
    NotGeodesic,

    #[error("cache error: {0}")]
    Cache(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
