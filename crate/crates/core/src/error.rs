use thiserror::Error;

/// Errors for all exact-algebra operations in this crate.
#[derive(Debug, Error)]
pub enum CaError {
    /// Operands live in different rings (modulus or variable list differ).
    #[error("ring mismatch: {0}")]
    RingMismatch(String),

    /// Matrix dimensions do not conform.
    #[error("shape error: {0}")]
    Shape(String),

    /// Input outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A stated precondition is violated; the caller must normalize first.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A configured resource cap (degree, basis size, search depth) was hit.
    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),

    /// Input could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),

    /// A condition that the underlying theory rules out was observed.
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

impl CaError {
    /// Stable process exit code contract: 2 input errors, 3 precondition,
    /// 4 resource caps, 1 everything else that is a verified-false style failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CaError::Parse(_) => 2,
            CaError::RingMismatch(_) | CaError::Shape(_) | CaError::Domain(_) => 2,
            CaError::Precondition(_) => 3,
            CaError::ResourceCap(_) => 4,
            CaError::Internal(_) => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, CaError>;
