use thiserror::Error;

/// Errors raised by state construction and the entanglement measures.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum MreError {
    #[error("invalid-subsystem: {0}")]
    InvalidSubsystem(String),

    #[error("not-hermitian: max |M - M^dagger| = {0:e}")]
    NotHermitian(f64),

    #[error("not-psd: eigenvalue {0:e} below tolerance")]
    NotPsd(f64),

    #[error("invalid-dimension: {0}")]
    InvalidDimension(String),

    #[error("invalid-pair: ({0}, {1})")]
    InvalidPair(usize, usize),

    #[error("domain-error: {0}")]
    Domain(String),

    #[error("dim-mismatch: {0} vs {1}")]
    DimMismatch(usize, usize),

    #[error("support-anomaly: relative entropy is infinite (violation mass {0:e})")]
    SupportAnomaly(f64),

    #[error("unsupported-size: {0} qubits (supported {1}..={2})")]
    UnsupportedSize(usize, usize, usize),

    #[error("not-isometry: max |W^dagger W - I| = {0:e}")]
    NotIsometry(f64),

    #[error("not-normalized: {0}")]
    NotNormalized(String),

    #[error("invalid-trace: {0}")]
    InvalidTrace(f64),
}

pub type Result<T> = std::result::Result<T, MreError>;
