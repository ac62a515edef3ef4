use thiserror::Error;

/// Errors shared across the library.
///
/// Budget violations get their own variants so callers (notably the CLI and
/// the scan experiments) can distinguish "bad input" from "instance too large
/// for this mode".
#[derive(Debug, Error)]
pub enum Error {
    #[error("characteristic {0} is not prime")]
    NonPrimeCharacteristic(u64),
    #[error("extension degree must be at least 1")]
    InvalidDegree,
    #[error("field size {0} exceeds the supported maximum of 256")]
    FieldTooLarge(u64),
    #[error("label {label} out of range for field of size {q}")]
    LabelOutOfRange { label: u16, q: u16 },
    #[error("elements belong to different fields")]
    FieldMismatch,
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("{0}")]
    InvalidParameter(String),
    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("Gram matrix is not real symmetric (max deviation {0:.3e})")]
    NonRealGram(f64),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Exit code classification used by the CLI: 2 for budget violations,
    /// 1 for everything else.
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded(_))
    }
}
