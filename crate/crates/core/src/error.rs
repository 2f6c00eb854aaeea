use thiserror::Error;

/// Crate-wide error type.
///
/// Budget-style failures (`ScanTooLarge`, `Budget`) are deliberately distinct
/// from precondition violations (`Domain`) so callers can map them to
/// different process exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("alphabet mismatch: expected q = {expected}, found q = {found}")]
    AlphabetMismatch { expected: u16, found: u16 },

    #[error("length mismatch: expected {expected} coordinates, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("symbol {symbol} out of range for alphabet of size {q}")]
    InvalidSymbol { symbol: u16, q: u16 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("pair scan over {size} words exceeds the opt-in limit of {limit}; use the forced variant to proceed")]
    ScanTooLarge { size: usize, limit: usize },

    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("infeasible: {what}: {details}")]
    Infeasible { what: String, details: String },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn infeasible(what: impl Into<String>, details: impl Into<String>) -> Self {
        Error::Infeasible {
            what: what.into(),
            details: details.into(),
        }
    }
}
