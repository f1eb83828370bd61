use alloc::string::String;
use core::fmt;

/// Errors shared by all modules.
#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// Shape mismatch (non-square where square is required, etc.).
    Dimension(String),
    /// Input fails a structural precondition (not Hermitian, not PSD, ...).
    Domain(String),
    /// NaN or infinite entry.
    NonFinite,
    /// The zero matrix where a nonzero one is required.
    ZeroMatrix,
    /// Interior-point solver did not reach the gap target.
    NonConvergence(String),
    /// Unknown norm kind or flag value.
    UnknownKind(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Dimension(s) => write!(f, "dimension error: {s}"),
            Error::Domain(s) => write!(f, "domain error: {s}"),
            Error::NonFinite => write!(f, "non-finite entry"),
            Error::ZeroMatrix => write!(f, "zero matrix"),
            Error::NonConvergence(s) => write!(f, "solver did not converge: {s}"),
            Error::UnknownKind(s) => write!(f, "unknown kind: {s}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
