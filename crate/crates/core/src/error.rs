use alloc::boxed::Box;
use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Errors raised by the resampling, search and statistics routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A dataset violates a structural invariant (e.g. one class is absent).
    #[error("degenerate dataset: {0}")]
    DegenerateDataset(String),
    /// Rows of mismatched width, non-finite values, duplicate ids.
    #[error("invalid dataset: {0}")]
    InvalidDataset(String),
    /// A parameter combination that can never be valid (`N >= K`, `rho >= 1`, ...).
    #[error("invalid configuration: {0}")]
    Config(String),
    /// Valid parameters that the data at hand cannot satisfy (e.g. `minority <= k`).
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("partition planning failed: {0}")]
    Planning(String),
    #[error("block {block}: {source}")]
    Block { block: usize, source: Box<Error> },
    #[error("undefined metric: {0}")]
    UndefinedMetric(String),
    #[error("index is empty")]
    EmptyIndex,
}

/// Coarse classification used by front ends to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Config,
    Precondition,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::DegenerateDataset(_) | Error::InvalidDataset(_) | Error::Config(_) | Error::Planning(_) => {
                ErrorKind::Config
            }
            Error::Precondition(_) | Error::UndefinedMetric(_) | Error::EmptyIndex => ErrorKind::Precondition,
            Error::Block { source, .. } => source.kind(),
        }
    }
}

macro_rules! bail {
    ($variant:ident, $($arg:tt)*) => {
        return Err($crate::Error::$variant(alloc::format!($($arg)*)))
    };
}
pub(crate) use bail;
