use std::io;
use std::path::PathBuf;

/// Everything the front end can fail with, each mapped to an exit status.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{source_name}:{line}: {message}")]
    Parse { source_name: String, line: usize, message: String },
    #[error("{source_name}: attribute `{attribute}` is not numeric ({kind})")]
    UnsupportedFeature { source_name: String, attribute: String, kind: String },
    #[error("{source_name}: {rows} row(s) with missing values, first at row {first_row}")]
    MissingValues { source_name: String, rows: usize, first_row: usize },
    #[error("{source_name}: non-finite value in row(s) {rows:?}")]
    NonFinite { source_name: String, rows: Vec<usize> },
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] smotenn_core::Error),
    #[error("{0}")]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    Json(#[from] serde_json::Error),
    #[error("every benchmark run failed")]
    AllRunsFailed,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub fn io(path: impl Into<PathBuf>) -> impl FnOnce(io::Error) -> Error {
        let path = path.into();
        move |source| Error::Io { path, source }
    }

    /// 1 usage or configuration, 2 algorithmic precondition, 3 I/O.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Io { .. } => 3,
            Error::Csv(e) if e.is_io_error() => 3,
            Error::Core(e) => match e.kind() {
                smotenn_core::ErrorKind::Config => 1,
                smotenn_core::ErrorKind::Precondition => 2,
            },
            Error::AllRunsFailed => 2,
            _ => 1,
        }
    }
}
