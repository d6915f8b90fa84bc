use std::path::PathBuf;

/// Errors from file formats and experiment drivers.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] fcagraph_core::Error),
    #[error("cannot access {}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("no data rows")]
    EmptyFile,
    #[error("non-numeric cell at row {row}, column {column}: {cell:?}")]
    NonNumeric {
        row: usize,
        column: usize,
        cell: String,
    },
    #[error("non-finite value at row {row}, column {column}")]
    NonFinite { row: usize, column: usize },
    #[error("ragged row {row}: {found} columns, expected {expected}")]
    RaggedRow {
        row: usize,
        found: usize,
        expected: usize,
    },
    #[error("label column {0} not found")]
    LabelColumn(String),
    #[error("line {line}: {token:?} is not an item index")]
    BadItem { line: usize, token: String },
    #[error("line {line}: item {item} appears twice")]
    RepeatedItem { line: usize, item: usize },
    #[error("invalid min support {0:?}: expected a count or a fraction in [0, 1]")]
    MinSupport(String),
    #[error("invalid sweep {0:?}: expected FROM:TO:STEP with 1 <= FROM <= TO and STEP >= 1")]
    Sweep(String),
    #[error("sweep value k = {k} must be below n = {n}")]
    SweepTooLarge { k: usize, n: usize },
    #[error("at least one trial is required")]
    NoTrials,
    #[error("{0}")]
    Document(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn io_error(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> Error {
    let path = path.into();
    move |source| Error::Io { path, source }
}
