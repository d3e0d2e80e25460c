use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("invalid dimension for {what}: {value}")]
    InvalidDimension { what: &'static str, value: usize },

    #[error("dimensions {rows}x{cols} exceed the supported size")]
    DimensionOverflow { rows: u64, cols: u64 },

    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("cholesky factorization failed at pivot {pivot} (value {value:e})")]
    NotPositiveDefinite { pivot: usize, value: f64 },

    #[error("cholesky solve did not reach residual {tolerance:e} (got {residual:e}) after {attempts} attempts, last alpha {alpha:e}")]
    IllConditioned {
        tolerance: f64,
        residual: f64,
        attempts: usize,
        alpha: f64,
    },

    #[error("conjugate gradient did not converge in {iterations} iterations (relative residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },

    #[error("label {label} at row {row} is out of range for {classes} classes")]
    LabelOutOfRange {
        row: usize,
        label: usize,
        classes: usize,
    },

    #[error("degenerate split: {0}")]
    DegenerateSplit(String),

    #[error("{0}")]
    Unsupported(String),

    #[error("too few replicates: {found} (need at least {required})")]
    TooFewReplicates { required: usize, found: usize },

    #[error("CSV {path}: {reason} at row {row}, column {col}")]
    CsvParse {
        path: String,
        row: usize,
        col: usize,
        reason: String,
    },

    #[error("CSV {path}: row {row} has {found} fields, expected {expected}")]
    CsvRagged {
        path: String,
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("CSV {0}: empty file")]
    CsvEmpty(String),

    #[error("bad matrix container magic {0:?}")]
    BadMagic([u8; 8]),

    #[error("unknown matrix container dtype code {0}")]
    BadDtype(u8),

    #[error("truncated matrix payload: expected {expected} bytes, found {found}")]
    Truncated { expected: u64, found: u64 },

    #[error("expected {expected} matrix, found {found}")]
    WrongDtype {
        expected: &'static str,
        found: &'static str,
    },

    #[error("download of {url} failed: {reason}")]
    Download { url: String, reason: String },

    #[error("checksum mismatch for {file}: expected {expected}, actual {actual}")]
    ChecksumMismatch {
        file: String,
        expected: String,
        actual: String,
    },

    #[error("malformed dataset file {file}: {reason}")]
    MalformedDataset { file: String, reason: String },

    #[error("manifest error at {path}: {reason}")]
    Manifest { path: String, reason: String },

    #[error("path not found: {0}")]
    MissingPath(PathBuf),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Stream(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

pub(crate) fn ensure_dim(context: &'static str, expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            context,
            expected,
            found,
        })
    }
}
