//! Crate-wide error type.

use std::path::PathBuf;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    // --- corpus ingestion ---
    #[error("vocabulary is empty after filtering (min_doc_freq = {min_doc_freq})")]
    EmptyVocabulary { min_doc_freq: usize },
    #[error("{path}:{line}: malformed line: {reason}")]
    MalformedLine {
        path: PathBuf,
        line: usize,
        reason: String,
    },
    #[error("{path}:{line}: unknown label {label:?}")]
    UnknownLabel {
        path: PathBuf,
        line: usize,
        label: String,
    },
    #[error("corpus must contain both classes")]
    SingleClass,
    #[error("need at least {needed} documents, got {got}")]
    TooFewDocuments { needed: usize, got: usize },
    #[error("parse error in {path} at byte {offset}: {reason}")]
    ParseError {
        path: PathBuf,
        offset: usize,
        reason: String,
    },
    #[error("missing class directory {0}")]
    MissingDirectory(PathBuf),
    #[error("requested {requested} negative samples but only {available} are available")]
    SampleTooLarge { requested: usize, available: usize },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed dump {path}:{line}: {reason}")]
    MalformedDump {
        path: PathBuf,
        line: usize,
        reason: String,
    },

    // --- parameters and shapes ---
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("k = {k} out of range, must be in [1, {max}]")]
    InvalidK { k: usize, max: usize },
    #[error("invalid config {path}:{line}: {reason}")]
    InvalidConfig {
        path: PathBuf,
        line: usize,
        reason: String,
    },

    // --- numerical failures ---
    #[error("prototypes are numerically identical (separation {separation:.3e})")]
    IdenticalPrototypes { separation: f64 },
    #[error("iteration cap {iterations} reached, residual {residual:.3e}")]
    ConvergenceFailure { iterations: usize, residual: f64 },
    #[error("gradient descent stopped at |grad| = {grad_norm:.3e} after {iterations} iterations")]
    NonConvergence { grad_norm: f64, iterations: usize },

    // --- classification ---
    #[error("class {class:?} has {count} members, fewer than {folds} folds")]
    TooFewPerClass {
        class: &'static str,
        count: usize,
        folds: usize,
    },
    #[error("confusion matrix is empty")]
    EmptyMatrix,

    // --- harness ---
    #[error("need at least 2 dimension points per method, got {0}")]
    InsufficientPoints(usize),
}

impl Error {
    /// CLI exit code: 1 usage error, 2 data error, 3 numerical failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidParams(_)
            | Error::InvalidK { .. }
            | Error::InvalidConfig { .. }
            | Error::InsufficientPoints(_) => 1,
            Error::EmptyVocabulary { .. }
            | Error::MalformedLine { .. }
            | Error::UnknownLabel { .. }
            | Error::SingleClass
            | Error::TooFewDocuments { .. }
            | Error::ParseError { .. }
            | Error::MissingDirectory(_)
            | Error::SampleTooLarge { .. }
            | Error::Io { .. }
            | Error::MalformedDump { .. }
            | Error::DimensionMismatch { .. }
            | Error::TooFewPerClass { .. }
            | Error::EmptyMatrix => 2,
            Error::IdenticalPrototypes { .. }
            | Error::ConvergenceFailure { .. }
            | Error::NonConvergence { .. } => 3,
        }
    }
}
