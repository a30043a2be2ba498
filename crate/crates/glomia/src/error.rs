//! Crate-wide error type.

use std::path::PathBuf;
use thiserror::Error;

/// Everything that can go wrong across parsing, numerics, training and
/// attack orchestration.
#[derive(Debug, Error)]
pub enum Error {
    #[error("missing required file: {path}")]
    FileMissing { path: PathBuf },

    #[error("edge ({a}, {b}) crosses graphs {graph_a} and {graph_b}")]
    CrossGraphEdge {
        a: usize,
        b: usize,
        graph_a: usize,
        graph_b: usize,
    },

    #[error("{file}: {got} rows, expected {expected}")]
    RowCountMismatch {
        file: String,
        got: usize,
        expected: usize,
    },

    #[error("feature mode {mode} needs {file}, which is absent")]
    FeatureSourceMissing { mode: String, file: String },

    #[error("{file}:{line}: malformed line: {reason}")]
    MalformedLine {
        file: String,
        line: usize,
        reason: String,
    },

    #[error("corpus is empty")]
    EmptyCorpus,

    #[error("graph has no nodes")]
    EmptyGraph,

    #[error("shape mismatch in {op}: {lhs:?} vs {rhs:?}")]
    Shape {
        op: &'static str,
        lhs: (usize, usize),
        rhs: (usize, usize),
    },

    #[error("invalid range: lo {lo} must be strictly below hi {hi}")]
    Range { lo: f64, hi: f64 },

    #[error("non-finite value in {context}")]
    Numerical { context: String },

    #[error("training diverged at epoch {epoch} (loss {loss})")]
    Diverged { epoch: usize, loss: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("bad checkpoint: {0}")]
    Checkpoint(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Attach a path to a raw I/O error.
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Stable machine-readable tag for this error kind, used by the CLI's
    /// JSON error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::FileMissing { .. } => "file_missing",
            Error::CrossGraphEdge { .. } => "cross_graph_edge",
            Error::RowCountMismatch { .. } => "row_count_mismatch",
            Error::FeatureSourceMissing { .. } => "feature_source_missing",
            Error::MalformedLine { .. } => "malformed_line",
            Error::EmptyCorpus => "empty_corpus",
            Error::EmptyGraph => "empty_graph",
            Error::Shape { .. } => "shape",
            Error::Range { .. } => "range",
            Error::Numerical { .. } => "numerical",
            Error::Diverged { .. } => "diverged",
            Error::Config(_) => "config",
            Error::Degenerate(_) => "degenerate",
            Error::Checkpoint(_) => "checkpoint",
            Error::Io { .. } => "io",
            Error::Json(_) => "json",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
