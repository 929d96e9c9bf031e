use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("io error: {0}")]
    Stream(#[from] io::Error),

    #[error("line {line}: malformed record: {message}")]
    MalformedRecord { line: usize, message: String },

    #[error("line {line}: invalid record {id:?}: {message}")]
    InvalidRecord {
        line: usize,
        id: String,
        message: String,
    },

    #[error("duplicate id {0:?}")]
    DuplicateId(String),

    #[error("record {id:?} has {found} vote counts, expected {expected}")]
    VotesLength {
        id: String,
        expected: usize,
        found: usize,
    },

    #[error("catalog too small: {0} record(s), at least 2 required")]
    CatalogTooSmall(usize),

    #[error("empty histogram: record {0:?} has no votes")]
    EmptyHistogram(String),

    #[error("dimension mismatch: {left} vs {right} categories")]
    DimensionMismatch { left: usize, right: usize },

    #[error("invalid edge ({u}, {v}, {w}) for {k} vertices")]
    InvalidEdge { u: u32, v: u32, w: f64, k: usize },

    #[error("graph not connected: {components} components")]
    NotConnected { components: usize },

    #[error("edge set is not a spanning tree: {0}")]
    NotATree(String),

    #[error(
        "eigenvector iteration did not converge after {iterations} iterations (residual {residual:e})"
    )]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("unknown id {0:?}")]
    UnknownId(String),

    #[error(
        "unknown measure {0:?} (expected degree, eigenvector, betweenness, closeness or total)"
    )]
    UnknownMeasure(String),

    #[error("bad {what}: {message}")]
    Format { what: &'static str, message: String },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn format(what: &'static str, message: impl Into<String>) -> Self {
        Error::Format {
            what,
            message: message.into(),
        }
    }

    /// True for failures of a numerical procedure rather than of its input.
    pub fn is_computation(&self) -> bool {
        matches!(self, Error::NoConvergence { .. })
    }
}
