use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("missing resource file: {}", .0.display())]
    MissingResource(PathBuf),

    #[error("cannot read {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("item {position} ({item:?}): {reason}")]
    Pretagged {
        position: usize,
        item: String,
        reason: String,
    },

    #[error("empty sentence")]
    EmptySentence,

    #[error("{resource} line {line}: {message}")]
    Resource {
        resource: &'static str,
        line: usize,
        message: String,
    },

    #[error("words present in both opinion lists: {}", .0.join(", "))]
    LexiconOverlap(Vec<String>),

    #[error("invalid pattern: {0}")]
    Pattern(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("prediction references unknown sentence {0}")]
    UnknownSentence(usize),

    #[error("gold file does not match corpus: {0}")]
    GoldMismatch(String),

    #[error("unknown output format {0:?} (expected text, machine or histogram)")]
    UnknownFormat(String),

    #[error("report mismatch: {0}")]
    ReportMismatch(String),

    #[error("malformed report line {line}: {message}")]
    Report { line: usize, message: String },

    #[error("corpus sentence {index}: {source}")]
    InSentence {
        index: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Process exit status for a failure surfaced by the CLI.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::MissingResource(_) => 2,
            Error::Io { source, .. } if source.kind() == std::io::ErrorKind::NotFound => 2,
            Error::Io { .. } => 1,
            Error::InSentence { source, .. } => source.exit_code(),
            _ => 3,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

/// Reads a UTF-8 resource, reporting missing files as [`Error::MissingResource`].
pub(crate) fn read_resource(path: &std::path::Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| {
        if e.kind() == std::io::ErrorKind::NotFound {
            Error::MissingResource(path.to_path_buf())
        } else {
            Error::io(path, e)
        }
    })
}
