use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A libsvm line could not be parsed. `line` is 1-based, `token` is the
    /// 1-based whitespace-separated token position (the label is token 1).
    #[error("line {line}, token {token}: {message}")]
    Parse {
        line: u64,
        token: usize,
        message: String,
    },

    /// Failure while reading the `ordinal`-th example (1-based) of a stream.
    #[error("example {ordinal}: {source}")]
    Example {
        ordinal: u64,
        #[source]
        source: Box<Error>,
    },

    #[error("model file line {line}: {message}")]
    ModelFormat { line: u64, message: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    File {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn file(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::File {
            path: path.into(),
            source,
        }
    }
}
