use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] canonset_core::Error),
    #[error(transparent)]
    Oracle(#[from] canonset_core::oracle::OracleError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Stream(#[from] std::io::Error),
    #[error("{what}, line {line}: {msg}")]
    Parse {
        what: String,
        line: usize,
        msg: String,
    },
    #[error("{0}")]
    Usage(String),
}

impl Error {
    pub(crate) fn parse(what: impl Into<String>, line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            what: what.into(),
            line,
            msg: msg.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
