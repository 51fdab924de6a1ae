use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("the cbr approach needs a case base")]
    MissingCasebase,
    #[error("case base line {line}: {message}")]
    CaseParse { line: usize, message: String },
    #[error("invalid case '{name}': {message}")]
    InvalidCase { name: String, message: String },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}
