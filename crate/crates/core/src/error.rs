use std::path::PathBuf;

/// Errors produced anywhere in the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("layer file not found: {0}")]
    LayerFileNotFound(PathBuf),

    #[error("file not found: {0}")]
    FileNotFound(PathBuf),

    /// A malformed line in a text input. `line` is 1-based.
    #[error("{source_name}:{line}: {message}")]
    Parse {
        source_name: String,
        line: usize,
        message: String,
    },

    #[error("invalid manifest {path}: {message}")]
    Manifest { path: PathBuf, message: String },

    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("node {node:?} is isolated in every modality")]
    IsolatedNode { node: String },

    /// Gram-Schmidt hit a column whose residual vanished.
    #[error("rank deficient: column {column} has residual norm below 1e-12{}", iteration.map(|t| format!(" at iteration {t}")).unwrap_or_default())]
    RankDeficient {
        column: usize,
        iteration: Option<usize>,
    },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("need at least {k} points, got {n}")]
    TooFewPoints { n: usize, k: usize },

    #[error("oracle precondition violated: {0}")]
    Oracle(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(source_name: &str, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            source_name: source_name.to_string(),
            line,
            message: message.into(),
        }
    }
}
