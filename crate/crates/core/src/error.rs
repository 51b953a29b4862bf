use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("invalid matching: {0}")]
    InvalidMatching(String),

    #[error("invalid epsilon {eps}: {reason}")]
    Epsilon { eps: f64, reason: String },

    #[error("solver `{solver}` refused the instance: {reason}")]
    SolverRefused { solver: String, reason: String },

    #[error("solver `{solver}` returned an invalid matching on {context}: {detail}")]
    SolverOutput {
        solver: String,
        context: String,
        detail: String,
    },

    #[error("unknown solver `{0}`")]
    UnknownSolver(String),

    #[error("size cap exceeded: {0}")]
    CapExceeded(String),

    #[error("cannot generate instance: {0}")]
    Generate(String),

    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
