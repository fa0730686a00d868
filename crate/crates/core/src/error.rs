use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("edge ({u}, {v}) has an endpoint outside 1..={n}")]
    VertexOutOfRange { u: usize, v: usize, n: usize },
    #[error("arrangement covers {got} vertices but the graph has {expected}")]
    ArrangementSize { expected: usize, got: usize },
    #[error("arrangement is not a permutation of 1..={n}: {reason}")]
    NotAPermutation { n: usize, reason: String },
    /// A precondition on the numeric arguments of a formula was violated.
    #[error("{0}")]
    Domain(String),
    /// The statistic exists only when some quantity is non-zero (e.g. z with V = 0).
    #[error("{what} is undefined: {reason}")]
    Undefined { what: &'static str, reason: String },
    #[error("{what} exceeds the configured cap of {cap}")]
    CapExceeded { what: String, cap: u64 },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{}: {source}", path.display())]
    File {
        path: std::path::PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }

    /// Process exit status used by the command-line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::CapExceeded { .. } => 3,
            Error::Undefined { .. } => 4,
            _ => 2,
        }
    }
}
