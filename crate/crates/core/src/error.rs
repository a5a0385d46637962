use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("linear system is inconsistent")]
    Inconsistent,

    #[error("no right inverse: {rows} rows but rank {rank}")]
    NoRightInverse { rows: usize, rank: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsupported combination: {0}")]
    Unsupported(String),

    #[error("leg {0} is not open")]
    ClosedLeg(usize),

    #[error("network is not an isometry: {0}")]
    NotIsometry(String),

    #[error("code is not CSS")]
    NotCss,

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("solver limit exceeded: {0}")]
    SolverLimit(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
