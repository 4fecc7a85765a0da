use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("point is not in the polytope")]
    NotInPolytope,

    #[error("direction is not in the kernel of the equality rows")]
    NotInKernel,

    #[error("zero vector where a non-zero direction is required")]
    ZeroVector,

    #[error("direction is unbounded: no inequality row limits the step")]
    Unbounded,

    #[error("no positive step is possible along this direction")]
    NoStep,

    #[error("direction is not a circuit")]
    NotACircuit,

    #[error("subset budget of {budget} exceeded")]
    BudgetExceeded { budget: u64 },

    #[error("operation needs a complete facet description")]
    IncompleteDescription,

    #[error("depth limit {limit} reached without resolving the distance")]
    DepthLimit { limit: usize },

    #[error("stacked constraint matrix does not have full column rank (rank {rank} < {ncols})")]
    NotFullColumnRank { rank: usize, ncols: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("graph is disconnected or has fewer than two nodes")]
    BadGraph,

    #[error("walk construction failed: {0}")]
    ConstructionFailed(String),

    #[error("invariant violated after {stage}: {detail}")]
    InvariantViolated { stage: String, detail: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
